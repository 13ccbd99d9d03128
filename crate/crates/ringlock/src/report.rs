//! Report rendering: a text form and a JSON form for every subcommand.
//!
//! Both forms are deterministic to the byte for a given input — JSON keys
//! are emitted sorted, collections are already canonically ordered — with
//! one deliberate exception: the timing footer. Timing goes through
//! [`append_timing`] (text) and [`finish_json`] (JSON) so downstream
//! tooling can strip or null exactly one well-known location and compare
//! the rest byte for byte.

use serde_json::{json, Map, Value};

use crate::circulation::{AdmissibleKReport, MIN_K_NOTE};
use crate::decide::{Decision, IterationTrace, Ring11Verdict, Verdict};
use crate::differential::{DifferentialConfig, DifferentialReport};
use crate::oracle::ScanOutcome;
use crate::protocols::{ProtocolSpec, Topology};
use crate::transition::TransitionSet;
use crate::witness::NaiveOutcome;

/// Everything the `check` subcommand has to show.
pub struct CheckData {
    pub spec: ProtocolSpec,
    pub outcome: CheckOutcome,
    /// Present when a witness was requested (symmetric protocols only).
    pub witness: Option<NaiveOutcome>,
    /// Present when circulation was requested.
    pub circulation: Option<CirculationView>,
}

pub enum CheckOutcome {
    Symmetric(Verdict),
    Ring11(Ring11Verdict),
}

impl CheckOutcome {
    pub fn decision(&self) -> Decision {
        match self {
            CheckOutcome::Symmetric(v) => v.decision,
            CheckOutcome::Ring11(v) => v.decision,
        }
    }
}

/// What the circulation search had to work with.
pub enum CirculationView {
    Pairs(AdmissibleKReport),
    /// The protocol is FREE: no kernel, nothing to search.
    EmptyKernel,
}

fn triples(set: &TransitionSet) -> Vec<[u8; 3]> {
    set.iter()
        .map(|t| {
            let (p, o, w) = t.as_triple();
            [p, o, w]
        })
        .collect()
}

fn transition_row(set: &TransitionSet) -> String {
    set.iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// The one-line protocol header shared by every report.
pub fn protocol_line(spec: &ProtocolSpec) -> String {
    match &spec.topology {
        Topology::Symmetric(t) => format!(
            "protocol: {} (symmetric, m={}, {} transitions)",
            spec.name,
            t.m(),
            t.len()
        ),
        Topology::Ring11 { p0, others } => format!(
            "protocol: {} (ring11, m={}, {}+{} transitions)",
            spec.name,
            p0.m(),
            p0.len(),
            others.len()
        ),
    }
}

fn push_refinement_text(out: &mut String, trace: &IterationTrace) {
    out.push_str("refinement:\n");
    for (i, size) in trace.sizes().iter().enumerate() {
        if i == 0 {
            out.push_str(&format!("  iterate 0: {size} transitions\n"));
        } else {
            let removed = &trace.removed[i - 1];
            out.push_str(&format!(
                "  iterate {i}: {size} transitions (removed {})\n",
                transition_row(removed)
            ));
        }
    }
    match trace.emptied_at {
        Some(at) => out.push_str(&format!(
            "  cyclic part empty at iterate {at}: FREE after {} refinement(s)\n",
            trace.applications()
        )),
        None => out.push_str(&format!(
            "  fixed point after {} refinement(s)\n",
            trace.applications()
        )),
    }
}

fn push_witness_text(out: &mut String, outcome: &NaiveOutcome) {
    out.push_str("witness:\n");
    out.push_str(&format!(
        "  cycle-chain search: {} candidate cycle(s), {} survivor(s)\n",
        outcome.candidates, outcome.survivors
    ));
    match &outcome.witness {
        Some(cycle) => {
            out.push_str(&format!(
                "  witness cycle (length {}): {cycle}\n",
                cycle.len()
            ));
            out.push_str(&format!(
                "  enabling walks: {} total, showing {}\n",
                outcome.walks_total,
                outcome.walks.len()
            ));
            for walk in &outcome.walks {
                out.push_str(&format!("    {walk}\n"));
            }
        }
        None => out.push_str("  no self-sustaining cycle: FREE\n"),
    }
}

fn push_circulation_text(out: &mut String, view: &CirculationView) {
    out.push_str("circulation:\n");
    match view {
        CirculationView::EmptyKernel => {
            out.push_str("  kernel is empty: no wrap-arounds to search\n");
        }
        CirculationView::Pairs(report) => {
            out.push_str(&format!(
                "  admissible (a, K) pairs for a <= {}, K <= {}:\n",
                report.a_max, report.k_max
            ));
            if report.pairs.is_empty() {
                out.push_str("    none\n");
            } else {
                let rendered: Vec<String> = report
                    .pairs
                    .iter()
                    .map(|(a, k)| format!("({a}, {k})"))
                    .collect();
                out.push_str(&format!("    {}\n", rendered.join(" ")));
            }
            if let Some((start, period)) = report.h_period {
                out.push_str(&format!(
                    "  graph powers repeat from exponent {start} with period {period}\n"
                ));
            }
            if let Some((start, period)) = report.e_period {
                out.push_str(&format!(
                    "  propagation powers repeat from exponent {start} with period {period}\n"
                ));
            }
            match &report.arc_exponent_ks {
                Some(ks) if !ks.is_empty() => {
                    let rendered: Vec<String> = ks.iter().map(|k| k.to_string()).collect();
                    out.push_str(&format!(
                        "  K compatible with the arc-count exponent {}: {}\n",
                        report.e_arc_count,
                        rendered.join(", ")
                    ));
                }
                Some(_) => out.push_str(&format!(
                    "  K compatible with the arc-count exponent {}: none\n",
                    report.e_arc_count
                )),
                None => out.push_str(&format!(
                    "  arc-count exponent {} exceeds the searched powers\n",
                    report.e_arc_count
                )),
            }
            out.push_str(&format!("  note: {MIN_K_NOTE}\n"));
            match report.oracle_min_k {
                Some(k) => out.push_str(&format!("  oracle minimum: K={k}\n")),
                None => out.push_str("  oracle minimum: not determined\n"),
            }
        }
    }
}

/// Text form of the `check` subcommand.
pub fn render_check_text(data: &CheckData, explain: bool) -> String {
    let mut out = String::new();
    out.push_str(&protocol_line(&data.spec));
    out.push('\n');
    out.push_str(&format!("decision: {}\n", data.outcome.decision()));
    match &data.outcome {
        CheckOutcome::Symmetric(verdict) => {
            if verdict.kernel.is_empty() {
                out.push_str("kernel: empty\n");
            } else {
                out.push_str(&format!(
                    "kernel ({} transitions): {}\n",
                    verdict.kernel.len(),
                    transition_row(&verdict.kernel)
                ));
            }
            if explain {
                push_refinement_text(&mut out, &verdict.trace);
            }
        }
        CheckOutcome::Ring11(verdict) => {
            out.push_str(&format!(
                "kernel at position 0 ({} transitions): {}\n",
                verdict.kernel_p0.len(),
                transition_row(&verdict.kernel_p0)
            ));
            out.push_str(&format!(
                "kernel at other positions ({} transitions): {}\n",
                verdict.kernel_other.len(),
                transition_row(&verdict.kernel_other)
            ));
            if let Some(shadows) = &verdict.shadows {
                out.push_str("interface shadows:\n");
                out.push_str(&format!("  into position 0: {}\n", shadows.before_p0));
                out.push_str(&format!("  out of position 0: {}\n", shadows.after_p0));
                out.push_str(&format!("  between others: {}\n", shadows.between_others));
            }
            if explain {
                let sizes: Vec<String> = verdict
                    .p0_iterates
                    .iter()
                    .map(|s| s.len().to_string())
                    .collect();
                out.push_str("refinement:\n");
                out.push_str(&format!(
                    "  position-0 candidates: {}\n",
                    sizes.join(" -> ")
                ));
                let apps: Vec<String> = verdict
                    .other_traces
                    .iter()
                    .map(|t| t.applications().to_string())
                    .collect();
                out.push_str(&format!(
                    "  other-side refinements per round: {}\n",
                    apps.join(", ")
                ));
            }
        }
    }
    if let Some(witness) = &data.witness {
        push_witness_text(&mut out, witness);
    }
    if let Some(view) = &data.circulation {
        push_circulation_text(&mut out, view);
    }
    out
}

fn trace_json(trace: &IterationTrace) -> Value {
    json!({
        "applications": trace.applications(),
        "sizes": trace.sizes(),
        "removed": trace.removed.iter().map(triples).collect::<Vec<_>>(),
        "emptied_at": trace.emptied_at,
    })
}

fn shadow_json(shadows: &crate::operators::ShadowSet) -> Value {
    Value::Array(
        shadows
            .iter()
            .map(|(a, b)| json!([a.0, b.0]))
            .collect(),
    )
}

fn witness_json_value(outcome: &NaiveOutcome) -> Value {
    json!({
        "decision": outcome.decision.to_string(),
        "candidates": outcome.candidates,
        "survivors": outcome.survivors,
        "longest_cycle": outcome.longest_cycle,
        "cycle": outcome.witness.as_ref().map(|c| {
            c.transitions().iter().map(|t| {
                let (p, o, w) = t.as_triple();
                json!([p, o, w])
            }).collect::<Vec<_>>()
        }),
        "walks_total": outcome.walks_total.to_string(),
        "walks_shown": outcome.walks.iter().map(|walk| {
            walk.entries().iter().map(|t| {
                let (p, o, w) = t.as_triple();
                json!([p, o, w])
            }).collect::<Vec<_>>()
        }).collect::<Vec<_>>(),
    })
}

fn circulation_json_value(view: &CirculationView) -> Value {
    match view {
        CirculationView::EmptyKernel => json!({ "kernel_empty": true }),
        CirculationView::Pairs(report) => json!({
            "kernel_empty": false,
            "a_max": report.a_max,
            "k_max": report.k_max,
            "pairs": report.pairs.iter().map(|(a, k)| json!([a, k])).collect::<Vec<_>>(),
            "h_period": report.h_period.map(|(s, p)| json!([s, p])),
            "e_period": report.e_period.map(|(s, p)| json!([s, p])),
            "e_arc_count": report.e_arc_count,
            "arc_exponent_ks": report.arc_exponent_ks,
            "oracle_min_k": report.oracle_min_k,
            "note": MIN_K_NOTE,
        }),
    }
}

fn spec_json(spec: &ProtocolSpec) -> Vec<(&'static str, Value)> {
    match &spec.topology {
        Topology::Symmetric(t) => vec![
            ("name", json!(spec.name)),
            ("topology", json!("symmetric")),
            ("m", json!(t.m())),
            ("transitions", json!(triples(t))),
        ],
        Topology::Ring11 { p0, others } => vec![
            ("name", json!(spec.name)),
            ("topology", json!("ring11")),
            ("m", json!(p0.m())),
            ("p0_transitions", json!(triples(p0))),
            ("other_transitions", json!(triples(others))),
        ],
    }
}

fn object(fields: Vec<(&'static str, Value)>) -> Value {
    let mut map = Map::new();
    for (k, v) in fields {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}

/// JSON form of the `check` subcommand (without the timing/version
/// envelope; see [`finish_json`]).
pub fn check_json(data: &CheckData) -> Value {
    let mut fields = spec_json(&data.spec);
    fields.push(("decision", json!(data.outcome.decision().to_string())));
    match &data.outcome {
        CheckOutcome::Symmetric(verdict) => {
            fields.push(("kernel", json!(triples(&verdict.kernel))));
            fields.push(("refinement", trace_json(&verdict.trace)));
        }
        CheckOutcome::Ring11(verdict) => {
            fields.push(("kernel_p0", json!(triples(&verdict.kernel_p0))));
            fields.push(("kernel_other", json!(triples(&verdict.kernel_other))));
            fields.push((
                "p0_iterate_sizes",
                json!(verdict.p0_iterates.iter().map(|s| s.len()).collect::<Vec<_>>()),
            ));
            fields.push((
                "other_refinements",
                Value::Array(verdict.other_traces.iter().map(trace_json).collect()),
            ));
            fields.push((
                "interface_shadows",
                match &verdict.shadows {
                    Some(shadows) => json!({
                        "into_p0": shadow_json(&shadows.before_p0),
                        "out_of_p0": shadow_json(&shadows.after_p0),
                        "between_others": shadow_json(&shadows.between_others),
                    }),
                    None => Value::Null,
                },
            ));
        }
    }
    if let Some(witness) = &data.witness {
        fields.push(("witness", witness_json_value(witness)));
    }
    if let Some(view) = &data.circulation {
        fields.push(("circulation", circulation_json_value(view)));
    }
    object(fields)
}

/// Text form of the `oracle` subcommand.
pub fn render_oracle_text(spec: &ProtocolSpec, scan: &ScanOutcome, budget: u64) -> String {
    let mut out = String::new();
    out.push_str(&protocol_line(spec));
    out.push('\n');
    out.push_str(&format!("oracle scan (budget {budget} nodes):\n"));
    let m = spec.topology.m() as u128;
    for (k, livelock) in &scan.per_k {
        let states = m.pow(*k);
        let verdict = if *livelock { "LIVELOCK" } else { "free" };
        out.push_str(&format!("  K={k}: {verdict} ({states} states)\n"));
    }
    match scan.min_livelock_k {
        Some(k) => out.push_str(&format!("smallest circulating ring scanned: K={k}\n")),
        None => out.push_str("no circulating ring in the scanned range\n"),
    }
    out
}

/// JSON form of the `oracle` subcommand.
pub fn oracle_json(spec: &ProtocolSpec, scan: &ScanOutcome, budget: u64) -> Value {
    let m = spec.topology.m() as u128;
    let mut fields = spec_json(spec);
    fields.push(("budget", json!(budget)));
    fields.push((
        "results",
        Value::Array(
            scan.per_k
                .iter()
                .map(|(k, livelock)| {
                    json!({
                        "k": k,
                        "livelock": livelock,
                        "states": m.pow(*k) as u64,
                    })
                })
                .collect(),
        ),
    ));
    fields.push(("min_livelock_k", json!(scan.min_livelock_k)));
    object(fields)
}

/// Text form of the `witness` subcommand.
pub fn render_witness_text(spec: &ProtocolSpec, outcome: &NaiveOutcome) -> String {
    let mut out = String::new();
    out.push_str(&protocol_line(spec));
    out.push('\n');
    out.push_str(&format!("decision: {}\n", outcome.decision));
    push_witness_text(&mut out, outcome);
    out
}

/// JSON form of the `witness` subcommand.
pub fn witness_json(spec: &ProtocolSpec, outcome: &NaiveOutcome) -> Value {
    let mut fields = spec_json(spec);
    fields.push(("decision", json!(outcome.decision.to_string())));
    fields.push(("witness", witness_json_value(outcome)));
    object(fields)
}

/// Text form of the `circulation` subcommand.
pub fn render_circulation_text(
    spec: &ProtocolSpec,
    decision: Decision,
    kernel_size: usize,
    view: &CirculationView,
) -> String {
    let mut out = String::new();
    out.push_str(&protocol_line(spec));
    out.push('\n');
    out.push_str(&format!("decision: {decision}\n"));
    out.push_str(&format!("kernel size: {kernel_size}\n"));
    push_circulation_text(&mut out, view);
    out
}

/// JSON form of the `circulation` subcommand.
pub fn circulation_json(
    spec: &ProtocolSpec,
    decision: Decision,
    kernel_size: usize,
    view: &CirculationView,
) -> Value {
    let mut fields = spec_json(spec);
    fields.push(("decision", json!(decision.to_string())));
    fields.push(("kernel_size", json!(kernel_size)));
    fields.push(("circulation", circulation_json_value(view)));
    object(fields)
}

/// Text form of the `fuzz` subcommand.
pub fn render_fuzz_text(config: &DifferentialConfig, report: &DifferentialReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "differential run: {} sampled case(s) from seed {}, m <= {}, size <= {}, oracle K={}..={}{}\n",
        config.cases,
        config.base_seed,
        config.max_m,
        config.max_len,
        config.scan_ks.start(),
        config.scan_ks.end(),
        if config.include_roster {
            ", plus the certified roster"
        } else {
            ""
        }
    ));
    out.push_str(&format!(
        "cases: {}  free: {}  livelock: {}\n",
        report.cases_run, report.free_cases, report.livelock_cases
    ));
    out.push_str(&format!(
        "livelock confirmation: {} by oracle, {} beyond the scan window (structurally checked)\n",
        report.oracle_confirmed, report.beyond_scan
    ));
    if report.is_clean() {
        out.push_str("disagreements: none\n");
    } else {
        out.push_str(&format!("disagreements: {}\n", report.disagreements.len()));
        for d in &report.disagreements {
            out.push_str(&format!("  {}: {}\n", d.name, d.kind));
            if let Some(protocol) = &d.protocol {
                out.push_str(&format!("    protocol: {protocol}\n"));
            }
            if let Some(minimized) = &d.minimized {
                out.push_str(&format!("    minimized: {minimized}\n"));
            }
        }
    }
    out
}

/// JSON form of the `fuzz` subcommand.
pub fn fuzz_json(config: &DifferentialConfig, report: &DifferentialReport) -> Value {
    object(vec![
        ("cases", json!(config.cases)),
        ("base_seed", json!(config.base_seed)),
        ("max_m", json!(config.max_m)),
        ("max_len", json!(config.max_len)),
        ("scan_k_min", json!(config.scan_ks.start())),
        ("scan_k_max", json!(config.scan_ks.end())),
        ("include_roster", json!(config.include_roster)),
        ("cases_run", json!(report.cases_run)),
        ("free_cases", json!(report.free_cases)),
        ("livelock_cases", json!(report.livelock_cases)),
        ("oracle_confirmed", json!(report.oracle_confirmed)),
        ("beyond_scan", json!(report.beyond_scan)),
        (
            "disagreements",
            Value::Array(
                report
                    .disagreements
                    .iter()
                    .map(|d| {
                        json!({
                            "name": d.name,
                            "kind": d.kind.to_string(),
                            "protocol": d.protocol.as_ref().map(triples),
                            "minimized": d.minimized.as_ref().map(triples),
                        })
                    })
                    .collect(),
            ),
        ),
    ])
}

/// Appends the timing footer to a text report.
pub fn append_timing(out: &mut String, micros: u64) {
    out.push_str(&format!("time: {micros}us\n"));
}

/// Wraps a report body with the version and timing envelope and renders
/// it as pretty JSON (sorted keys, trailing newline).
pub fn finish_json(body: Value, micros: u64) -> String {
    let Value::Object(mut map) = body else {
        panic!("report bodies are JSON objects");
    };
    map.insert(
        "tool_version".to_string(),
        json!(env!("CARGO_PKG_VERSION")),
    );
    map.insert("timing_us".to_string(), json!(micros));
    let mut text =
        serde_json::to_string_pretty(&Value::Object(map)).expect("reports serialize");
    text.push('\n');
    text
}
