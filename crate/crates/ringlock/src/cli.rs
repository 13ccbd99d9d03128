//! Command-line surface: argument shapes, subcommand logic, and exit
//! codes.
//!
//! Every subcommand is a pure function from parsed arguments to a
//! [`CmdOutput`] — text plus exit code — so the whole surface is testable
//! without spawning a process. The thin binary in `main.rs` only parses,
//! dispatches, prints, and exits.
//!
//! Exit codes are part of the contract:
//!
//! | code | meaning                                   |
//! |------|-------------------------------------------|
//! | 0    | decided: FREE (or informational success)  |
//! | 10   | decided: LIVELOCK                         |
//! | 2    | input error (files, flags, validation)    |
//! | 3    | undecided (budget exhausted, bounded search) |
//! | 20   | differential fuzzing found a disagreement |

use std::fmt::Display;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::circulation::{
    circulation_search, default_a_max, PropagationRelation, DEFAULT_K_MAX,
};
use crate::decide::{decide_ring11, decide_symmetric, Decision};
use crate::differential::{run_differential, DifferentialConfig, DifferentialReport};
use crate::format::{emit_protocol_with_header, parse_protocol};
use crate::graph::PseudolivelockGraph;
use crate::oracle::{node_budget_from_env, oracle_scan, OracleError};
use crate::protocols::{generate, is_certified, ProtocolSpec, Topology};
use crate::report::{
    append_timing, check_json, circulation_json, finish_json, fuzz_json, oracle_json,
    render_check_text, render_circulation_text, render_fuzz_text, render_oracle_text,
    render_witness_text, witness_json, CheckData, CheckOutcome, CirculationView,
};
use crate::witness::naive_decide;

pub const EXIT_FREE: i32 = 0;
pub const EXIT_LIVELOCK: i32 = 10;
pub const EXIT_INPUT_ERROR: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;
pub const EXIT_FUZZ_DISAGREEMENT: i32 = 20;

/// What a subcommand produced: the full output text and the process exit
/// code.
#[derive(Clone, Debug)]
pub struct CmdOutput {
    pub text: String,
    pub exit_code: i32,
}

impl CmdOutput {
    /// Error outputs belong on stderr; everything else is a report.
    pub fn is_error(&self) -> bool {
        matches!(self.exit_code, EXIT_INPUT_ERROR | EXIT_UNDECIDED)
    }
}

fn input_error(message: impl Display) -> CmdOutput {
    CmdOutput {
        text: format!("error: {message}\n"),
        exit_code: EXIT_INPUT_ERROR,
    }
}

fn undecided(message: impl Display) -> CmdOutput {
    CmdOutput {
        text: format!("undecided: {message}\n"),
        exit_code: EXIT_UNDECIDED,
    }
}

fn decision_exit(decision: Decision) -> i32 {
    match decision {
        Decision::Free => EXIT_FREE,
        Decision::Livelock => EXIT_LIVELOCK,
    }
}

/// Maps a differential report to the fuzz subcommand's exit code.
pub fn fuzz_exit_code(report: &DifferentialReport) -> i32 {
    if report.is_clean() {
        EXIT_FREE
    } else {
        EXIT_FUZZ_DISAGREEMENT
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "ringlock",
    version,
    about = "Livelock detection for self-disabling unidirectional ring protocols"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide livelock freedom for a protocol file.
    Check {
        /// Protocol file to check.
        file: PathBuf,
        /// Show the refinement iterates step by step.
        #[arg(long)]
        explain: bool,
        /// Also search for a witness cycle and its enabling walks
        /// (symmetric protocols only).
        #[arg(long)]
        witness: bool,
        /// Also search admissible wrap-around pairs for the kernel
        /// (symmetric protocols only).
        #[arg(long)]
        circulation: bool,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Decide concrete ring sizes exhaustively (the ground-truth oracle).
    Oracle {
        /// Protocol file to scan.
        file: PathBuf,
        /// Smallest ring size to scan.
        #[arg(long, default_value_t = 2)]
        k_min: u32,
        /// Largest ring size to scan.
        #[arg(long, default_value_t = 6)]
        k_max: u32,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Write a named protocol family instance as a protocol file.
    Gen {
        /// Family name (see `gen --help` for the roster).
        #[arg(help = "one of: coloring-det, coloring-nondet, agreement, \
                      sum-not-2-det, sum-not-2-nondet, dijkstra")]
        name: String,
        /// Domain size.
        #[arg(long, default_value_t = 3)]
        m: u8,
        /// Write to this path instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Differentially fuzz the decision pipeline against independent
    /// oracles.
    Fuzz {
        /// Number of seeded random cases.
        #[arg(long, default_value_t = 500)]
        cases: usize,
        /// Base seed; case i uses seed + i.
        #[arg(long, default_value_t = 0xD1FF)]
        seed: u64,
        /// Largest domain size sampled.
        #[arg(long, default_value_t = 3)]
        max_m: u8,
        /// Largest transition count sampled.
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        /// Largest ring size scanned by the oracle per case.
        #[arg(long, default_value_t = 5)]
        scan_max: u32,
        /// Skip the certified roster protocols.
        #[arg(long)]
        no_roster: bool,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Search for a witness cycle by independent cycle-chain pruning.
    Witness {
        /// Protocol file to search (symmetric only).
        file: PathBuf,
        /// Longest cycle length to enumerate; the search is complete when
        /// this reaches the transition count.
        #[arg(long)]
        max_len: Option<usize>,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Search admissible wrap-around pairs (a, K) over the kernel.
    Circulation {
        /// Protocol file to analyze (symmetric only).
        file: PathBuf,
        /// Largest graph-power exponent a to try.
        #[arg(long)]
        a_max: Option<usize>,
        /// Largest propagation-power exponent K to try.
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        k_max: usize,
        /// Also ask the oracle for the true minimum ring size up to k-max.
        #[arg(long)]
        scan: bool,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
}

fn load(path: &PathBuf) -> Result<ProtocolSpec, CmdOutput> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
    parse_protocol(&text).map_err(|e| input_error(e))
}

fn elapsed_us(start: Instant) -> u64 {
    start.elapsed().as_micros() as u64
}

fn run_check(
    file: PathBuf,
    explain: bool,
    witness: bool,
    circulation: bool,
    json: bool,
) -> CmdOutput {
    let spec = match load(&file) {
        Ok(spec) => spec,
        Err(out) => return out,
    };
    if (witness || circulation) && spec.topology.is_ring11() {
        return input_error(
            "--witness and --circulation support symmetric protocols only",
        );
    }
    let start = Instant::now();
    let data = match &spec.topology {
        Topology::Symmetric(t) => {
            let verdict = decide_symmetric(t);
            let witness_outcome = witness.then(|| naive_decide(t, t.len().max(2)));
            let circulation_view = circulation.then(|| {
                if verdict.kernel.is_empty() {
                    CirculationView::EmptyKernel
                } else {
                    let h = PseudolivelockGraph::build(&verdict.kernel).relation();
                    let e = PropagationRelation::for_kernel(&verdict.kernel);
                    let report = circulation_search(
                        &h,
                        e.matrix(),
                        default_a_max(verdict.kernel.len()),
                        DEFAULT_K_MAX,
                    )
                    .expect("default bounds are searchable");
                    CirculationView::Pairs(report)
                }
            });
            CheckData {
                spec: spec.clone(),
                outcome: CheckOutcome::Symmetric(verdict),
                witness: witness_outcome,
                circulation: circulation_view,
            }
        }
        Topology::Ring11 { p0, others } => {
            let verdict = match decide_ring11(p0, others) {
                Ok(verdict) => verdict,
                Err(e) => return input_error(e),
            };
            CheckData {
                spec: spec.clone(),
                outcome: CheckOutcome::Ring11(verdict),
                witness: None,
                circulation: None,
            }
        }
    };
    let exit_code = decision_exit(data.outcome.decision());
    let micros = elapsed_us(start);
    let text = if json {
        finish_json(check_json(&data), micros)
    } else {
        let mut text = render_check_text(&data, explain);
        append_timing(&mut text, micros);
        text
    };
    CmdOutput { text, exit_code }
}

fn run_oracle(file: PathBuf, k_min: u32, k_max: u32, json: bool) -> CmdOutput {
    let spec = match load(&file) {
        Ok(spec) => spec,
        Err(out) => return out,
    };
    if k_min < 2 || k_min > k_max {
        return input_error(format!(
            "scan range {k_min}..={k_max} is invalid: need 2 <= k-min <= k-max"
        ));
    }
    let budget = match node_budget_from_env() {
        Ok(budget) => budget,
        Err(e) => return input_error(e),
    };
    let start = Instant::now();
    let scan = match oracle_scan(&spec.topology, k_min..=k_max, budget) {
        Ok(scan) => scan,
        Err(e @ OracleError::BudgetExceeded { .. }) => return undecided(e),
        Err(e) => return input_error(e),
    };
    let exit_code = if scan.min_livelock_k.is_some() {
        EXIT_LIVELOCK
    } else {
        EXIT_FREE
    };
    let micros = elapsed_us(start);
    let text = if json {
        finish_json(oracle_json(&spec, &scan, budget), micros)
    } else {
        let mut text = render_oracle_text(&spec, &scan, budget);
        append_timing(&mut text, micros);
        text
    };
    CmdOutput { text, exit_code }
}

fn run_gen(name: String, m: u8, out: Option<PathBuf>) -> CmdOutput {
    let spec = match generate(&name, m) {
        Ok(spec) => spec,
        Err(e) => return input_error(e),
    };
    let mut header = vec![format!("generated: ringlock gen {name} --m {m}")];
    if !is_certified(&name, m) {
        header.push(
            "uncertified: the kernel fingerprint at this domain size has not been \
             verified against the oracle"
                .to_string(),
        );
    }
    let rendered = emit_protocol_with_header(&spec, &header);
    match out {
        Some(path) => match std::fs::write(&path, &rendered) {
            Ok(()) => CmdOutput {
                text: format!("wrote {}\n", path.display()),
                exit_code: EXIT_FREE,
            },
            Err(e) => input_error(format!("cannot write {}: {e}", path.display())),
        },
        None => CmdOutput {
            text: rendered,
            exit_code: EXIT_FREE,
        },
    }
}

#[allow(clippy::too_many_arguments)]
fn run_fuzz(
    cases: usize,
    seed: u64,
    max_m: u8,
    max_len: usize,
    scan_max: u32,
    no_roster: bool,
    json: bool,
) -> CmdOutput {
    if max_m < 2 {
        return input_error("max-m must be at least 2");
    }
    if max_len < 1 {
        return input_error("max-len must be at least 1");
    }
    if scan_max < 2 {
        return input_error("scan-max must be at least 2");
    }
    let budget = match node_budget_from_env() {
        Ok(budget) => budget,
        Err(e) => return input_error(e),
    };
    let config = DifferentialConfig {
        cases,
        base_seed: seed,
        max_m,
        max_len,
        scan_ks: 2..=scan_max,
        budget,
        include_roster: !no_roster,
        ..DifferentialConfig::default()
    };
    let start = Instant::now();
    let report = match run_differential(&config) {
        Ok(report) => report,
        Err(e @ OracleError::BudgetExceeded { .. }) => return undecided(e),
        Err(e) => return input_error(e),
    };
    let exit_code = fuzz_exit_code(&report);
    let micros = elapsed_us(start);
    let text = if json {
        finish_json(fuzz_json(&config, &report), micros)
    } else {
        let mut text = render_fuzz_text(&config, &report);
        append_timing(&mut text, micros);
        text
    };
    CmdOutput { text, exit_code }
}

fn run_witness(file: PathBuf, max_len: Option<usize>, json: bool) -> CmdOutput {
    let spec = match load(&file) {
        Ok(spec) => spec,
        Err(out) => return out,
    };
    let Topology::Symmetric(t) = &spec.topology else {
        return input_error("witness search supports symmetric protocols only");
    };
    let complete_len = t.len().max(2);
    let max_len = max_len.unwrap_or(complete_len);
    if max_len < 2 {
        return input_error("max-len must be at least 2");
    }
    let start = Instant::now();
    let outcome = naive_decide(t, max_len);
    // A bounded search that finds nothing has not proven freedom.
    let exit_code = match outcome.decision {
        Decision::Livelock => EXIT_LIVELOCK,
        Decision::Free if max_len >= complete_len => EXIT_FREE,
        Decision::Free => {
            return undecided(format!(
                "no witness cycle up to length {max_len}; livelock is not excluded \
                 (a complete search needs --max-len {complete_len})"
            ))
        }
    };
    let micros = elapsed_us(start);
    let text = if json {
        finish_json(witness_json(&spec, &outcome), micros)
    } else {
        let mut text = render_witness_text(&spec, &outcome);
        append_timing(&mut text, micros);
        text
    };
    CmdOutput { text, exit_code }
}

fn run_circulation(
    file: PathBuf,
    a_max: Option<usize>,
    k_max: usize,
    scan: bool,
    json: bool,
) -> CmdOutput {
    let spec = match load(&file) {
        Ok(spec) => spec,
        Err(out) => return out,
    };
    let Topology::Symmetric(t) = &spec.topology else {
        return input_error("circulation search supports symmetric protocols only");
    };
    let start = Instant::now();
    let verdict = decide_symmetric(t);
    let view = if verdict.kernel.is_empty() {
        CirculationView::EmptyKernel
    } else {
        let h = PseudolivelockGraph::build(&verdict.kernel).relation();
        let e = PropagationRelation::for_kernel(&verdict.kernel);
        let a_max = a_max.unwrap_or_else(|| default_a_max(verdict.kernel.len()));
        let mut report = match circulation_search(&h, e.matrix(), a_max, k_max) {
            Ok(report) => report,
            Err(e) => return input_error(e),
        };
        if scan {
            let budget = match node_budget_from_env() {
                Ok(budget) => budget,
                Err(e) => return input_error(e),
            };
            match oracle_scan(&spec.topology, 2..=k_max as u32, budget) {
                Ok(outcome) => report.oracle_min_k = outcome.min_livelock_k,
                Err(e @ OracleError::BudgetExceeded { .. }) => return undecided(e),
                Err(e) => return input_error(e),
            }
        }
        CirculationView::Pairs(report)
    };
    let exit_code = decision_exit(verdict.decision);
    let micros = elapsed_us(start);
    let text = if json {
        finish_json(
            circulation_json(&spec, verdict.decision, verdict.kernel.len(), &view),
            micros,
        )
    } else {
        let mut text =
            render_circulation_text(&spec, verdict.decision, verdict.kernel.len(), &view);
        append_timing(&mut text, micros);
        text
    };
    CmdOutput { text, exit_code }
}

/// Dispatches a parsed command line.
pub fn run(cli: Cli) -> CmdOutput {
    match cli.command {
        Command::Check {
            file,
            explain,
            witness,
            circulation,
            json,
        } => run_check(file, explain, witness, circulation, json),
        Command::Oracle {
            file,
            k_min,
            k_max,
            json,
        } => run_oracle(file, k_min, k_max, json),
        Command::Gen { name, m, out } => run_gen(name, m, out),
        Command::Fuzz {
            cases,
            seed,
            max_m,
            max_len,
            scan_max,
            no_roster,
            json,
        } => run_fuzz(cases, seed, max_m, max_len, scan_max, no_roster, json),
        Command::Witness { file, max_len, json } => run_witness(file, max_len, json),
        Command::Circulation {
            file,
            a_max,
            k_max,
            scan,
            json,
        } => run_circulation(file, a_max, k_max, scan, json),
    }
}
