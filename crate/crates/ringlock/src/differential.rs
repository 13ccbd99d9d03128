//! Differential fuzzing: three independent answers per protocol, and a
//! loud report when any two of them drift apart.
//!
//! Every case is decided by the fixed-point refinement, by the
//! cycle-chain decider (which shares none of its machinery), and — for
//! each ring size in a scan window — by the exhaustive oracle. The first
//! two must agree outright. The oracle's scan is bounded, so its silence
//! is weaker: a livelock whose smallest ring exceeds the window is not a
//! disagreement, but it must then stand up to structural scrutiny (a
//! nonempty kernel, a witness for every kernel edge, and a propagation
//! relation that commutes with the kernel's graph). Any failure anywhere
//! is recorded, and symmetric failures are shrunk greedily to a minimal
//! reproducing table.

use std::fmt;
use std::ops::RangeInclusive;

use crate::circulation::{
    commutes, interface_relation, witness_total_core, witness_totality, PropagationRelation,
};
use crate::decide::{decide_ring11, decide_symmetric, Decision, Verdict};
use crate::graph::PseudolivelockGraph;
use crate::oracle::{oracle_scan, OracleError, DEFAULT_NODE_BUDGET};
use crate::protocols::{roster, Topology};
use crate::sampler::sample_for_seed;
use crate::transition::TransitionSet;
use crate::witness::naive_decide;

/// Shape of a differential run.
#[derive(Clone, Debug)]
pub struct DifferentialConfig {
    /// Number of seeded random cases.
    pub cases: usize,
    /// First seed; case `i` uses `base_seed + i`.
    pub base_seed: u64,
    /// Largest domain size sampled.
    pub max_m: u8,
    /// Largest transition count sampled.
    pub max_len: usize,
    /// Ring sizes handed to the oracle for each case.
    pub scan_ks: RangeInclusive<u32>,
    /// Oracle node budget.
    pub budget: u64,
    /// Run the cycle-chain decider only on tables up to this size (its
    /// cycle enumeration is exponential in the worst case).
    pub naive_max_len: usize,
    /// Also run every certified roster protocol through the same checks.
    pub include_roster: bool,
}

impl Default for DifferentialConfig {
    fn default() -> Self {
        DifferentialConfig {
            cases: 500,
            base_seed: 0xD1FF,
            max_m: 3,
            max_len: 6,
            scan_ks: 2..=5,
            budget: DEFAULT_NODE_BUDGET,
            naive_max_len: 8,
            include_roster: true,
        }
    }
}

/// How two answers drifted apart on one case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DisagreementKind {
    /// Refinement and cycle-chain deciders answered differently.
    NaiveDisagrees { decision: Decision, naive: Decision },
    /// The refinement said FREE but a concrete ring circulates.
    FreeButRingCirculates { k: u32 },
    /// A livelock claim beyond the scan window failed its structural
    /// checks.
    UnsupportedLivelockClaim { details: Vec<String> },
}

impl fmt::Display for DisagreementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DisagreementKind::NaiveDisagrees { decision, naive } => write!(
                f,
                "refinement says {decision}, cycle-chain decider says {naive}"
            ),
            DisagreementKind::FreeButRingCirculates { k } => {
                write!(f, "refinement says FREE, but the ring of {k} circulates")
            }
            DisagreementKind::UnsupportedLivelockClaim { details } => {
                write!(f, "livelock beyond the scan window failed checks: ")?;
                for (i, d) in details.iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{d}")?;
                }
                Ok(())
            }
        }
    }
}

/// One recorded failure.
#[derive(Clone, Debug)]
pub struct Disagreement {
    /// `seed-N` for sampled cases, the roster name otherwise.
    pub name: String,
    pub kind: DisagreementKind,
    /// The offending table, for symmetric cases.
    pub protocol: Option<TransitionSet>,
    /// Greedily shrunk table that still misbehaves, for symmetric cases.
    pub minimized: Option<TransitionSet>,
}

/// Totals and failures from a differential run.
#[derive(Clone, Debug, Default)]
pub struct DifferentialReport {
    pub cases_run: usize,
    pub free_cases: usize,
    pub livelock_cases: usize,
    /// Livelock cases confirmed by the oracle at some scanned ring size.
    pub oracle_confirmed: usize,
    /// Livelock cases beyond the scan window that passed the structural
    /// checks.
    pub beyond_scan: usize,
    pub disagreements: Vec<Disagreement>,
}

impl DifferentialReport {
    pub fn is_clean(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Outcome of checking a single symmetric case.
enum CaseOutcome {
    Agreed {
        decision: Decision,
        oracle_confirmed: bool,
    },
    Disagreed(DisagreementKind),
}

fn check_symmetric<F>(
    t: &TransitionSet,
    decide_fn: &F,
    config: &DifferentialConfig,
) -> Result<CaseOutcome, OracleError>
where
    F: Fn(&TransitionSet) -> Verdict,
{
    let verdict = decide_fn(t);

    if t.len() <= config.naive_max_len {
        let naive = naive_decide(t, t.len().max(2));
        if naive.decision != verdict.decision {
            return Ok(CaseOutcome::Disagreed(DisagreementKind::NaiveDisagrees {
                decision: verdict.decision,
                naive: naive.decision,
            }));
        }
    }

    let scan = oracle_scan(
        &Topology::Symmetric(t.clone()),
        config.scan_ks.clone(),
        config.budget,
    )?;

    match (verdict.decision, scan.min_livelock_k) {
        (Decision::Free, Some(k)) => {
            Ok(CaseOutcome::Disagreed(DisagreementKind::FreeButRingCirculates { k }))
        }
        (Decision::Free, None) => Ok(CaseOutcome::Agreed {
            decision: Decision::Free,
            oracle_confirmed: false,
        }),
        (Decision::Livelock, Some(_)) => Ok(CaseOutcome::Agreed {
            decision: Decision::Livelock,
            oracle_confirmed: true,
        }),
        (Decision::Livelock, None) => {
            // No desk-scale ring exhibits the livelock, so the claim must
            // stand structurally. The raw kernel may carry non-recurrent
            // members (they witness others' edges without their own edges
            // being witnessed); the certificate lives in the witness-total
            // core, which must survive, pass the totality check, and
            // commute with its own propagation relation.
            let mut details = Vec::new();
            if verdict.kernel.is_empty() {
                details.push("kernel is empty".to_string());
            } else {
                let core = witness_total_core(&verdict.kernel);
                if core.is_empty() {
                    details.push("witness closure empties the kernel".to_string());
                } else {
                    for violation in witness_totality(&core) {
                        details.push(violation.to_string());
                    }
                    let h = PseudolivelockGraph::build(&core).relation();
                    let e = PropagationRelation::for_kernel(&core);
                    if !commutes(&h, e.matrix(), &h) {
                        details
                            .push("propagation does not commute on the witness core".to_string());
                    }
                }
            }
            if details.is_empty() {
                Ok(CaseOutcome::Agreed {
                    decision: Decision::Livelock,
                    oracle_confirmed: false,
                })
            } else {
                Ok(CaseOutcome::Disagreed(
                    DisagreementKind::UnsupportedLivelockClaim { details },
                ))
            }
        }
    }
}

fn check_ring11(
    p0: &TransitionSet,
    others: &TransitionSet,
    config: &DifferentialConfig,
) -> Result<CaseOutcome, OracleError> {
    let verdict = decide_ring11(p0, others).expect("ring cases share a domain");
    let scan = oracle_scan(
        &Topology::Ring11 {
            p0: p0.clone(),
            others: others.clone(),
        },
        config.scan_ks.clone(),
        config.budget,
    )?;

    match (verdict.decision, scan.min_livelock_k) {
        (Decision::Free, Some(k)) => {
            Ok(CaseOutcome::Disagreed(DisagreementKind::FreeButRingCirculates { k }))
        }
        (Decision::Free, None) => Ok(CaseOutcome::Agreed {
            decision: Decision::Free,
            oracle_confirmed: false,
        }),
        (Decision::Livelock, Some(_)) => Ok(CaseOutcome::Agreed {
            decision: Decision::Livelock,
            oracle_confirmed: true,
        }),
        (Decision::Livelock, None) => {
            let mut details = Vec::new();
            if verdict.kernel_p0.is_empty() || verdict.kernel_other.is_empty() {
                details.push("a kernel is empty".to_string());
            } else {
                let h0 = PseudolivelockGraph::build(&verdict.kernel_p0).relation();
                let h_other = PseudolivelockGraph::build(&verdict.kernel_other).relation();
                let e_cross = interface_relation(&verdict.kernel_other, &verdict.kernel_p0);
                let e_into = interface_relation(&verdict.kernel_p0, &verdict.kernel_other);
                let e_other = interface_relation(&verdict.kernel_other, &verdict.kernel_other);
                if !commutes(&h_other, &e_cross, &h0)
                    || !commutes(&h0, &e_into, &h_other)
                    || !commutes(&h_other, &e_other, &h_other)
                {
                    details.push("an interface relation does not commute".to_string());
                }
            }
            if details.is_empty() {
                Ok(CaseOutcome::Agreed {
                    decision: Decision::Livelock,
                    oracle_confirmed: false,
                })
            } else {
                Ok(CaseOutcome::Disagreed(
                    DisagreementKind::UnsupportedLivelockClaim { details },
                ))
            }
        }
    }
}

/// Removes transitions one at a time while the failure reproduces.
fn minimize<F>(start: &TransitionSet, still_bad: F) -> TransitionSet
where
    F: Fn(&TransitionSet) -> bool,
{
    let mut current = start.clone();
    loop {
        let mut improved = false;
        for tr in current.transitions().to_vec() {
            let candidate =
                current.difference(&TransitionSet::from_members(current.m(), vec![tr]));
            if still_bad(&candidate) {
                current = candidate;
                improved = true;
                break;
            }
        }
        if !improved {
            return current;
        }
    }
}

fn record<F>(
    report: &mut DifferentialReport,
    name: String,
    t: Option<&TransitionSet>,
    outcome: CaseOutcome,
    decide_fn: &F,
    config: &DifferentialConfig,
) where
    F: Fn(&TransitionSet) -> Verdict,
{
    report.cases_run += 1;
    match outcome {
        CaseOutcome::Agreed {
            decision,
            oracle_confirmed,
        } => match decision {
            Decision::Free => report.free_cases += 1,
            Decision::Livelock => {
                report.livelock_cases += 1;
                if oracle_confirmed {
                    report.oracle_confirmed += 1;
                } else {
                    report.beyond_scan += 1;
                }
            }
        },
        CaseOutcome::Disagreed(kind) => {
            let minimized = t.map(|t| {
                minimize(t, |candidate| {
                    matches!(
                        check_symmetric(candidate, decide_fn, config),
                        Ok(CaseOutcome::Disagreed(_))
                    )
                })
            });
            report.disagreements.push(Disagreement {
                name,
                kind,
                protocol: t.cloned(),
                minimized,
            });
        }
    }
}

/// Runs the full differential suite with the production decider.
pub fn run_differential(config: &DifferentialConfig) -> Result<DifferentialReport, OracleError> {
    run_differential_with(config, decide_symmetric)
}

/// As [`run_differential`], but with a caller-supplied symmetric decider.
/// This exists so tests can inject a deliberately broken decider and watch
/// the harness catch it; it is not part of the public contract.
#[doc(hidden)]
pub fn run_differential_with<F>(
    config: &DifferentialConfig,
    decide_fn: F,
) -> Result<DifferentialReport, OracleError>
where
    F: Fn(&TransitionSet) -> Verdict,
{
    let mut report = DifferentialReport::default();

    for i in 0..config.cases {
        let seed = config.base_seed.wrapping_add(i as u64);
        let t = sample_for_seed(seed, config.max_m, config.max_len);
        let outcome = check_symmetric(&t, &decide_fn, config)?;
        record(
            &mut report,
            format!("seed-{seed}"),
            Some(&t),
            outcome,
            &decide_fn,
            config,
        );
    }

    if config.include_roster {
        for spec in roster() {
            let outcome = match &spec.topology {
                Topology::Symmetric(t) => check_symmetric(t, &decide_fn, config)?,
                Topology::Ring11 { p0, others } => check_ring11(p0, others, config)?,
            };
            let table = match &spec.topology {
                Topology::Symmetric(t) => Some(t.clone()),
                Topology::Ring11 { .. } => None,
            };
            record(
                &mut report,
                spec.name.clone(),
                table.as_ref(),
                outcome,
                &decide_fn,
                config,
            );
        }
    }

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decide::IterationTrace;

    fn small_config(cases: usize) -> DifferentialConfig {
        DifferentialConfig {
            cases,
            scan_ks: 2..=4,
            ..DifferentialConfig::default()
        }
    }

    #[test]
    fn production_decider_survives_a_small_run() {
        let config = small_config(40);
        let report = run_differential(&config).unwrap();
        assert!(report.is_clean(), "disagreements: {:?}", report.disagreements);
        assert_eq!(report.cases_run, 40 + roster().len());
        assert_eq!(
            report.free_cases + report.livelock_cases,
            report.cases_run
        );
        assert_eq!(
            report.oracle_confirmed + report.beyond_scan,
            report.livelock_cases
        );
        assert!(report.livelock_cases > 0, "corpus never livelocks");
        assert!(report.free_cases > 0, "corpus never frees");
    }

    /// A decider that shrugs everything off as FREE. The harness must
    /// catch it and shrink a counterexample to a small core.
    #[test]
    fn always_free_decider_is_caught_and_minimized() {
        let blind = |t: &TransitionSet| Verdict {
            decision: Decision::Free,
            kernel: TransitionSet::empty(t.m()),
            trace: IterationTrace {
                iterates: vec![t.clone()],
                removed: vec![],
                emptied_at: None,
            },
        };
        let config = small_config(60);
        let report = run_differential_with(&config, blind).unwrap();
        assert!(!report.is_clean(), "a blind decider slipped through");
        let with_table = report
            .disagreements
            .iter()
            .find(|d| d.minimized.is_some())
            .expect("symmetric disagreement with a shrunk table");
        let minimized = with_table.minimized.as_ref().unwrap();
        assert!(
            (2..=3).contains(&minimized.len()),
            "minimal livelock cores have 2 or 3 transitions, got {minimized}"
        );
    }

    /// A decider that cries livelock over an empty kernel fails the
    /// structural checks even where the oracle scan cannot reach.
    #[test]
    fn always_livelock_decider_is_caught() {
        let paranoid = |t: &TransitionSet| Verdict {
            decision: Decision::Livelock,
            kernel: TransitionSet::empty(t.m()),
            trace: IterationTrace {
                iterates: vec![t.clone()],
                removed: vec![],
                emptied_at: None,
            },
        };
        let config = DifferentialConfig {
            include_roster: false,
            ..small_config(30)
        };
        let report = run_differential_with(&config, paranoid).unwrap();
        assert!(!report.is_clean(), "a paranoid decider slipped through");
    }
}
