//! Named protocol families, their generators, and certified kernel
//! fingerprints.
//!
//! Each generator builds a classic self-disabling ring protocol over a
//! chosen domain size `m`. The families double as a regression roster: at
//! *certified* domain sizes the kernel fingerprint — the decision plus the
//! kernel size(s) — has been verified against the exhaustive oracle and is
//! frozen here, so any drift in the refinement pipeline trips loudly.
//! Generators still work at uncertified sizes; emitted files are then
//! marked so nobody mistakes them for verified artifacts.
//!
//! The families:
//!
//! * `coloring-det` — each process increments its value once it matches
//!   its predecessor; deterministic ring coloring. Kernel size `m`.
//! * `coloring-nondet` — on a match, move to *any* other value. Kernel
//!   size `m(m-1)`.
//! * `agreement` — copy the predecessor whenever the values differ.
//!   Kernel size `m(m-1)`.
//! * `sum-not-2-det` — over `Z_3`, rewrite the own value whenever
//!   `pred + own = 2 (mod 3)`, with writes chosen so the repair can never
//!   feed itself: livelock-free.
//! * `sum-not-2-nondet` — same guard, all legal writes allowed; the extra
//!   choices close a cycle, so this one can livelock.
//! * `dijkstra` — the token ring: a distinguished process increments on a
//!   value match while everyone else copies mismatches downstream.

use thiserror::Error;

use crate::decide::{decide_ring11, decide_symmetric, Decision};
use crate::transition::{validate_protocol, TransitionSet};

/// How the processes of a ring are assigned transition tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Topology {
    /// Every position runs the same table.
    Symmetric(TransitionSet),
    /// Position 0 runs `p0`; every other position runs `others`.
    Ring11 {
        p0: TransitionSet,
        others: TransitionSet,
    },
}

impl Topology {
    /// Domain size shared by the tables.
    pub fn m(&self) -> u8 {
        match self {
            Topology::Symmetric(t) => t.m(),
            Topology::Ring11 { p0, .. } => p0.m(),
        }
    }

    pub fn is_ring11(&self) -> bool {
        matches!(self, Topology::Ring11 { .. })
    }

    /// The table run at a ring position.
    pub fn table_at(&self, position: u32) -> &TransitionSet {
        match self {
            Topology::Symmetric(t) => t,
            Topology::Ring11 { p0, others } => {
                if position == 0 {
                    p0
                } else {
                    others
                }
            }
        }
    }

    /// Total number of transitions across the distinct tables.
    pub fn transition_count(&self) -> usize {
        match self {
            Topology::Symmetric(t) => t.len(),
            Topology::Ring11 { p0, others } => p0.len() + others.len(),
        }
    }
}

/// A named protocol instance: what the files, reports, and generators
/// pass around.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtocolSpec {
    pub name: String,
    pub topology: Topology,
}

/// A decision plus kernel size(s): one entry for a symmetric ring, the
/// position-0 and other-position sizes for a 1-1 ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    pub decision: Decision,
    pub kernel_sizes: Vec<usize>,
}

/// Runs the refinement on `spec` and summarizes the outcome.
pub fn computed_fingerprint(spec: &ProtocolSpec) -> Fingerprint {
    match &spec.topology {
        Topology::Symmetric(t) => {
            let verdict = decide_symmetric(t);
            Fingerprint {
                decision: verdict.decision,
                kernel_sizes: vec![verdict.kernel.len()],
            }
        }
        Topology::Ring11 { p0, others } => {
            let verdict = decide_ring11(p0, others).expect("generated tables share a domain");
            Fingerprint {
                decision: verdict.decision,
                kernel_sizes: vec![verdict.kernel_p0.len(), verdict.kernel_other.len()],
            }
        }
    }
}

/// Why a generator call failed.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("unknown generator {name:?}: known generators are {}", GENERATOR_NAMES.join(", "))]
    UnknownGenerator { name: String },
    #[error("generator {name:?} does not support m={m}: {reason}")]
    UnsupportedDomain {
        name: &'static str,
        m: u8,
        reason: &'static str,
    },
}

/// Every generator name accepted by [`generate`].
pub const GENERATOR_NAMES: [&str; 6] = [
    "coloring-det",
    "coloring-nondet",
    "agreement",
    "sum-not-2-det",
    "sum-not-2-nondet",
    "dijkstra",
];

fn build(m: u8, triples: &[(u8, u8, u8)]) -> TransitionSet {
    validate_protocol(m, triples).expect("generator tables are valid by construction")
}

fn increment_table(m: u8) -> Vec<(u8, u8, u8)> {
    (0..m).map(|v| (v, v, (v + 1) % m)).collect()
}

fn recolor_table(m: u8) -> Vec<(u8, u8, u8)> {
    let mut triples = Vec::new();
    for v in 0..m {
        for w in 0..m {
            if w != v {
                triples.push((v, v, w));
            }
        }
    }
    triples
}

fn copy_table(m: u8) -> Vec<(u8, u8, u8)> {
    let mut triples = Vec::new();
    for p in 0..m {
        for o in 0..m {
            if o != p {
                triples.push((p, o, p));
            }
        }
    }
    triples
}

const SUM_NOT_2_DET: [(u8, u8, u8); 3] = [(0, 2, 1), (1, 1, 0), (2, 0, 1)];
const SUM_NOT_2_NONDET: [(u8, u8, u8); 6] = [
    (0, 2, 0),
    (0, 2, 1),
    (1, 1, 0),
    (1, 1, 2),
    (2, 0, 1),
    (2, 0, 2),
];

fn require_domain(
    name: &'static str,
    m: u8,
    ok: bool,
    reason: &'static str,
) -> Result<(), GeneratorError> {
    if ok {
        Ok(())
    } else {
        Err(GeneratorError::UnsupportedDomain { name, m, reason })
    }
}

/// Builds the named protocol family over domain `Z_m`.
pub fn generate(name: &str, m: u8) -> Result<ProtocolSpec, GeneratorError> {
    let topology = match name {
        "coloring-det" => {
            require_domain("coloring-det", m, m >= 2, "the domain needs at least 2 values")?;
            Topology::Symmetric(build(m, &increment_table(m)))
        }
        "coloring-nondet" => {
            require_domain("coloring-nondet", m, m >= 2, "the domain needs at least 2 values")?;
            Topology::Symmetric(build(m, &recolor_table(m)))
        }
        "agreement" => {
            require_domain("agreement", m, m >= 2, "the domain needs at least 2 values")?;
            Topology::Symmetric(build(m, &copy_table(m)))
        }
        "sum-not-2-det" => {
            require_domain("sum-not-2-det", m, m == 3, "this family is defined over Z_3 only")?;
            Topology::Symmetric(build(3, &SUM_NOT_2_DET))
        }
        "sum-not-2-nondet" => {
            require_domain(
                "sum-not-2-nondet",
                m,
                m == 3,
                "this family is defined over Z_3 only",
            )?;
            Topology::Symmetric(build(3, &SUM_NOT_2_NONDET))
        }
        "dijkstra" => {
            require_domain("dijkstra", m, m >= 2, "the domain needs at least 2 values")?;
            Topology::Ring11 {
                p0: build(m, &increment_table(m)),
                others: build(m, &copy_table(m)),
            }
        }
        other => {
            return Err(GeneratorError::UnknownGenerator {
                name: other.to_string(),
            })
        }
    };
    Ok(ProtocolSpec {
        name: format!("{name}-m{m}"),
        topology,
    })
}

/// The `(generator, m)` points whose fingerprints have been verified
/// against the exhaustive oracle.
const CERTIFIED_POINTS: [(&str, &[u8]); 6] = [
    ("coloring-det", &[3, 4, 5]),
    ("coloring-nondet", &[3]),
    ("agreement", &[3, 4, 5]),
    ("sum-not-2-det", &[3]),
    ("sum-not-2-nondet", &[3]),
    ("dijkstra", &[3, 4, 5]),
];

/// Is the fingerprint at `(name, m)` verified and frozen?
pub fn is_certified(name: &str, m: u8) -> bool {
    CERTIFIED_POINTS
        .iter()
        .any(|(n, ms)| *n == name && ms.contains(&m))
}

/// The frozen fingerprint at a certified point, if `(name, m)` is one.
pub fn certified_fingerprint(name: &str, m: u8) -> Option<Fingerprint> {
    if !is_certified(name, m) {
        return None;
    }
    let m_us = m as usize;
    let fingerprint = match name {
        "coloring-det" => Fingerprint {
            decision: Decision::Livelock,
            kernel_sizes: vec![m_us],
        },
        "coloring-nondet" | "agreement" => Fingerprint {
            decision: Decision::Livelock,
            kernel_sizes: vec![m_us * (m_us - 1)],
        },
        "sum-not-2-det" => Fingerprint {
            decision: Decision::Free,
            kernel_sizes: vec![0],
        },
        "sum-not-2-nondet" => Fingerprint {
            decision: Decision::Livelock,
            kernel_sizes: vec![6],
        },
        "dijkstra" => Fingerprint {
            decision: Decision::Livelock,
            kernel_sizes: vec![m_us, m_us],
        },
        _ => return None,
    };
    Some(fingerprint)
}

/// Every certified protocol instance, in roster order.
pub fn roster() -> Vec<ProtocolSpec> {
    CERTIFIED_POINTS
        .iter()
        .flat_map(|(name, ms)| {
            ms.iter()
                .map(|&m| generate(name, m).expect("certified points generate"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transition::Transition;

    #[test]
    fn increment_family_freezes_its_table() {
        let spec = generate("coloring-det", 3).unwrap();
        assert_eq!(spec.name, "coloring-det-m3");
        let Topology::Symmetric(t) = &spec.topology else {
            panic!("symmetric family");
        };
        assert_eq!(
            t.transitions(),
            &[
                Transition::new(0, 0, 1),
                Transition::new(1, 1, 2),
                Transition::new(2, 2, 0)
            ]
        );
    }

    #[test]
    fn copy_family_freezes_its_table() {
        let spec = generate("agreement", 3).unwrap();
        let Topology::Symmetric(t) = &spec.topology else {
            panic!("symmetric family");
        };
        assert_eq!(
            t.transitions(),
            &[
                Transition::new(0, 1, 0),
                Transition::new(0, 2, 0),
                Transition::new(1, 0, 1),
                Transition::new(1, 2, 1),
                Transition::new(2, 0, 2),
                Transition::new(2, 1, 2)
            ]
        );
    }

    #[test]
    fn recolor_family_freezes_its_table() {
        let spec = generate("coloring-nondet", 3).unwrap();
        let Topology::Symmetric(t) = &spec.topology else {
            panic!("symmetric family");
        };
        assert_eq!(
            t.transitions(),
            &[
                Transition::new(0, 0, 1),
                Transition::new(0, 0, 2),
                Transition::new(1, 1, 0),
                Transition::new(1, 1, 2),
                Transition::new(2, 2, 0),
                Transition::new(2, 2, 1)
            ]
        );
    }

    #[test]
    fn guarded_rewrite_families_freeze_their_tables() {
        let det = generate("sum-not-2-det", 3).unwrap();
        let Topology::Symmetric(t) = &det.topology else {
            panic!("symmetric family");
        };
        assert_eq!(
            t.transitions(),
            &[
                Transition::new(0, 2, 1),
                Transition::new(1, 1, 0),
                Transition::new(2, 0, 1)
            ]
        );
        let nondet = generate("sum-not-2-nondet", 3).unwrap();
        let Topology::Symmetric(t) = &nondet.topology else {
            panic!("symmetric family");
        };
        assert_eq!(t.len(), 6);
        // Every firing leaves pred + own != 2 (mod 3): the repair never
        // recreates the condition it repairs.
        for tr in t.iter() {
            assert_eq!((tr.pred.0 + tr.own.0) % 3, 2);
            assert_ne!((tr.pred.0 + tr.written.0) % 3, 2);
        }
    }

    #[test]
    fn token_ring_runs_two_tables() {
        let spec = generate("dijkstra", 3).unwrap();
        let Topology::Ring11 { p0, others } = &spec.topology else {
            panic!("1-1 family");
        };
        assert_eq!(p0.len(), 3);
        assert_eq!(others.len(), 6);
        assert_eq!(spec.topology.m(), 3);
        assert_eq!(spec.topology.transition_count(), 9);
        assert_eq!(spec.topology.table_at(0), p0);
        assert_eq!(spec.topology.table_at(2), others);
    }

    #[test]
    fn unknown_names_and_bad_domains_are_rejected() {
        assert_eq!(
            generate("petersons", 3).unwrap_err(),
            GeneratorError::UnknownGenerator {
                name: "petersons".into()
            }
        );
        assert!(matches!(
            generate("sum-not-2-det", 4).unwrap_err(),
            GeneratorError::UnsupportedDomain { m: 4, .. }
        ));
        assert!(matches!(
            generate("coloring-det", 1).unwrap_err(),
            GeneratorError::UnsupportedDomain { m: 1, .. }
        ));
        let msg = generate("petersons", 3).unwrap_err().to_string();
        assert!(msg.contains("coloring-det"), "lists alternatives: {msg}");
    }

    #[test]
    fn roster_is_the_certified_points() {
        let specs = roster();
        assert_eq!(specs.len(), 12);
        let mut names: Vec<&str> = specs.iter().map(|s| s.name.as_str()).collect();
        names.dedup();
        assert_eq!(names.len(), 12, "roster names are unique");
        for spec in &specs {
            let (family, m) = spec
                .name
                .rsplit_once("-m")
                .map(|(f, m)| (f, m.parse::<u8>().unwrap()))
                .unwrap();
            assert!(is_certified(family, m), "{} certified", spec.name);
        }
    }

    #[test]
    fn certification_is_a_finite_list() {
        assert!(is_certified("coloring-det", 4));
        assert!(!is_certified("coloring-det", 6));
        assert!(!is_certified("coloring-nondet", 4));
        assert!(certified_fingerprint("coloring-nondet", 4).is_none());
        assert!(certified_fingerprint("nonesuch", 3).is_none());
    }

    #[test]
    fn computed_fingerprints_match_the_frozen_roster() {
        for spec in roster() {
            let (family, m) = spec
                .name
                .rsplit_once("-m")
                .map(|(f, m)| (f, m.parse::<u8>().unwrap()))
                .unwrap();
            let frozen = certified_fingerprint(family, m).unwrap();
            assert_eq!(computed_fingerprint(&spec), frozen, "on {}", spec.name);
        }
    }

    #[test]
    fn token_ring_other_kernel_is_the_carry_band() {
        // The non-distinguished kernel keeps exactly the copies fired when
        // the predecessor has just incremented: own = pred - 1 (mod m).
        let spec = generate("dijkstra", 4).unwrap();
        let Topology::Ring11 { p0, others } = &spec.topology else {
            panic!("1-1 family");
        };
        let verdict = decide_ring11(p0, others).unwrap();
        let expected: Vec<Transition> = (0..4u8)
            .map(|p| Transition::new(p, (p + 3) % 4, p))
            .collect();
        assert_eq!(verdict.kernel_other.transitions(), expected.as_slice());
        assert_eq!(verdict.kernel_p0.transitions(), p0.transitions());
    }
}
