//! Ground-truth oracle: explicit-state search over a concrete ring.
//!
//! For a fixed ring size `K` the oracle builds every global state — one
//! value from `Z_m` per position, `m^K` states in all, with no
//! reachability pruning — and every firing as a directed edge labeled by
//! the position that moved. Livelock is then a graph property:
//!
//! *some strongly connected component's internal edges carry all `K`
//! labels.*
//!
//! Why this is exact, in both directions. If a run is infinite, every
//! position fires infinitely often: suppose position `i` fires finitely
//! often, so its value freezes; its successor `i+1` reads a frozen
//! predecessor, and self-disabling means that the firing of `(p, o, w)`
//! leaves no transition enabled at predecessor `p` and own value `w` —
//! so position `i+1` fires at most once more and freezes too, and the
//! freeze propagates around the ring until nothing moves. An infinite run
//! therefore visits some set of states infinitely often, that set is
//! internally strongly connected, and every label appears among its
//! internal edges. Conversely, given a component covering all labels,
//! stitch one closed walk through an edge of each label (strong
//! connectivity supplies the connecting paths) and loop it forever: an
//! infinite run in which every position moves infinitely often.
//!
//! The oracle's cost is exponential in `K`, so a node budget caps the
//! state count; exceeding it is a typed, reportable outcome, not a wrong
//! answer. The budget defaults to [`DEFAULT_NODE_BUDGET`] and can be
//! raised through the [`BUDGET_ENV_VAR`] environment variable.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::RangeInclusive;

use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::visit::EdgeRef;
use thiserror::Error;

use crate::protocols::Topology;
use crate::transition::TransitionSet;

/// Default cap on the number of global states the oracle will build.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

/// Environment variable consulted by [`node_budget_from_env`].
pub const BUDGET_ENV_VAR: &str = "RINGLOCK_ORACLE_BUDGET";

/// One global state of a ring of `K` processes: the value at each position.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GlobalState(pub Vec<u8>);

impl fmt::Display for GlobalState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// What the oracle found at one ring size.
#[derive(Clone, Debug)]
pub struct OracleResult {
    pub k: u32,
    /// Total number of global states built (`m^K`).
    pub states: u64,
    pub livelock: bool,
    /// On livelock: the states of the first component (smallest member
    /// state) whose internal edges cover all positions. Empty otherwise.
    pub witness_scc: Vec<GlobalState>,
    /// The positions that fire inside the witness component — all of
    /// `0..K` on livelock, empty otherwise.
    pub fired_positions: Vec<u32>,
}

/// Why the oracle could not answer.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("ring size {k} is too small: the oracle needs at least 2 positions")]
    RingTooSmall { k: u32 },
    #[error(
        "oracle budget exceeded at K={k}: {states_required} states exceed the budget of {budget} nodes (set {} to raise it)",
        BUDGET_ENV_VAR
    )]
    BudgetExceeded {
        k: u32,
        states_required: u128,
        budget: u64,
    },
    #[error("invalid {} value {value:?}: expected an unsigned integer", BUDGET_ENV_VAR)]
    InvalidBudget { value: String },
}

/// Reads the node budget from [`BUDGET_ENV_VAR`], defaulting to
/// [`DEFAULT_NODE_BUDGET`] when the variable is unset.
pub fn node_budget_from_env() -> Result<u64, OracleError> {
    match std::env::var(BUDGET_ENV_VAR) {
        Ok(raw) => raw.trim().parse::<u64>().map_err(|_| OracleError::InvalidBudget { value: raw }),
        Err(_) => Ok(DEFAULT_NODE_BUDGET),
    }
}

/// Writes available to a process at each `(pred, own)` pair, as a flat
/// `m * m` table of sorted value lists.
fn fire_table(s: &TransitionSet) -> Vec<Vec<u8>> {
    let m = s.m() as usize;
    let mut table = vec![Vec::new(); m * m];
    for t in s.iter() {
        table[t.pred.0 as usize * m + t.own.0 as usize].push(t.written.0);
    }
    table
}

/// Decides livelock on a concrete ring of `k` positions by exhaustive
/// state-graph search.
///
/// Position 0 runs the distinguished process of a `Ring11` topology (and
/// positions `1..K` the other table); a `Symmetric` topology runs the same
/// table everywhere.
pub fn oracle_livelock(
    topology: &Topology,
    k: u32,
    budget: u64,
) -> Result<OracleResult, OracleError> {
    if k < 2 {
        return Err(OracleError::RingTooSmall { k });
    }
    let m = topology.m() as u128;
    let states_required = (0..k).try_fold(1u128, |acc, _| acc.checked_mul(m)).unwrap_or(u128::MAX);
    if states_required > budget as u128 {
        return Err(OracleError::BudgetExceeded {
            k,
            states_required,
            budget,
        });
    }
    let states = states_required as usize;
    assert!(
        states <= u32::MAX as usize,
        "state graph too large for 32-bit node indices"
    );

    let m = topology.m() as usize;
    let k_us = k as usize;
    let table_p0 = fire_table(topology.table_at(0));
    let table_rest = fire_table(topology.table_at(1));
    let pow: Vec<usize> = (0..k_us)
        .scan(1usize, |acc, _| {
            let cur = *acc;
            *acc *= m;
            Some(cur)
        })
        .collect();

    let mut graph: DiGraph<(), u16, u32> = DiGraph::with_capacity(states, states);
    for _ in 0..states {
        graph.add_node(());
    }
    for id in 0..states {
        for i in 0..k_us {
            let own = (id / pow[i]) % m;
            let pred = (id / pow[(i + k_us - 1) % k_us]) % m;
            let table = if i == 0 { &table_p0 } else { &table_rest };
            for &w in &table[pred * m + own] {
                let target = id - own * pow[i] + (w as usize) * pow[i];
                graph.add_edge(
                    NodeIndex::new(id),
                    NodeIndex::new(target),
                    i as u16,
                );
            }
        }
    }

    let witness = covering_component(&graph, k);
    let (livelock, witness_scc, fired_positions) = match witness {
        Some(members) => {
            let decoded = members
                .iter()
                .map(|&id| GlobalState((0..k_us).map(|i| ((id / pow[i]) % m) as u8).collect()))
                .collect();
            (true, decoded, (0..k).collect())
        }
        None => (false, Vec::new(), Vec::new()),
    };

    Ok(OracleResult {
        k,
        states: states as u64,
        livelock,
        witness_scc,
        fired_positions,
    })
}

/// First strongly connected component (by smallest member) whose internal
/// edges carry all `k` labels, as a sorted member list.
pub(crate) fn covering_component(graph: &DiGraph<(), u16, u32>, k: u32) -> Option<Vec<usize>> {
    let mut components: Vec<Vec<usize>> = petgraph::algo::tarjan_scc(graph)
        .into_iter()
        .map(|comp| {
            let mut members: Vec<usize> = comp.into_iter().map(|n| n.index()).collect();
            members.sort_unstable();
            members
        })
        .collect();
    components.sort_by_key(|comp| comp[0]);

    let mut member_of = vec![usize::MAX; graph.node_count()];
    for (ci, comp) in components.iter().enumerate() {
        for &v in comp {
            member_of[v] = ci;
        }
    }

    components.iter().enumerate().find_map(|(ci, comp)| {
        let mut labels: BTreeSet<u16> = BTreeSet::new();
        for &v in comp {
            for edge in graph.edges(NodeIndex::new(v)) {
                if member_of[edge.target().index()] == ci {
                    labels.insert(*edge.weight());
                }
            }
        }
        (labels.len() == k as usize).then(|| comp.clone())
    })
}

/// Per-ring-size oracle answers over a scan range.
#[derive(Clone, Debug)]
pub struct ScanOutcome {
    /// `(K, livelock)` for each ring size scanned, in ascending order.
    pub per_k: Vec<(u32, bool)>,
    /// Smallest scanned ring size exhibiting a livelock, if any.
    pub min_livelock_k: Option<u32>,
}

/// Runs [`oracle_livelock`] for every ring size in `ks`.
///
/// Stops with the oracle's error if any size in the range is unanswerable
/// (too small, or over budget) — a partial scan would misreport minima.
pub fn oracle_scan(
    topology: &Topology,
    ks: RangeInclusive<u32>,
    budget: u64,
) -> Result<ScanOutcome, OracleError> {
    let mut per_k = Vec::new();
    for k in ks {
        let result = oracle_livelock(topology, k, budget)?;
        per_k.push((k, result.livelock));
    }
    let min_livelock_k = per_k.iter().find(|(_, live)| *live).map(|(k, _)| *k);
    Ok(ScanOutcome { per_k, min_livelock_k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use petgraph::graph::DiGraph;

    use crate::transition::validate_protocol;

    fn symmetric(m: u8, triples: &[(u8, u8, u8)]) -> Topology {
        Topology::Symmetric(validate_protocol(m, triples).unwrap())
    }

    fn increment_ring() -> Topology {
        symmetric(3, &[(0, 0, 1), (1, 1, 2), (2, 2, 0)])
    }

    fn token_ring() -> Topology {
        Topology::Ring11 {
            p0: validate_protocol(3, &[(0, 0, 1), (1, 1, 2), (2, 2, 0)]).unwrap(),
            others: validate_protocol(
                3,
                &[(0, 1, 0), (0, 2, 0), (1, 0, 1), (1, 2, 1), (2, 0, 2), (2, 1, 2)],
            )
            .unwrap(),
        }
    }

    #[test]
    fn increment_ring_is_dead_on_three_positions() {
        let result = oracle_livelock(&increment_ring(), 3, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(result.states, 27);
        assert!(!result.livelock);
        assert!(result.witness_scc.is_empty());
    }

    #[test]
    fn increment_ring_circulates_on_four_positions() {
        let result = oracle_livelock(&increment_ring(), 4, DEFAULT_NODE_BUDGET).unwrap();
        assert!(result.livelock);
        assert_eq!(result.fired_positions, vec![0, 1, 2, 3]);
        // The hand-checked loop (0,0,1,2) -> ... -> (0,0,1,2) lies inside
        // the witness component.
        assert!(result.witness_scc.contains(&GlobalState(vec![0, 0, 1, 2])));
        assert!(result.witness_scc.contains(&GlobalState(vec![0, 1, 1, 2])));
    }

    #[test]
    fn scan_reports_the_smallest_circulating_ring() {
        let outcome = oracle_scan(&increment_ring(), 2..=5, DEFAULT_NODE_BUDGET).unwrap();
        // K = 4 circulates a single recolor wave; K = 5 circulates two waves
        // (hand check: value vector (0,1,2,2,2) fires positions 4,0,1,3,2 and
        // returns to the same neighbour-difference pattern).
        assert_eq!(
            outcome.per_k,
            vec![(2, false), (3, false), (4, true), (5, true)]
        );
        assert_eq!(outcome.min_livelock_k, Some(4));
    }

    #[test]
    fn token_ring_circulates_on_three_positions() {
        let result = oracle_livelock(&token_ring(), 3, DEFAULT_NODE_BUDGET).unwrap();
        assert!(result.livelock);
        // The all-equal state holds exactly one token (at position 1).
        assert!(result.witness_scc.contains(&GlobalState(vec![0, 0, 0])));
    }

    #[test]
    fn budget_is_enforced_before_building_anything() {
        let err = oracle_livelock(&increment_ring(), 3, 10).unwrap_err();
        assert_eq!(
            err,
            OracleError::BudgetExceeded {
                k: 3,
                states_required: 27,
                budget: 10
            }
        );
        let msg = err.to_string();
        assert!(msg.contains("RINGLOCK_ORACLE_BUDGET"), "actionable message: {msg}");
    }

    #[test]
    fn rings_smaller_than_two_are_rejected() {
        for k in [0, 1] {
            assert_eq!(
                oracle_livelock(&increment_ring(), k, DEFAULT_NODE_BUDGET).unwrap_err(),
                OracleError::RingTooSmall { k }
            );
        }
    }

    #[test]
    fn scan_propagates_budget_errors() {
        assert!(matches!(
            oracle_scan(&increment_ring(), 2..=4, 30),
            Err(OracleError::BudgetExceeded { k: 4, .. })
        ));
    }

    #[test]
    fn component_must_cover_every_label() {
        // Two states swapping via positions 0 and 1: covered at k=2 but
        // not at k=3.
        let mut graph: DiGraph<(), u16, u32> = DiGraph::new();
        let a = graph.add_node(());
        let b = graph.add_node(());
        graph.add_edge(a, b, 0);
        graph.add_edge(b, a, 1);
        assert_eq!(covering_component(&graph, 2), Some(vec![0, 1]));
        assert_eq!(covering_component(&graph, 3), None);
    }

    #[test]
    fn strong_connectivity_is_required_not_just_label_coverage() {
        // A path a ->0 b ->1 c uses both labels but never loops.
        let mut graph: DiGraph<(), u16, u32> = DiGraph::new();
        let a = graph.add_node(());
        let b = graph.add_node(());
        let c = graph.add_node(());
        graph.add_edge(a, b, 0);
        graph.add_edge(b, c, 1);
        assert_eq!(covering_component(&graph, 2), None);
    }

    /// Structural consequence of self-disabling, checked on the whole
    /// state graph: immediately after position `i` fires, position `i`
    /// has nothing enabled, so no walk fires the same position twice in a
    /// row.
    #[test]
    fn no_position_fires_twice_in_a_row() {
        for (topology, k) in [
            (increment_ring(), 4u32),
            (token_ring(), 3),
            (symmetric(3, &[(0, 2, 0), (0, 2, 1), (1, 1, 0), (1, 1, 2), (2, 0, 1), (2, 0, 2)]), 3),
        ] {
            let m = topology.m() as usize;
            let k_us = k as usize;
            let pow: Vec<usize> = (0..k_us)
                .scan(1usize, |acc, _| {
                    let cur = *acc;
                    *acc *= m;
                    Some(cur)
                })
                .collect();
            let states = pow[k_us - 1] * m;
            for id in 0..states {
                for i in 0..k_us {
                    let own = (id / pow[i]) % m;
                    let pred = (id / pow[(i + k_us - 1) % k_us]) % m;
                    let table = topology.table_at(i as u32);
                    for t in table.iter().filter(|t| {
                        t.pred.0 as usize == pred && t.own.0 as usize == own
                    }) {
                        let target = id - own * pow[i] + (t.written.0 as usize) * pow[i];
                        let successor_enabled = table.iter().any(|u| {
                            u.pred.0 as usize == pred && u.own == t.written
                        });
                        assert!(
                            !successor_enabled,
                            "position {i} re-enabled after firing {t} in state {id} -> {target}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn budget_env_round_trip() {
        assert_eq!(node_budget_from_env().unwrap(), DEFAULT_NODE_BUDGET);
        std::env::set_var(BUDGET_ENV_VAR, "12345");
        assert_eq!(node_budget_from_env().unwrap(), 12345);
        std::env::set_var(BUDGET_ENV_VAR, "not-a-number");
        assert_eq!(
            node_budget_from_env().unwrap_err(),
            OracleError::InvalidBudget {
                value: "not-a-number".into()
            }
        );
        std::env::remove_var(BUDGET_ENV_VAR);
    }
}
