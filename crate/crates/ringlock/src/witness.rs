//! Finite witnesses: simple cycles, their enabling walks, and an
//! independent cycle-chain decider.
//!
//! A livelock, if one exists at all, is exhibited by *short* objects: each
//! process repeats a simple cycle of the pseudolivelock graph (length at
//! most `|T|`), and each cycle is kept alive by an *enabling walk* fired by
//! the predecessor process — one witness per edge, in order. The closure
//! condition (the last entry's `written` equals the first entry's `own`)
//! holds automatically: both sides equal the predecessor reading of the
//! cycle's starting transition.
//!
//! [`naive_decide`] turns this picture into a decision procedure that
//! shares no logic with the fixed-point refinement: enumerate the simple
//! cycles, then repeatedly discard any cycle none of whose enabling walks
//! is (up to rotation) a *surviving* cycle. A survivor therefore heads an
//! infinite chain cycle ← walk ← walk ← …, which by finiteness loops; the
//! cycles on that loop feed one another around the ring, which is exactly
//! a livelock. Conversely, in any livelock every enabling walk of a kernel
//! cycle is itself a simple kernel cycle, so the kernel's cycles all
//! survive the pruning. The two deciders thus agree — which the
//! differential fuzzing suite checks case by case.

use std::fmt;

use crate::decide::Decision;
use crate::graph::PseudolivelockGraph;
use crate::transition::{Transition, TransitionSet};

/// A simple directed cycle of a pseudolivelock graph, stored in canonical
/// rotation: the lexicographically least transition first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SimpleCycle {
    transitions: Vec<Transition>,
}

impl SimpleCycle {
    fn new(transitions: Vec<Transition>) -> Self {
        debug_assert!(transitions.len() >= 2);
        debug_assert_eq!(
            transitions.iter().min(),
            transitions.first(),
            "canonical rotation starts at the least member"
        );
        SimpleCycle { transitions }
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length >= 2 by construction
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn contains(&self, t: &Transition) -> bool {
        self.transitions.contains(t)
    }

    /// The cycle's edges in order, including the wrap-around.
    pub fn edges(&self) -> Vec<(Transition, Transition)> {
        let n = self.transitions.len();
        (0..n)
            .map(|i| (self.transitions[i], self.transitions[(i + 1) % n]))
            .collect()
    }

    /// The shadows demanded of the predecessor, one per edge, in order.
    pub fn shadow_pairs(&self) -> Vec<(Transition, Transition)> {
        self.edges()
    }

    /// Are the per-edge shadow demands `(t_i.pred, t_j.pred)` pairwise
    /// distinct along the cycle? (Observed and logged by callers, never
    /// assumed.)
    pub fn shadow_pairs_distinct(&self) -> bool {
        let mut pairs: Vec<(u8, u8)> = self
            .edges()
            .iter()
            .map(|(a, b)| (a.pred.0, b.pred.0))
            .collect();
        let before = pairs.len();
        pairs.sort_unstable();
        pairs.dedup();
        pairs.len() == before
    }
}

impl fmt::Display for SimpleCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.transitions.iter().enumerate() {
            if i > 0 {
                write!(f, " -> ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, " -> (repeat)")
    }
}

/// All simple cycles of `g` with `2 <= length <= max_len`, each in
/// canonical rotation, sorted by length then lexicographically.
///
/// Enumeration walks depth-first from each vertex `s` through vertices
/// with index `> s` only, so every cycle is discovered exactly once —
/// rooted at its least vertex, which is the canonical rotation directly.
pub fn enumerate_simple_cycles(g: &PseudolivelockGraph, max_len: usize) -> Vec<SimpleCycle> {
    assert!(max_len >= 2, "cycles have length at least 2");
    let n = g.vertex_count();
    let mut cycles = Vec::new();
    let mut path: Vec<usize> = Vec::new();
    let mut on_path = vec![false; n];

    fn dfs(
        g: &PseudolivelockGraph,
        root: usize,
        v: usize,
        max_len: usize,
        path: &mut Vec<usize>,
        on_path: &mut Vec<bool>,
        cycles: &mut Vec<SimpleCycle>,
    ) {
        path.push(v);
        on_path[v] = true;
        for &w in g.successors(v) {
            if w == root && path.len() >= 2 {
                cycles.push(SimpleCycle::new(path.iter().map(|&i| g.vertex(i)).collect()));
            } else if w > root && !on_path[w] && path.len() < max_len {
                dfs(g, root, w, max_len, path, on_path, cycles);
            }
        }
        on_path[v] = false;
        path.pop();
    }

    for root in 0..n {
        dfs(g, root, root, max_len, &mut path, &mut on_path, &mut cycles);
    }
    cycles.sort_by(|a, b| {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.transitions.cmp(&b.transitions))
    });
    cycles
}

/// An enabling walk for a cycle: entry `k` witnesses the cycle's `k`-th
/// edge `(t_i -> t_j)`, so it has `own == t_i.pred` and
/// `written == t_j.pred`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnablingWalk {
    entries: Vec<Transition>,
}

impl EnablingWalk {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Transition] {
        &self.entries
    }

    /// Does the walk close up — last entry's `written` equals the first
    /// entry's `own`? True by construction (both equal the predecessor
    /// reading of the cycle's first transition); kept as an explicit check.
    pub fn closes(&self) -> bool {
        match (self.entries.first(), self.entries.last()) {
            (Some(first), Some(last)) => last.written == first.own,
            _ => false,
        }
    }
}

impl fmt::Display for EnablingWalk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Up to `cap` enabling walks for `cycle` with entries drawn from
/// `support`, plus the exact total count.
///
/// Walks pick one witness per edge; the combination count is the product
/// of the per-edge witness counts and can be enormous, hence the cap.
/// Returns `(empty, 0)` as soon as some edge has no witness at all.
/// Enumeration is lexicographic in the per-edge choices, so the prefix
/// returned is deterministic.
pub fn enabling_walks_bounded(
    cycle: &SimpleCycle,
    support: &TransitionSet,
    cap: usize,
) -> (Vec<EnablingWalk>, u128) {
    let mut per_edge: Vec<Vec<Transition>> = Vec::new();
    for (t_i, t_j) in cycle.edges() {
        let witnesses: Vec<Transition> = support
            .iter()
            .filter(|w| w.own == t_i.pred && w.written == t_j.pred)
            .copied()
            .collect();
        if witnesses.is_empty() {
            return (Vec::new(), 0);
        }
        per_edge.push(witnesses);
    }
    let total = per_edge
        .iter()
        .fold(1u128, |acc, options| acc.saturating_mul(options.len() as u128));

    let mut walks: Vec<Vec<Transition>> = vec![Vec::new()];
    for options in &per_edge {
        let mut extended = Vec::new();
        'outer: for prefix in &walks {
            for &w in options {
                let mut next = prefix.clone();
                next.push(w);
                extended.push(next);
                if extended.len() >= cap && prefix.len() + 1 < per_edge.len() {
                    // Keep only `cap` partial walks; each still extends to
                    // at least one full walk, so the prefix is honest.
                    break 'outer;
                }
            }
        }
        extended.truncate(cap);
        walks = extended;
    }
    let walks = walks
        .into_iter()
        .map(|entries| {
            let walk = EnablingWalk { entries };
            debug_assert!(walk.closes(), "per-edge witnessing forces closure");
            walk
        })
        .collect();
    (walks, total)
}

/// Every enabling walk for `cycle` with entries drawn from `support`.
/// Unbounded; see [`enabling_walks_bounded`] for the cap-aware variant.
pub fn enabling_walks(cycle: &SimpleCycle, support: &TransitionSet) -> Vec<EnablingWalk> {
    enabling_walks_bounded(cycle, support, usize::MAX).0
}

/// Is some rotation of `candidate` an enabling walk for `cycle`?
///
/// Rotation `r` matches when for every edge index `k`, the entry
/// `candidate[(r + k) % n]` witnesses the cycle's `k`-th edge.
fn is_enabling_rotation(cycle: &SimpleCycle, candidate: &SimpleCycle) -> bool {
    if cycle.len() != candidate.len() {
        return false;
    }
    let n = cycle.len();
    let edges = cycle.edges();
    let entries = candidate.transitions();
    (0..n).any(|r| {
        (0..n).all(|k| {
            let w = entries[(r + k) % n];
            let (t_i, t_j) = edges[k];
            w.own == t_i.pred && w.written == t_j.pred
        })
    })
}

/// At most this many enabling walks are materialized in a
/// [`NaiveOutcome`]; the exact count is always reported separately.
pub const NAIVE_WALK_CAP: usize = 64;

/// Outcome of the cycle-chain decider.
#[derive(Clone, Debug)]
pub struct NaiveOutcome {
    pub decision: Decision,
    /// A surviving cycle lying on a loop of the "is enabled by" relation;
    /// such a cycle's support is a refinement fixed point, so it is
    /// contained in the kernel. Present exactly on LIVELOCK.
    pub witness: Option<SimpleCycle>,
    /// Enabling walks of the witness over the survivors' transitions —
    /// the first [`NAIVE_WALK_CAP`] of them.
    pub walks: Vec<EnablingWalk>,
    /// Exact number of enabling walks the witness has.
    pub walks_total: u128,
    /// How many cycles survived pruning.
    pub survivors: usize,
    /// Total cycles enumerated before pruning.
    pub candidates: usize,
    /// Length of the longest surviving cycle (0 when FREE).
    pub longest_cycle: usize,
}

/// Decides livelock existence by cycle-chain pruning, independently of the
/// fixed-point refinement.
///
/// `max_len` bounds the cycle lengths enumerated; `|T|` is complete (no
/// witness cycle can be longer), smaller values trade completeness for
/// speed during fuzzing.
pub fn naive_decide(t: &TransitionSet, max_len: usize) -> NaiveOutcome {
    let g = PseudolivelockGraph::build(t);
    let all = enumerate_simple_cycles(&g, max_len);
    let candidates = all.len();
    let mut live = vec![true; all.len()];

    // An enabling walk has one entry per edge, so enabling partners share
    // the cycle's length; prune within length classes only.
    let mut by_len: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (i, c) in all.iter().enumerate() {
        by_len.entry(c.len()).or_default().push(i);
    }

    // Greatest set of cycles each enabled by a member of the set.
    loop {
        let mut changed = false;
        for bucket in by_len.values() {
            for &i in bucket {
                if !live[i] {
                    continue;
                }
                let enabled = bucket
                    .iter()
                    .any(|&j| live[j] && is_enabling_rotation(&all[i], &all[j]));
                if !enabled {
                    live[i] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let survivors: Vec<usize> = (0..all.len()).filter(|&i| live[i]).collect();
    if survivors.is_empty() {
        return NaiveOutcome {
            decision: Decision::Free,
            witness: None,
            walks: Vec::new(),
            walks_total: 0,
            survivors: 0,
            candidates,
            longest_cycle: 0,
        };
    }

    // Walk the "first enabler" pointers until they loop; cycles on the
    // loop feed one another, so any of them is a sound witness.
    let enabler_of = |i: usize| -> usize {
        survivors
            .iter()
            .copied()
            .find(|&j| is_enabling_rotation(&all[i], &all[j]))
            .expect("every survivor has a surviving enabler")
    };
    let mut seen: Vec<usize> = vec![survivors[0]];
    let witness_index = loop {
        let next = enabler_of(*seen.last().unwrap());
        if let Some(pos) = seen.iter().position(|&x| x == next) {
            break *seen[pos..].iter().min().unwrap();
        }
        seen.push(next);
    };

    let support = TransitionSet::from_members(
        t.m(),
        survivors
            .iter()
            .flat_map(|&i| all[i].transitions().iter().copied())
            .collect(),
    );
    let witness = all[witness_index].clone();
    let (walks, walks_total) = enabling_walks_bounded(&witness, &support, NAIVE_WALK_CAP);
    let longest_cycle = survivors.iter().map(|&i| all[i].len()).max().unwrap_or(0);

    NaiveOutcome {
        decision: Decision::Livelock,
        witness: Some(witness),
        walks,
        walks_total,
        survivors: survivors.len(),
        candidates,
        longest_cycle,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decide::decide_symmetric;
    use crate::transition::validate_protocol;
    use std::collections::BTreeSet;

    fn set(m: u8, triples: &[(u8, u8, u8)]) -> TransitionSet {
        validate_protocol(m, triples).unwrap()
    }

    fn three_cycle() -> TransitionSet {
        set(3, &[(0, 0, 1), (1, 1, 2), (2, 2, 0)])
    }

    fn copy_protocol() -> TransitionSet {
        set(
            3,
            &[(0, 1, 0), (0, 2, 0), (1, 0, 1), (1, 2, 1), (2, 0, 2), (2, 1, 2)],
        )
    }

    #[test]
    fn finds_the_single_three_cycle() {
        let g = PseudolivelockGraph::build(&three_cycle());
        let cycles = enumerate_simple_cycles(&g, 3);
        assert_eq!(cycles.len(), 1);
        assert_eq!(
            cycles[0].transitions(),
            &[
                Transition::new(0, 0, 1),
                Transition::new(1, 1, 2),
                Transition::new(2, 2, 0)
            ]
        );
    }

    #[test]
    fn canonical_rotation_starts_at_the_least_member() {
        let g = PseudolivelockGraph::build(&set(3, &[(1, 0, 1), (2, 1, 0)]));
        let cycles = enumerate_simple_cycles(&g, 4);
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].transitions()[0], Transition::new(1, 0, 1));
    }

    #[test]
    fn respects_the_length_bound() {
        let g = PseudolivelockGraph::build(&three_cycle());
        assert!(enumerate_simple_cycles(&g, 2).is_empty());
    }

    /// Independent enumeration: try every subset and every ordering, keep
    /// the sequences whose consecutive pairs (and wrap) are edges, and
    /// canonicalize by rotation. Exponential, but the graphs are tiny.
    fn cycles_by_exhaustion(g: &PseudolivelockGraph, max_len: usize) -> BTreeSet<Vec<Transition>> {
        fn extend(
            g: &PseudolivelockGraph,
            seq: &mut Vec<usize>,
            max_len: usize,
            out: &mut BTreeSet<Vec<Transition>>,
        ) {
            let last = *seq.last().unwrap();
            if seq.len() >= 2 && g.has_edge(last, seq[0]) {
                let mut rotations: Vec<Vec<usize>> = (0..seq.len())
                    .map(|r| {
                        (0..seq.len())
                            .map(|k| seq[(r + k) % seq.len()])
                            .collect()
                    })
                    .collect();
                rotations.sort();
                out.insert(rotations[0].iter().map(|&i| g.vertex(i)).collect());
            }
            if seq.len() < max_len {
                for w in 0..g.vertex_count() {
                    if g.has_edge(last, w) && !seq.contains(&w) {
                        seq.push(w);
                        extend(g, seq, max_len, out);
                        seq.pop();
                    }
                }
            }
        }
        let mut out = BTreeSet::new();
        for v in 0..g.vertex_count() {
            let mut seq = vec![v];
            extend(g, &mut seq, max_len, &mut out);
        }
        out
    }

    #[test]
    fn agrees_with_exhaustive_enumeration_on_the_copy_protocol() {
        let g = PseudolivelockGraph::build(&copy_protocol());
        let fast: BTreeSet<Vec<Transition>> = enumerate_simple_cycles(&g, 6)
            .into_iter()
            .map(|c| c.transitions().to_vec())
            .collect();
        let slow = cycles_by_exhaustion(&g, 6);
        assert_eq!(fast, slow);
        assert!(!fast.is_empty());
    }

    #[test]
    fn three_cycle_enables_itself() {
        let kernel = three_cycle();
        let g = PseudolivelockGraph::build(&kernel);
        let cycle = enumerate_simple_cycles(&g, 3).remove(0);
        let walks = enabling_walks(&cycle, &kernel);
        assert_eq!(walks.len(), 1);
        assert_eq!(walks[0].entries(), cycle.transitions());
        assert!(walks[0].closes());
    }

    #[test]
    fn unwitnessed_cycle_has_no_walks() {
        let s = set(3, &[(1, 0, 1), (2, 1, 0)]);
        let g = PseudolivelockGraph::build(&s);
        let cycle = enumerate_simple_cycles(&g, 2).remove(0);
        assert!(enabling_walks(&cycle, &s).is_empty());
        assert_eq!(enabling_walks_bounded(&cycle, &s, 8), (Vec::new(), 0));
    }

    #[test]
    fn walk_enumeration_is_capped_but_counted_exactly() {
        let host = set(4, &[(0, 1, 0), (1, 0, 1)]);
        let g = PseudolivelockGraph::build(&host);
        let cycle = enumerate_simple_cycles(&g, 2).remove(0);
        // Two witnesses per edge: 2 * 2 = 4 walks in all.
        let support = set(4, &[(0, 0, 1), (1, 0, 1), (2, 1, 0), (3, 1, 0)]);
        let (all, total) = enabling_walks_bounded(&cycle, &support, usize::MAX);
        assert_eq!(total, 4);
        assert_eq!(all.len(), 4);
        let (capped, capped_total) = enabling_walks_bounded(&cycle, &support, 3);
        assert_eq!(capped_total, 4, "the exact count survives the cap");
        assert_eq!(capped.as_slice(), &all[..3], "capped output is a prefix");
        for walk in &capped {
            assert!(walk.closes());
        }
    }

    #[test]
    fn naive_decider_matches_refinement_on_small_cases() {
        for (t, expected) in [
            (three_cycle(), Decision::Livelock),
            (copy_protocol(), Decision::Livelock),
            (set(3, &[(1, 0, 1), (2, 1, 0)]), Decision::Free),
            (set(3, &[(0, 2, 1), (1, 1, 0), (2, 0, 1)]), Decision::Free),
            (TransitionSet::empty(3), Decision::Free),
        ] {
            let outcome = naive_decide(&t, t.len().max(2));
            assert_eq!(outcome.decision, expected, "on {t}");
        }
    }

    #[test]
    fn witness_cycle_lies_inside_the_kernel() {
        for t in [three_cycle(), copy_protocol()] {
            let kernel = decide_symmetric(&t).kernel;
            let outcome = naive_decide(&t, t.len());
            let witness = outcome.witness.expect("livelock has a witness");
            assert!(witness.len() <= t.len());
            for w in witness.transitions() {
                assert!(kernel.contains(w), "{w} outside the kernel");
            }
            assert!(!outcome.walks.is_empty());
            for walk in &outcome.walks {
                assert_eq!(walk.len(), witness.len());
                assert!(walk.closes());
            }
        }
    }

    #[test]
    fn shadow_pair_distinctness_is_observable() {
        let g = PseudolivelockGraph::build(&three_cycle());
        let cycle = enumerate_simple_cycles(&g, 3).remove(0);
        assert!(cycle.shadow_pairs_distinct());
    }
}
