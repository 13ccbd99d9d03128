//! The pseudolivelock graph `H(S)` and extraction of its cyclic part.
//!
//! Vertices are the transitions of a set `S`; there is an edge `t -> u`
//! exactly when `u.own == t.written`: a process that has just fired `t`
//! holds the value `u` requires, so `u` is a possible *next* firing once
//! the predecessor supplies `u.pred`. A process that fires forever walks
//! this graph forever, so only vertices lying on directed cycles — the
//! members of non-trivial strongly connected components — can take part in
//! a livelock. [`pl`] extracts exactly those vertices.
//!
//! The edge set is a pure function of the vertex set; a graph is built in
//! one shot and never mutated, so recomputing it can never disagree with a
//! cached copy.

use petgraph::graph::{DiGraph, NodeIndex};

use crate::relation::Relation;
use crate::transition::{Transition, TransitionSet};

/// `H(S)`: the transitions of `S` with successor edges `u.own == t.written`.
#[derive(Clone, Debug)]
pub struct PseudolivelockGraph {
    vertices: TransitionSet,
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl PseudolivelockGraph {
    pub fn build(s: &TransitionSet) -> Self {
        let n = s.len();
        let mut adj = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (i, t) in s.iter().enumerate() {
            for (j, u) in s.iter().enumerate() {
                if u.own == t.written {
                    adj[i].push(j);
                    edge_count += 1;
                }
            }
        }
        PseudolivelockGraph {
            vertices: s.clone(),
            adj,
            edge_count,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn vertices(&self) -> &TransitionSet {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Transition {
        self.vertices.get(i)
    }

    /// Successor indices of vertex `i`, ascending.
    pub fn successors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&j).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// All edges as index pairs, row-major (lexicographic in the canonical
    /// transition order).
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, succs)| succs.iter().map(move |&j| (i, j)))
    }

    /// The edge set as a square boolean relation on the vertices.
    pub fn relation(&self) -> Relation {
        let mut r = Relation::new(self.vertex_count(), self.vertex_count());
        for (i, j) in self.edges() {
            r.set(i, j);
        }
        r
    }

    /// Strongly connected components, members ascending within each.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut g: DiGraph<(), (), u32> = DiGraph::with_capacity(self.vertex_count(), self.edge_count);
        for _ in 0..self.vertex_count() {
            g.add_node(());
        }
        for (i, j) in self.edges() {
            g.add_edge(NodeIndex::new(i), NodeIndex::new(j), ());
        }
        let mut comps: Vec<Vec<usize>> = petgraph::algo::tarjan_scc(&g)
            .into_iter()
            .map(|comp| {
                let mut ids: Vec<usize> = comp.into_iter().map(|n| n.index()).collect();
                ids.sort_unstable();
                ids
            })
            .collect();
        comps.sort_by_key(|c| c[0]);
        comps
    }
}

/// The cyclic part of `H(S)`: every transition lying on a directed cycle,
/// i.e. the union of the strongly connected components of size two or more.
///
/// A size-one component would only count via a self-loop, and a self-loop
/// `t -> t` means `t.own == t.written`, which validation forbids; the
/// branch below stays as a tripwire in case that rule is ever relaxed.
pub fn pl(s: &TransitionSet) -> TransitionSet {
    let g = PseudolivelockGraph::build(s);
    let mut kept: Vec<Transition> = Vec::new();
    for comp in g.components() {
        if comp.len() >= 2 || g.has_edge(comp[0], comp[0]) {
            assert!(
                comp.len() >= 2,
                "self-loop in H at {}: a no-progress transition escaped validation",
                g.vertex(comp[0])
            );
            kept.extend(comp.iter().map(|&i| g.vertex(i)));
        }
    }
    TransitionSet::from_members(s.m(), kept)
}

/// The members of `s` lying on a directed cycle that uses only the listed
/// edges (pairs of indices into `s`'s canonical order). Same extraction as
/// [`pl`], restricted to a subgraph of `H(S)`.
pub fn cyclic_restricted(s: &TransitionSet, edges: &[(usize, usize)]) -> TransitionSet {
    let mut g: DiGraph<(), (), u32> = DiGraph::with_capacity(s.len(), edges.len());
    for _ in 0..s.len() {
        g.add_node(());
    }
    for &(i, j) in edges {
        debug_assert!(i != j, "H never carries self-loops");
        g.add_edge(NodeIndex::new(i), NodeIndex::new(j), ());
    }
    let mut kept: Vec<Transition> = Vec::new();
    for comp in petgraph::algo::tarjan_scc(&g) {
        if comp.len() >= 2 {
            kept.extend(comp.into_iter().map(|n| s.get(n.index())));
        }
    }
    TransitionSet::from_members(s.m(), kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transition::validate_protocol;

    fn set(m: u8, triples: &[(u8, u8, u8)]) -> TransitionSet {
        validate_protocol(m, triples).unwrap()
    }

    #[test]
    fn three_cycle_edges() {
        let s = set(3, &[(0, 0, 1), (1, 1, 2), (2, 2, 0)]);
        let g = PseudolivelockGraph::build(&s);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 0)]);
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn mutual_pair_has_edges_both_ways() {
        let s = set(3, &[(1, 0, 1), (2, 1, 0)]);
        let g = PseudolivelockGraph::build(&s);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn isolated_transition_has_no_edges() {
        let s = set(3, &[(0, 1, 2)]);
        let g = PseudolivelockGraph::build(&s);
        assert_eq!(g.edge_count(), 0);
        assert!(pl(&s).is_empty());
    }

    #[test]
    fn pl_keeps_full_cycle() {
        let s = set(3, &[(0, 0, 1), (1, 1, 2), (2, 2, 0)]);
        assert_eq!(pl(&s), s);
    }

    #[test]
    fn pl_drops_acyclic_fringe() {
        // (0,2,1) feeds the 2-cycle between (1,1,0) and (2,0,1) but lies on
        // no cycle itself: nothing in the set writes a 2.
        let s = set(3, &[(0, 2, 1), (1, 1, 0), (2, 0, 1)]);
        let expected = set(3, &[(1, 1, 0), (2, 0, 1)]);
        assert_eq!(pl(&s), expected);
    }

    #[test]
    fn pl_of_empty_is_empty() {
        assert!(pl(&TransitionSet::empty(3)).is_empty());
    }

    #[test]
    fn edges_are_a_function_of_the_vertex_set() {
        let s = set(
            3,
            &[(0, 1, 0), (0, 2, 0), (1, 0, 1), (1, 2, 1), (2, 0, 2), (2, 1, 2)],
        );
        let a: Vec<_> = PseudolivelockGraph::build(&s).edges().collect();
        let b: Vec<_> = PseudolivelockGraph::build(&s).edges().collect();
        assert_eq!(a, b);
        assert_eq!(a.len(), 12, "each copy transition feeds two others");
    }

    #[test]
    fn components_partition_vertices() {
        let s = set(3, &[(0, 2, 1), (1, 1, 0), (2, 0, 1)]);
        let g = PseudolivelockGraph::build(&s);
        let comps = g.components();
        let mut all: Vec<usize> = comps.iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..s.len()).collect::<Vec<_>>());
    }
}
