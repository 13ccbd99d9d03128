//! Livelock decision for symmetric rings and for rings with one
//! distinguished process.
//!
//! [`decide_symmetric`] iterates the refinement step [`phi`] from the full
//! protocol. Each application removes at least one transition until either
//! the cyclic part empties (**FREE** — no ring size admits a livelock) or a
//! fixed point is reached (**LIVELOCK** — the fixed point is the kernel
//! `L*`, and some ring size exhibits an execution where every process fires
//! forever). Termination therefore takes at most `|T|` applications, each
//! polynomial in `|T|`.
//!
//! [`decide_ring11`] handles a ring where position 0 runs `T0` and every
//! other position runs `T_other`. The two sides constrain each other
//! through their shadow demands, so the procedure alternates: re-stabilize
//! the `other` side under the current `P0` kernel's demands (a warm-started
//! run of the same refinement iteration), then recompute the `P0` kernel
//! under the `other` side's demands, until the pair stops changing or
//! either side empties.
//!
//! Every intermediate iterate is retained in an [`IterationTrace`], and
//! [`check_invariant_maximality`] audits the defining property of those
//! iterates — each member of iterate `i >= 1` lies on a directed cycle of
//! its own pseudolivelock graph — by an independent path search rather than
//! by trusting the component extractor that produced them.

use std::fmt;

use thiserror::Error;

use crate::graph::{pl, PseudolivelockGraph};
use crate::operators::{filter, phi, shadow, ShadowSet};
use crate::transition::{Transition, TransitionSet};

/// The outcome of a livelock decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Free,
    Livelock,
}

impl Decision {
    pub fn is_livelock(&self) -> bool {
        matches!(self, Decision::Livelock)
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decision::Free => write!(f, "FREE"),
            Decision::Livelock => write!(f, "LIVELOCK"),
        }
    }
}

/// The full refinement history of one fixed-point run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterationTrace {
    /// Iterate 0 is the starting set; iterate `i + 1` is `phi` of iterate
    /// `i`. Strictly decreasing until the final repeated iterate (livelock)
    /// or the final empty/acyclic iterate (free).
    pub iterates: Vec<TransitionSet>,
    /// `removed[i]` = iterate `i` minus iterate `i + 1`.
    pub removed: Vec<TransitionSet>,
    /// For FREE runs, the index of the iterate whose cyclic part was empty.
    pub emptied_at: Option<usize>,
}

impl IterationTrace {
    /// Number of `phi` applications performed.
    pub fn applications(&self) -> usize {
        self.iterates.len() - 1
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.iterates.iter().map(|s| s.len()).collect()
    }
}

/// Verdict for a symmetric ring: all positions run the same protocol.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub decision: Decision,
    /// The kernel `L*`; empty exactly when the decision is FREE.
    pub kernel: TransitionSet,
    pub trace: IterationTrace,
}

/// Runs the refinement iteration from an arbitrary starting set.
///
/// Returns the fixed point reached (empty for FREE) plus the trace. Shared
/// by both deciders; `decide_ring11` warm-starts it from an already
/// filtered set instead of the full protocol.
fn refine_to_fixpoint(start: TransitionSet) -> (TransitionSet, IterationTrace) {
    let bound = start.len() + 1;
    let mut iterates = vec![start.clone()];
    let mut removed = Vec::new();
    let mut emptied_at = None;
    let mut current = start;
    let kernel = loop {
        assert!(
            iterates.len() <= bound,
            "refinement failed to terminate within {bound} iterates"
        );
        let cyclic = pl(&current);
        if cyclic.is_empty() {
            emptied_at = Some(iterates.len() - 1);
            break TransitionSet::empty(current.m());
        }
        let next = pl(&filter(&current, &shadow(&cyclic)));
        debug_assert_eq!(next, phi(&current), "inlined step must agree with phi");
        if next == current {
            break current;
        }
        removed.push(current.difference(&next));
        iterates.push(next.clone());
        current = next;
    };
    (
        kernel,
        IterationTrace {
            iterates,
            removed,
            emptied_at,
        },
    )
}

/// Decides livelock existence for a symmetric ring (some size `K >= 2`).
pub fn decide_symmetric(t: &TransitionSet) -> Verdict {
    let (kernel, trace) = refine_to_fixpoint(t.clone());
    let decision = if kernel.is_empty() {
        Decision::Free
    } else {
        Decision::Livelock
    };
    debug_assert!(
        !decision.is_livelock() || phi(&kernel) == kernel,
        "livelock kernel must be a phi fixed point"
    );
    Verdict {
        decision,
        kernel,
        trace,
    }
}

/// The shadow demands at the three kinds of ring interface once both
/// kernels are fixed: what the last `other` process must supply to `P0`,
/// what `P0` must supply to `P1`, and what each remaining `other` process
/// must supply to its successor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterfaceShadows {
    /// Demanded across `P_{K-1} -> P_0`: the shadows of the `P0` kernel.
    pub before_p0: ShadowSet,
    /// Demanded across `P_0 -> P_1`: the shadows of the `other` kernel.
    pub after_p0: ShadowSet,
    /// Demanded across `P_r -> P_{r+1}` for `r >= 1`: same shadows as
    /// `after_p0`, listed separately because it is a distinct interface.
    pub between_others: ShadowSet,
}

/// Verdict for a ring with one distinguished process at position 0.
#[derive(Clone, Debug)]
pub struct Ring11Verdict {
    pub decision: Decision,
    /// Kernel of the distinguished position; empty on FREE.
    pub kernel_p0: TransitionSet,
    /// Kernel shared by positions `1..K-1`; empty on FREE.
    pub kernel_other: TransitionSet,
    /// The `P0` candidate after each outer step, starting with `pl(T0)`.
    /// Never grows from one entry to the next.
    pub p0_iterates: Vec<TransitionSet>,
    /// The warm-started refinement trace of each outer step's `other` run.
    pub other_traces: Vec<IterationTrace>,
    /// Present exactly on LIVELOCK.
    pub shadows: Option<InterfaceShadows>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RingInputError {
    #[error("domain mismatch: P0 protocol has m = {p0}, other protocol has m = {other}")]
    DomainMismatch { p0: u8, other: u8 },
}

/// Decides livelock existence for a `(1,1)`-ring: position 0 runs `t0`,
/// positions `1..K-1` run `t_other`, for some size `K >= 2`.
pub fn decide_ring11(
    t0: &TransitionSet,
    t_other: &TransitionSet,
) -> Result<Ring11Verdict, RingInputError> {
    if t0.m() != t_other.m() {
        return Err(RingInputError::DomainMismatch {
            p0: t0.m(),
            other: t_other.m(),
        });
    }
    let mut l0 = pl(t0);
    let mut l_other = pl(t_other);
    let mut p0_iterates = vec![l0.clone()];
    let mut other_traces = Vec::new();

    let free = |p0_iterates: Vec<TransitionSet>, other_traces: Vec<IterationTrace>| Ring11Verdict {
        decision: Decision::Free,
        kernel_p0: TransitionSet::empty(t0.m()),
        kernel_other: TransitionSet::empty(t0.m()),
        p0_iterates,
        other_traces,
        shadows: None,
    };

    if l0.is_empty() || l_other.is_empty() {
        return Ok(free(p0_iterates, other_traces));
    }

    let bound = t0.len() + 1;
    let mut outer = 0;
    loop {
        outer += 1;
        assert!(
            outer <= bound,
            "ring refinement failed to settle within {bound} outer steps"
        );
        // Re-stabilize the other side under P0's current demands.
        let seed = pl(&filter(&l_other, &shadow(&l0)));
        let (fixed, trace) = refine_to_fixpoint(seed);
        other_traces.push(trace);
        l_other = fixed;
        if l_other.is_empty() {
            return Ok(free(p0_iterates, other_traces));
        }
        // Close the ring: P0 re-derived from scratch under the other
        // side's demands.
        let l0_next = pl(&filter(t0, &shadow(&l_other)));
        if l0_next.is_empty() {
            p0_iterates.push(l0_next);
            return Ok(free(p0_iterates, other_traces));
        }
        let settled = l0_next == l0;
        l0 = l0_next;
        p0_iterates.push(l0.clone());
        if settled {
            break;
        }
    }

    let shadows = InterfaceShadows {
        before_p0: shadow(&l0),
        after_p0: shadow(&l_other),
        between_others: shadow(&l_other),
    };
    Ok(Ring11Verdict {
        decision: Decision::Livelock,
        kernel_p0: l0,
        kernel_other: l_other,
        p0_iterates,
        other_traces,
        shadows: Some(shadows),
    })
}

/// A member of some iterate that lies on no cycle of that iterate's graph.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("iterate {iterate}: {member} lies on no cycle of its pseudolivelock graph")]
pub struct MaximalityViolation {
    pub iterate: usize,
    pub member: Transition,
}

/// Audits a trace: every member of every iterate `i >= 1` must lie on a
/// directed cycle of that iterate's own graph.
///
/// Uses a plain path search (can we walk from a successor of `t` back to
/// `t`?) rather than the component machinery, so it cross-checks the
/// extractor instead of re-running it.
pub fn check_invariant_maximality(trace: &IterationTrace) -> Result<(), MaximalityViolation> {
    for (i, iterate) in trace.iterates.iter().enumerate().skip(1) {
        let g = PseudolivelockGraph::build(iterate);
        for v in 0..g.vertex_count() {
            if !returns_to(&g, v) {
                return Err(MaximalityViolation {
                    iterate: i,
                    member: g.vertex(v),
                });
            }
        }
    }
    Ok(())
}

fn returns_to(g: &PseudolivelockGraph, v: usize) -> bool {
    let mut stack: Vec<usize> = g.successors(v).to_vec();
    let mut seen = vec![false; g.vertex_count()];
    while let Some(w) = stack.pop() {
        if w == v {
            return true;
        }
        if !seen[w] {
            seen[w] = true;
            stack.extend_from_slice(g.successors(w));
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transition::validate_protocol;

    fn set(m: u8, triples: &[(u8, u8, u8)]) -> TransitionSet {
        validate_protocol(m, triples).unwrap()
    }

    #[test]
    fn three_cycle_is_a_livelock_with_itself_as_kernel() {
        let t = set(3, &[(0, 0, 1), (1, 1, 2), (2, 2, 0)]);
        let v = decide_symmetric(&t);
        assert_eq!(v.decision, Decision::Livelock);
        assert_eq!(v.kernel, t);
        assert_eq!(v.trace.applications(), 0);
    }

    #[test]
    fn mutual_pair_is_free_after_one_application() {
        let t = set(3, &[(1, 0, 1), (2, 1, 0)]);
        let v = decide_symmetric(&t);
        assert_eq!(v.decision, Decision::Free);
        assert!(v.kernel.is_empty());
        assert_eq!(v.trace.sizes(), vec![2, 0]);
        assert_eq!(v.trace.emptied_at, Some(1));
    }

    #[test]
    fn empty_protocol_is_free_immediately() {
        let v = decide_symmetric(&TransitionSet::empty(3));
        assert_eq!(v.decision, Decision::Free);
        assert_eq!(v.trace.emptied_at, Some(0));
        assert_eq!(v.trace.applications(), 0);
    }

    #[test]
    fn acyclic_singleton_is_free_without_any_application() {
        let t = set(3, &[(0, 1, 2)]);
        let v = decide_symmetric(&t);
        assert_eq!(v.decision, Decision::Free);
        assert_eq!(v.trace.emptied_at, Some(0));
    }

    #[test]
    fn fringe_dies_then_core_starves() {
        // The 2-cycle survives component extraction but demands shadows
        // (1,2)/(2,1); the only candidate witness (0,2,1) then lies on no
        // cycle by itself, so the second extraction empties the set.
        let t = set(3, &[(0, 2, 1), (1, 1, 0), (2, 0, 1)]);
        let v = decide_symmetric(&t);
        assert_eq!(v.decision, Decision::Free);
        assert_eq!(v.trace.sizes(), vec![3, 0]);
    }

    #[test]
    fn trace_satisfies_maximality() {
        for t in [
            set(3, &[(0, 0, 1), (1, 1, 2), (2, 2, 0)]),
            set(3, &[(1, 0, 1), (2, 1, 0)]),
            set(3, &[(0, 2, 1), (1, 1, 0), (2, 0, 1)]),
        ] {
            let v = decide_symmetric(&t);
            assert_eq!(check_invariant_maximality(&v.trace), Ok(()));
        }
    }

    #[test]
    fn corrupted_trace_names_the_cycle_free_member() {
        let t = set(3, &[(0, 0, 1), (1, 1, 2), (2, 2, 0)]);
        let mut v = decide_symmetric(&t);
        // Inject an iterate containing a member on no cycle.
        v.trace.iterates.push(set(3, &[(0, 1, 2)]));
        let err = check_invariant_maximality(&v.trace).unwrap_err();
        assert_eq!(err.iterate, v.trace.iterates.len() - 1);
        assert_eq!(err.member, Transition::new(0, 1, 2));
    }

    #[test]
    fn ring11_rejects_domain_mismatch() {
        let t0 = set(3, &[(0, 0, 1)]);
        let other = set(4, &[(0, 1, 0)]);
        assert_eq!(
            decide_ring11(&t0, &other).unwrap_err(),
            RingInputError::DomainMismatch { p0: 3, other: 4 }
        );
    }

    #[test]
    fn ring11_free_when_other_side_cannot_serve_p0() {
        // P0's 3-cycle demands shadows (0,1)/(1,2)/(2,0); the other side's
        // 2-cycle offers (0,1) only via (1,0,1), which then cannot cycle
        // alone, so the warm-started run empties.
        let t0 = set(3, &[(0, 0, 1), (1, 1, 2), (2, 2, 0)]);
        let other = set(3, &[(1, 0, 1), (2, 1, 0)]);
        let v = decide_ring11(&t0, &other).unwrap();
        assert_eq!(v.decision, Decision::Free);
        assert!(v.kernel_p0.is_empty() && v.kernel_other.is_empty());
    }

    #[test]
    fn ring11_free_when_either_side_starts_empty() {
        let t0 = set(3, &[(0, 1, 2)]); // acyclic alone
        let other = set(3, &[(1, 0, 1), (2, 1, 0)]);
        let v = decide_ring11(&t0, &other).unwrap();
        assert_eq!(v.decision, Decision::Free);
        assert!(v.other_traces.is_empty(), "settled before any outer step");
    }

    #[test]
    fn ring11_token_ring_keeps_both_kernels() {
        // Position 0 increments on equality; the others copy their
        // predecessor. The joint fixed point keeps all of P0 and exactly
        // the copy transitions compatible with P0's shadows.
        let t0 = set(3, &[(0, 0, 1), (1, 1, 2), (2, 2, 0)]);
        let other = set(
            3,
            &[(0, 1, 0), (0, 2, 0), (1, 0, 1), (1, 2, 1), (2, 0, 2), (2, 1, 2)],
        );
        let v = decide_ring11(&t0, &other).unwrap();
        assert_eq!(v.decision, Decision::Livelock);
        assert_eq!(v.kernel_p0, t0);
        assert_eq!(v.kernel_other, set(3, &[(0, 2, 0), (1, 0, 1), (2, 1, 2)]));
        let shadows = v.shadows.unwrap();
        assert_eq!(shadows.before_p0, shadow(&v.kernel_p0));
        assert_eq!(shadows.after_p0, shadows.between_others);
    }

    #[test]
    fn ring11_p0_iterates_never_grow() {
        let t0 = set(3, &[(0, 0, 1), (1, 1, 2), (2, 2, 0)]);
        let other = set(
            3,
            &[(0, 1, 0), (0, 2, 0), (1, 0, 1), (1, 2, 1), (2, 0, 2), (2, 1, 2)],
        );
        let v = decide_ring11(&t0, &other).unwrap();
        for pair in v.p0_iterates.windows(2) {
            assert!(pair[1].is_subset_of(&pair[0]));
        }
    }
}
