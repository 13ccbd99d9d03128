//! The propagation relation over a livelock kernel and the ring-size pair
//! search.
//!
//! When every process of the ring runs the kernel forever, an edge
//! `t_i -> t_j` of `H(L*)` taken at position `r` forces position `r - 1`
//! to fire a *witness* in between: a `t_k` with `t_k.own == t_i.pred` and
//! `t_k.written == t_j.pred`. The propagation relation `E*` records one
//! arc `t_k -> t_j` per (edge, witness) pair: activity at `t_j` pulls
//! activity at `t_k` one position upstream. At a fixed point the two
//! relations commute, `H* ∘ E* = E* ∘ H*` — chasing an edge and then
//! propagating upstream reaches the same pairs as propagating first and
//! chasing after ([`equivariant`]). The same construction applies across
//! an interface between *different* kernels (`P0` boundaries of a
//! `(1,1)`-ring); see [`interface_relation`] and [`commutes`].
//!
//! [`circulation_search`] looks for exponent pairs `(a, K)` with
//! `(H*)^a ∩ (E*)^K` nonempty: some transition pair is simultaneously `a`
//! edge-steps apart locally and `K` propagation-steps apart around a ring
//! of size `K`. The raw pairs indicate *compatible wrap-arounds*, not
//! minimal ring sizes — minimality claims stay with the explicit-state
//! oracle, and reports say so.

use thiserror::Error;

use crate::graph::{cyclic_restricted, PseudolivelockGraph};
use crate::relation::Relation;
use crate::transition::{Transition, TransitionSet};

/// `E*` over one kernel: arcs `t_k -> t_j` where `t_k` witnesses some
/// `H*`-edge ending at `t_j`.
#[derive(Clone, Debug)]
pub struct PropagationRelation {
    kernel: TransitionSet,
    matrix: Relation,
}

impl PropagationRelation {
    /// Builds `E*` for a kernel acting as both sides of its own interface
    /// (every position runs the same kernel).
    pub fn for_kernel(kernel: &TransitionSet) -> Self {
        PropagationRelation {
            kernel: kernel.clone(),
            matrix: interface_relation(kernel, kernel),
        }
    }

    pub fn kernel(&self) -> &TransitionSet {
        &self.kernel
    }

    pub fn matrix(&self) -> &Relation {
        &self.matrix
    }

    /// Arcs as transition pairs, row-major (canonical order).
    pub fn arcs(&self) -> Vec<(Transition, Transition)> {
        self.matrix
            .arcs()
            .into_iter()
            .map(|(k, j)| (self.kernel.get(k), self.kernel.get(j)))
            .collect()
    }
}

/// The propagation relation across one interface: `pred_kernel` runs at
/// position `r - 1`, `succ_kernel` at position `r`.
///
/// For each edge `t_i -> t_j` of `H(succ_kernel)`, every
/// `t_k ∈ pred_kernel` with `t_k.own == t_i.pred` and
/// `t_k.written == t_j.pred` contributes the arc `t_k -> t_j`. The result
/// is a `|pred| × |succ|` relation.
pub fn interface_relation(pred_kernel: &TransitionSet, succ_kernel: &TransitionSet) -> Relation {
    let g = PseudolivelockGraph::build(succ_kernel);
    let mut r = Relation::new(pred_kernel.len(), succ_kernel.len());
    for (i, j) in g.edges() {
        let t_i = g.vertex(i);
        let t_j = g.vertex(j);
        for (k, t_k) in pred_kernel.iter().enumerate() {
            if t_k.own == t_i.pred && t_k.written == t_j.pred {
                r.set(k, j);
            }
        }
    }
    r
}

/// Does `h_pred ∘ e == e ∘ h_succ` hold exactly?
///
/// `e` relates the predecessor side to the successor side; the equation
/// says stepping locally on the predecessor and then crossing equals
/// crossing and then stepping locally on the successor.
pub fn commutes(h_pred: &Relation, e: &Relation, h_succ: &Relation) -> bool {
    h_pred.compose(e) == e.compose(h_succ)
}

/// Single-kernel equivariance: `h ∘ e == e ∘ h`.
pub fn equivariant(h: &Relation, e: &Relation) -> bool {
    commutes(h, e, h)
}

/// Witness-availability at a kernel: every edge of `H(L*)` has at least
/// one witness in `L*`, and every member of `L*` witnesses at least one
/// edge. Returns the violations found (empty means the check passed).
pub fn witness_totality(kernel: &TransitionSet) -> Vec<TotalityViolation> {
    let g = PseudolivelockGraph::build(kernel);
    let e = interface_relation(kernel, kernel);
    let mut violations = Vec::new();
    for (i, j) in g.edges() {
        let served = (0..kernel.len()).any(|k| {
            let t_k = kernel.get(k);
            t_k.own == g.vertex(i).pred && t_k.written == g.vertex(j).pred
        });
        if !served {
            violations.push(TotalityViolation::UnservedEdge {
                from: g.vertex(i),
                to: g.vertex(j),
            });
        }
    }
    for (k, t_k) in kernel.iter().enumerate() {
        if (0..kernel.len()).all(|j| !e.get(k, j)) {
            violations.push(TotalityViolation::IdleMember { member: *t_k });
        }
    }
    violations
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TotalityViolation {
    #[error("edge {from} -> {to} has no witness in the kernel")]
    UnservedEdge { from: Transition, to: Transition },
    #[error("{member} witnesses no edge of the kernel")]
    IdleMember { member: Transition },
}

/// The greatest subset of a kernel that stays on cycles of its *witnessed*
/// edges: repeatedly drop every `H`-edge whose wrap-around demand no
/// current member serves, then every member left on no cycle of the
/// remaining subgraph, until stable.
///
/// Kernels reported by the refinement can retain members whose own
/// consecutive firings nobody upstream can sustain — the member survives
/// because it *witnesses someone else's* edge, not because its own edges
/// are witnessed. Such members never recur in an execution, and their
/// presence is exactly what breaks `H* ∘ E* = E* ∘ H*` on the full kernel.
/// A nonempty core certifies a livelock claim structurally: its witnessed
/// subgraph keeps every member on a cycle whose every edge is served from
/// within.
pub fn witness_total_core(kernel: &TransitionSet) -> TransitionSet {
    let mut current = kernel.clone();
    loop {
        let g = PseudolivelockGraph::build(&current);
        let served: Vec<(usize, usize)> = g
            .edges()
            .filter(|&(i, j)| {
                current
                    .iter()
                    .any(|t_k| t_k.own == g.vertex(i).pred && t_k.written == g.vertex(j).pred)
            })
            .collect();
        let next = cyclic_restricted(&current, &served);
        if next == current {
            return current;
        }
        current = next;
    }
}

/// Result of the `(a, K)` pair search.
#[derive(Clone, Debug)]
pub struct AdmissibleKReport {
    pub a_max: usize,
    pub k_max: usize,
    /// All pairs `1 <= a <= a_max`, `2 <= K <= k_max` with
    /// `(H*)^a ∩ (E*)^K` nonempty, ascending.
    pub pairs: Vec<(usize, usize)>,
    /// First repetition in the `H*` power sequence, as
    /// `(first exponent, period)`, if one occurred within `a_max`.
    pub h_period: Option<(usize, usize)>,
    /// Likewise for the `E*` power sequence within `k_max`.
    pub e_period: Option<(usize, usize)>,
    /// Arc count of `E*` — the other natural reading of the wrap-around
    /// exponent. `arc_exponent_ks` lists the `K` with
    /// `(H*)^{arc count} ∩ (E*)^K` nonempty, when that power is reachable
    /// (directly or through a detected period); `None` when it is not.
    pub e_arc_count: usize,
    pub arc_exponent_ks: Option<Vec<usize>>,
    /// Minimal livelocking ring size according to the explicit-state
    /// oracle, when a scan was run. The pair search itself never claims
    /// minimality.
    pub oracle_min_k: Option<u32>,
}

/// Fixed wording carried by every circulation report.
pub const MIN_K_NOTE: &str =
    "pairs indicate compatible wrap-arounds, not minimal ring sizes; minimality is the oracle's call";

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CirculationError {
    #[error("circulation search needs a nonempty kernel")]
    EmptyKernel,
    #[error("circulation bounds too small: a_max = {a_max}, k_max = {k_max}, both must be >= 2")]
    BoundsTooSmall { a_max: usize, k_max: usize },
}

/// Default exponent bound for the local edge relation: `|L*|^2`.
pub fn default_a_max(kernel_len: usize) -> usize {
    (kernel_len * kernel_len).max(2)
}

/// Default ring-size bound for the propagation relation.
pub const DEFAULT_K_MAX: usize = 8;

/// Powers `base^1 .. base^max_exp`, cut short at the first repeated power.
///
/// Returns the distinct prefix plus `(first exponent, period)` when a
/// repetition was found; later powers follow from the period.
fn power_sequence(base: &Relation, max_exp: usize) -> (Vec<Relation>, Option<(usize, usize)>) {
    let mut powers = vec![base.clone()];
    let mut period = None;
    while powers.len() < max_exp {
        let next = powers.last().unwrap().compose(base);
        if let Some(pos) = powers.iter().position(|p| *p == next) {
            // next == base^(pos + 1); the sequence repeats from there on.
            period = Some((pos + 1, powers.len() + 1 - (pos + 1)));
            break;
        }
        powers.push(next);
    }
    (powers, period)
}

fn power_at<'a>(
    powers: &'a [Relation],
    period: Option<(usize, usize)>,
    exp: usize,
) -> Option<&'a Relation> {
    debug_assert!(exp >= 1);
    if exp <= powers.len() {
        return Some(&powers[exp - 1]);
    }
    let (start, period) = period?;
    Some(&powers[start - 1 + (exp - start) % period])
}

/// Searches for pairs `(a, K)` with `(H*)^a ∩ (E*)^K` nonempty over
/// `1 <= a <= a_max`, `2 <= K <= k_max`.
///
/// `h` and `e` must be square relations of equal, nonzero dimension (both
/// live on the same kernel).
pub fn circulation_search(
    h: &Relation,
    e: &Relation,
    a_max: usize,
    k_max: usize,
) -> Result<AdmissibleKReport, CirculationError> {
    if h.rows() == 0 {
        return Err(CirculationError::EmptyKernel);
    }
    if a_max < 2 || k_max < 2 {
        return Err(CirculationError::BoundsTooSmall { a_max, k_max });
    }
    assert!(h.is_square() && e.is_square() && h.rows() == e.rows());

    let (h_powers, h_period) = power_sequence(h, a_max);
    let (e_powers, e_period) = power_sequence(e, k_max);

    let mut pairs = Vec::new();
    for a in 1..=a_max {
        let ha = power_at(&h_powers, h_period, a).expect("a <= a_max is always reachable");
        for k in 2..=k_max {
            let ek = power_at(&e_powers, e_period, k).expect("k <= k_max is always reachable");
            if !ha.intersect(ek).is_empty() {
                pairs.push((a, k));
            }
        }
    }

    let e_arc_count = e.arc_count();
    let arc_exponent_ks = if e_arc_count >= 1 {
        power_at(&h_powers, h_period, e_arc_count).map(|ha| {
            (2..=k_max)
                .filter(|&k| {
                    let ek = power_at(&e_powers, e_period, k).expect("k <= k_max");
                    !ha.intersect(ek).is_empty()
                })
                .collect()
        })
    } else {
        None
    };

    Ok(AdmissibleKReport {
        a_max,
        k_max,
        pairs,
        h_period,
        e_period,
        e_arc_count,
        arc_exponent_ks,
        oracle_min_k: None,
    })
}
