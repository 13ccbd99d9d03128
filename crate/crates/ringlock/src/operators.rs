//! Shadow projection, shadow-directed filtering, and the one-step kernel
//! refinement operator `phi`.
//!
//! On a ring, an edge `t -> u` of the pseudolivelock graph is traversable
//! by some process only if its *predecessor* moves from `t.pred` to
//! `u.pred` in between — that pair of predecessor readings is the edge's
//! shadow. [`shadow`] collects the shadows of every edge of `H(P)`;
//! [`filter`] keeps the transitions whose own `(own, written)` footprint
//! matches some demanded shadow, i.e. those able to serve as the
//! predecessor-side witness of an edge. One refinement step is then
//!
//! ```text
//! phi(S) = pl(filter(S, shadow(pl(S))))
//! ```
//!
//! `phi` only ever removes transitions (it is deflationary) and respects
//! inclusion (it is monotone), so iterating it from the full protocol
//! walks a strictly decreasing chain to its greatest fixed point — the
//! livelock kernel. See [`crate::decide`] for the iteration itself.

use std::collections::BTreeSet;
use std::fmt;

use crate::graph::{pl, PseudolivelockGraph};
use crate::transition::{TransitionSet, Value};

/// A set of `(from, to)` predecessor-reading pairs demanded by the edges
/// of some pseudolivelock graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShadowSet {
    pairs: BTreeSet<(Value, Value)>,
}

impl ShadowSet {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u8, u8)>) -> Self {
        ShadowSet {
            pairs: pairs
                .into_iter()
                .map(|(a, b)| (Value(a), Value(b)))
                .collect(),
        }
    }

    pub fn contains(&self, from: Value, to: Value) -> bool {
        self.pairs.contains(&(from, to))
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Value, Value)> {
        self.pairs.iter()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

impl fmt::Display for ShadowSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (a, b)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({a},{b})")?;
        }
        write!(f, "}}")
    }
}

/// The shadows `(t.pred, u.pred)` of every edge `t -> u` of `H(P)`.
pub fn shadow(p: &TransitionSet) -> ShadowSet {
    let g = PseudolivelockGraph::build(p);
    ShadowSet {
        pairs: g
            .edges()
            .map(|(i, j)| (g.vertex(i).pred, g.vertex(j).pred))
            .collect(),
    }
}

/// The transitions of `s` whose `(own, written)` pair appears in `r` —
/// those able to witness some demanded shadow.
pub fn filter(s: &TransitionSet, r: &ShadowSet) -> TransitionSet {
    s.retain_where(|t| r.contains(t.own, t.written))
}

/// One kernel refinement step: keep the witnesses of the cyclic part's
/// shadows, then re-extract the cyclic part.
pub fn phi(s: &TransitionSet) -> TransitionSet {
    pl(&filter(s, &shadow(&pl(s))))
}
