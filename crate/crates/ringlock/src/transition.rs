//! Domain values, guarded write transitions, and validated transition sets.
//!
//! A protocol over the ring domain `Z_m` is a finite set of transitions.
//! A transition `(pred, own, written)` is enabled at a process whose
//! predecessor's variable reads `pred` and whose own variable reads `own`;
//! firing it overwrites the process's variable with `written`. Two
//! structural rules are enforced up front and relied on everywhere else:
//!
//! * **progress** — `own != written`, so every firing changes the owned
//!   variable and a transition immediately disables itself;
//! * **self-disabling** — no firing may leave its own process enabled under
//!   the same predecessor reading: there is no pair `t`, `u` with
//!   `u.pred == t.pred` and `u.own == t.written`. Equivalently, a process
//!   never fires twice in a row while its predecessor's variable stays put.
//!
//! [`TransitionSet`] keeps its members sorted lexicographically by
//! `(pred, own, written)`. Every traversal in the crate inherits that
//! order, which is what makes verdicts, traces, and reports reproducible
//! byte for byte.

use std::fmt;

use thiserror::Error;

/// A point of the shared domain `Z_m`.
///
/// The range check `0 <= v < m` happens in [`validate_protocol`]; a bare
/// `Value` is just a small integer with ordering and display.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Value(pub u8);

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One guarded write: enabled when the predecessor's variable shows `pred`
/// and the owner's shows `own`; firing replaces `own` with `written`.
///
/// The derived ordering is lexicographic by `(pred, own, written)` — the
/// canonical order used throughout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub pred: Value,
    pub own: Value,
    pub written: Value,
}

impl Transition {
    pub fn new(pred: u8, own: u8, written: u8) -> Self {
        Transition {
            pred: Value(pred),
            own: Value(own),
            written: Value(written),
        }
    }

    pub fn as_triple(&self) -> (u8, u8, u8) {
        (self.pred.0, self.own.0, self.written.0)
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.pred, self.own, self.written)
    }
}

/// Why a raw protocol was rejected by [`validate_protocol`].
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("domain too small: m = {m}, need at least 2")]
    DomainTooSmall { m: u8 },
    #[error("{field} out of range in ({p},{o},{w}): {value} is not below m = {m}")]
    OutOfRange {
        p: u8,
        o: u8,
        w: u8,
        field: &'static str,
        value: u8,
        m: u8,
    },
    #[error("no progress in ({p},{o},{w}): own = written")]
    OwnEqualsWritten { p: u8, o: u8, w: u8 },
    #[error("duplicate transition ({p},{o},{w})")]
    Duplicate { p: u8, o: u8, w: u8 },
    #[error(
        "self-disabling breach: {writer} writes {value}, {enabled} enabled at (pred={pred}, own={value})"
    )]
    SelfDisablingBreach {
        writer: Transition,
        enabled: Transition,
        pred: Value,
        value: Value,
    },
}

/// A validated set of transitions over a fixed domain `Z_m`, kept in
/// canonical lexicographic order.
///
/// Subsets of a valid set are again valid (progress and self-disabling are
/// universally quantified over pairs), so the refinement operators may
/// carve freely without re-validating.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransitionSet {
    m: u8,
    transitions: Vec<Transition>,
}

impl TransitionSet {
    pub fn empty(m: u8) -> Self {
        TransitionSet {
            m,
            transitions: Vec::new(),
        }
    }

    /// Builds a set from members of an already-validated set.
    ///
    /// Sorts and deduplicates; debug builds re-check the structural rules.
    pub(crate) fn from_members(m: u8, mut members: Vec<Transition>) -> Self {
        members.sort_unstable();
        members.dedup();
        let set = TransitionSet {
            m,
            transitions: members,
        };
        debug_assert!(set.structurally_valid(), "invalid members slipped in");
        set
    }

    fn structurally_valid(&self) -> bool {
        self.transitions.iter().all(|t| {
            t.own != t.written && t.pred.0 < self.m && t.own.0 < self.m && t.written.0 < self.m
        }) && self.transitions.iter().all(|t| {
            self.transitions
                .iter()
                .all(|u| u.pred != t.pred || u.own != t.written)
        })
    }

    pub fn m(&self) -> u8 {
        self.m
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Transition> {
        self.transitions.iter()
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn get(&self, index: usize) -> Transition {
        self.transitions[index]
    }

    pub fn contains(&self, t: &Transition) -> bool {
        self.transitions.binary_search(t).is_ok()
    }

    pub fn index_of(&self, t: &Transition) -> Option<usize> {
        self.transitions.binary_search(t).ok()
    }

    /// The members satisfying `keep`, as a new set over the same domain.
    pub fn retain_where(&self, mut keep: impl FnMut(&Transition) -> bool) -> TransitionSet {
        TransitionSet {
            m: self.m,
            transitions: self.transitions.iter().copied().filter(|t| keep(t)).collect(),
        }
    }

    /// Members of `self` that are not members of `other`.
    pub fn difference(&self, other: &TransitionSet) -> TransitionSet {
        self.retain_where(|t| !other.contains(t))
    }

    pub fn is_subset_of(&self, other: &TransitionSet) -> bool {
        self.transitions.iter().all(|t| other.contains(t))
    }
}

impl fmt::Display for TransitionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, t) in self.transitions.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "}}")
    }
}

/// Validates a raw protocol and returns it in canonical order, or every
/// violation found (never just the first).
///
/// Checks, in order: domain size, value ranges, progress (`own != written`),
/// duplicates (rejected, not merged — a doubled line in a protocol file is
/// almost always a transcription slip), and the self-disabling rule over
/// every ordered pair.
pub fn validate_protocol(m: u8, triples: &[(u8, u8, u8)]) -> Result<TransitionSet, Vec<Violation>> {
    let mut violations = Vec::new();
    if m < 2 {
        violations.push(Violation::DomainTooSmall { m });
    }
    for &(p, o, w) in triples {
        if m >= 2 {
            for (field, value) in [("pred", p), ("own", o), ("written", w)] {
                if value >= m {
                    violations.push(Violation::OutOfRange {
                        p,
                        o,
                        w,
                        field,
                        value,
                        m,
                    });
                }
            }
        }
        if o == w {
            violations.push(Violation::OwnEqualsWritten { p, o, w });
        }
    }

    let mut sorted: Vec<(u8, u8, u8)> = triples.to_vec();
    sorted.sort_unstable();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        if j - i > 1 {
            let (p, o, w) = sorted[i];
            violations.push(Violation::Duplicate { p, o, w });
        }
        i = j;
    }

    let mut distinct = sorted;
    distinct.dedup();
    for &(tp, to, tw) in &distinct {
        for &(up, uo, uw) in &distinct {
            if (tp, to, tw) != (up, uo, uw) && up == tp && uo == tw {
                violations.push(Violation::SelfDisablingBreach {
                    writer: Transition::new(tp, to, tw),
                    enabled: Transition::new(up, uo, uw),
                    pred: Value(tp),
                    value: Value(tw),
                });
            }
        }
    }

    if violations.is_empty() {
        Ok(TransitionSet {
            m,
            transitions: distinct
                .into_iter()
                .map(|(p, o, w)| Transition::new(p, o, w))
                .collect(),
        })
    } else {
        Err(violations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_valid_protocol_in_canonical_order() {
        let set = validate_protocol(3, &[(2, 2, 0), (0, 0, 1), (1, 1, 2)]).unwrap();
        assert_eq!(set.m(), 3);
        assert_eq!(
            set.transitions(),
            &[
                Transition::new(0, 0, 1),
                Transition::new(1, 1, 2),
                Transition::new(2, 2, 0)
            ]
        );
    }

    #[test]
    fn accepts_empty_protocol() {
        let set = validate_protocol(2, &[]).unwrap();
        assert!(set.is_empty());
    }

    #[test]
    fn rejects_small_domain() {
        let err = validate_protocol(1, &[]).unwrap_err();
        assert_eq!(err, vec![Violation::DomainTooSmall { m: 1 }]);
    }

    #[test]
    fn rejects_out_of_range_values() {
        let err = validate_protocol(3, &[(0, 0, 3)]).unwrap_err();
        assert!(matches!(
            err[0],
            Violation::OutOfRange {
                field: "written",
                value: 3,
                ..
            }
        ));
    }

    #[test]
    fn rejects_no_progress_write() {
        let err = validate_protocol(3, &[(0, 1, 1)]).unwrap_err();
        assert_eq!(err, vec![Violation::OwnEqualsWritten { p: 0, o: 1, w: 1 }]);
    }

    #[test]
    fn rejects_duplicates_rather_than_merging() {
        let err = validate_protocol(3, &[(0, 0, 1), (0, 0, 1)]).unwrap_err();
        assert_eq!(err, vec![Violation::Duplicate { p: 0, o: 0, w: 1 }]);
    }

    #[test]
    fn rejects_self_disabling_breach_naming_the_pair() {
        let err = validate_protocol(3, &[(0, 0, 1), (0, 1, 2)]).unwrap_err();
        assert_eq!(err.len(), 1);
        assert_eq!(
            err[0].to_string(),
            "self-disabling breach: (0,0,1) writes 1, (0,1,2) enabled at (pred=0, own=1)"
        );
    }

    #[test]
    fn collects_every_violation() {
        let err = validate_protocol(3, &[(0, 1, 1), (0, 0, 5)]).unwrap_err();
        assert!(err.len() >= 2);
    }

    #[test]
    fn subsets_preserve_validity() {
        let set = validate_protocol(3, &[(0, 0, 1), (1, 1, 2), (2, 2, 0)]).unwrap();
        let sub = set.retain_where(|t| t.pred == Value(0));
        assert_eq!(sub.len(), 1);
        assert_eq!(sub.m(), 3);
        assert!(sub.is_subset_of(&set));
    }

    #[test]
    fn difference_and_membership() {
        let set = validate_protocol(3, &[(0, 0, 1), (1, 1, 2)]).unwrap();
        let sub = set.retain_where(|t| t.pred == Value(0));
        let diff = set.difference(&sub);
        assert_eq!(diff.transitions(), &[Transition::new(1, 1, 2)]);
        assert!(set.contains(&Transition::new(0, 0, 1)));
        assert!(!sub.contains(&Transition::new(1, 1, 2)));
    }
}
