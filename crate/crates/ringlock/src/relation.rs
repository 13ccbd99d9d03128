//! Boolean relations (as bit matrices) with composition, powers, and
//! intersection — the arithmetic behind circulation analysis.
//!
//! Composition follows the left-to-right convention:
//! `(a ∘ b)[x][z]` holds iff there is a `y` with `a[x][y]` and `b[y][z]`,
//! i.e. ordinary boolean matrix product. Relations may be rectangular;
//! powers are defined for square relations only.

use std::fmt;

/// A boolean relation between `rows` left elements and `cols` right
/// elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl Relation {
    /// The empty relation of the given shape.
    pub fn new(rows: usize, cols: usize) -> Self {
        Relation {
            rows,
            cols,
            bits: vec![false; rows * cols],
        }
    }

    /// The identity relation on `n` elements.
    pub fn identity(n: usize) -> Self {
        let mut r = Relation::new(n, n);
        for i in 0..n {
            r.set(i, i);
        }
        r
    }

    pub fn from_arcs(rows: usize, cols: usize, arcs: &[(usize, usize)]) -> Self {
        let mut r = Relation::new(rows, cols);
        for &(i, j) in arcs {
            r.set(i, j);
        }
        r
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.cols + j] = true;
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.cols + j]
    }

    /// All arcs in row-major order.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn arc_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&b| !b)
    }

    /// Left-to-right composition; panics if the inner dimensions disagree.
    pub fn compose(&self, other: &Relation) -> Relation {
        assert_eq!(
            self.cols, other.rows,
            "relation composition: inner dimensions disagree"
        );
        let mut out = Relation::new(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    for j in 0..other.cols {
                        if other.get(k, j) {
                            out.set(i, j);
                        }
                    }
                }
            }
        }
        out
    }

    /// Elementwise intersection; panics on shape mismatch.
    pub fn intersect(&self, other: &Relation) -> Relation {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Relation {
            rows: self.rows,
            cols: self.cols,
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a && b)
                .collect(),
        }
    }

    /// `self` composed with itself `exp` times, by repeated squaring.
    ///
    /// `power(0)` is the identity, `power(1)` the relation itself. Square
    /// relations only.
    pub fn power(&self, exp: usize) -> Relation {
        assert!(self.is_square(), "powers need a square relation");
        let mut acc = Relation::identity(self.rows);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base);
            }
        }
        acc
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                write!(f, "{}", if self.get(i, j) { '1' } else { '.' })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
