//! Multivariate exponent sets in graded lexicographic order.
//!
//! Every vector and matrix in the crate is indexed by an [`IndexSet`]: the
//! exponents `α ∈ ℕᵈ` with `|α| ≤ n`, sorted by total degree and then
//! lexicographically (largest leading exponent first). Truncating to a lower
//! degree is therefore a prefix of the ordering.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// An exponent vector `α`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Total degree `|α|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Componentwise sum `α + β`.
    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dim(), other.dim());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `x^α`, by repeated multiplication.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .map(|(&a, &xi)| xi.powi(a as i32))
            .product()
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// `C(d + n, d)`, the number of monomials of degree at most `n` in `d` variables.
pub fn binomial_count(dim: usize, degree: usize) -> usize {
    let mut acc: u128 = 1;
    for k in 1..=dim as u128 {
        acc = acc * (degree as u128 + k) / k;
    }
    acc as usize
}

/// The exponents of degree `≤ n` in `d` variables, graded-lex ordered.
#[derive(Debug, Clone)]
pub struct IndexSet {
    dim: usize,
    degree: usize,
    entries: Vec<MultiIndex>,
    positions: HashMap<MultiIndex, usize>,
    // For entry k > 0: (row of α − e_axis, axis), the parent used by the
    // incremental monomial evaluation.
    parents: Vec<(usize, usize)>,
}

impl IndexSet {
    /// Enumerates `ℕᵈₙ`. Panics if `dim == 0`.
    pub fn enumerate(dim: usize, degree: usize) -> IndexSet {
        assert!(dim >= 1, "index set dimension must be positive");
        let mut entries = Vec::with_capacity(binomial_count(dim, degree));
        for total in 0..=degree as u32 {
            let mut current = vec![0u32; dim];
            push_compositions(total, 0, &mut current, &mut entries);
        }

        let positions: HashMap<MultiIndex, usize> = entries
            .iter()
            .enumerate()
            .map(|(k, a)| (a.clone(), k))
            .collect();

        let mut parents = Vec::with_capacity(entries.len());
        parents.push((0, 0));
        for alpha in entries.iter().skip(1) {
            let axis = alpha
                .exponents()
                .iter()
                .position(|&a| a > 0)
                .expect("nonzero index has a positive exponent");
            let mut parent = alpha.exponents().to_vec();
            parent[axis] -= 1;
            parents.push((positions[&MultiIndex(parent)], axis));
        }

        IndexSet {
            dim,
            degree,
            entries,
            positions,
            parents,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `s(n)`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[MultiIndex] {
        &self.entries
    }

    pub fn get(&self, k: usize) -> &MultiIndex {
        &self.entries[k]
    }

    /// Row of `α`, if `α` belongs to the set.
    pub fn position(&self, alpha: &MultiIndex) -> Option<usize> {
        self.positions.get(alpha).copied()
    }

    /// Number of entries of total degree `≤ degree` (the prefix length).
    pub fn prefix_len(&self, degree: usize) -> usize {
        binomial_count(self.dim, degree.min(self.degree))
    }

    /// `vₙ(x)`. Each monomial is its parent times one coordinate.
    pub fn monomial_vector(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x.len())?;
        let mut out = Vec::with_capacity(self.len());
        out.push(1.0);
        for &(parent, axis) in &self.parents[1..] {
            let value = out[parent] * x[axis];
            out.push(value);
        }
        Ok(out)
    }

    /// Evaluates `∏ᵢ tables[i][αᵢ]` for every entry, given per-axis tables
    /// of length `≥ n + 1`.
    pub fn product_vector(&self, tables: &[Vec<f64>]) -> Vec<f64> {
        debug_assert_eq!(tables.len(), self.dim);
        self.entries
            .iter()
            .map(|alpha| {
                alpha
                    .exponents()
                    .iter()
                    .zip(tables)
                    .map(|(&a, t)| t[a as usize])
                    .product()
            })
            .collect()
    }

    pub(crate) fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got,
            });
        }
        Ok(())
    }
}

impl PartialEq for IndexSet {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.degree == other.degree
    }
}

// Compositions of `remaining` into the coordinates `axis..`, leading
// coordinate largest first.
fn push_compositions(remaining: u32, axis: usize, current: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    let dim = current.len();
    if axis == dim - 1 {
        current[axis] = remaining;
        out.push(MultiIndex(current.clone()));
        current[axis] = 0;
        return;
    }
    for a in (0..=remaining).rev() {
        current[axis] = a;
        push_compositions(remaining - a, axis + 1, current, out);
    }
    current[axis] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn enumerate_counts_and_order() {
        let set = IndexSet::enumerate(2, 3);
        assert_eq!(set.len(), 10);
        assert_eq!(set.get(0), &idx(&[0, 0]));
        assert_eq!(set.get(9), &idx(&[0, 3]));
        assert_eq!(set.get(1), &idx(&[1, 0]));
        assert_eq!(set.get(2), &idx(&[0, 1]));

        let one = IndexSet::enumerate(1, 0);
        assert_eq!(one.entries(), &[idx(&[0])]);

        assert_eq!(IndexSet::enumerate(3, 2).len(), 10);
    }

    #[test]
    fn graded_then_lexicographic() {
        let set = IndexSet::enumerate(3, 4);
        for w in set.entries().windows(2) {
            let (a, b) = (&w[0], &w[1]);
            assert!(a.degree() < b.degree() || (a.degree() == b.degree() && a > b));
        }
    }

    #[test]
    fn positions_round_trip() {
        let set = IndexSet::enumerate(3, 5);
        for (k, a) in set.entries().iter().enumerate() {
            assert_eq!(set.position(a), Some(k));
        }
        assert_eq!(set.position(&idx(&[6, 0, 0])), None);
    }

    #[test]
    fn prefix_is_lower_degree_set() {
        let big = IndexSet::enumerate(2, 6);
        let small = IndexSet::enumerate(2, 3);
        assert_eq!(big.prefix_len(3), small.len());
        assert_eq!(&big.entries()[..small.len()], small.entries());
    }

    #[test]
    fn monomial_vector_examples() {
        let set = IndexSet::enumerate(1, 2);
        assert_eq!(set.monomial_vector(&[2.0]).unwrap(), vec![1.0, 2.0, 4.0]);

        let set = IndexSet::enumerate(2, 1);
        assert_eq!(set.monomial_vector(&[3.0, 5.0]).unwrap(), vec![1.0, 3.0, 5.0]);

        let set = IndexSet::enumerate(3, 3);
        let v = set.monomial_vector(&[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(v[0], 1.0);
        assert!(v[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn monomial_vector_dimension_mismatch() {
        let set = IndexSet::enumerate(2, 2);
        assert_eq!(
            set.monomial_vector(&[1.0]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn monomial_vector_matches_powers() {
        let set = IndexSet::enumerate(3, 4);
        let x = [0.7, -1.3, 2.1];
        let v = set.monomial_vector(&x).unwrap();
        for (k, a) in set.entries().iter().enumerate() {
            let direct = a.eval(&x);
            assert!((v[k] - direct).abs() <= 1e-14 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn binomial_count_small() {
        assert_eq!(binomial_count(1, 5), 6);
        assert_eq!(binomial_count(2, 8), 45);
        assert_eq!(binomial_count(3, 0), 1);
    }
}
