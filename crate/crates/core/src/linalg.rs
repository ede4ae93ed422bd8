//! Exact Gaussian elimination over a [`Scalar`] field.

use std::collections::BTreeMap;
use std::ops::Bound;

use crate::exterior::{Element, Monomial};
use crate::scalar::Scalar;

/// Row-echelon basis of a subspace of sparse vectors indexed by `K`.
///
/// Each stored row is keyed by its pivot, the smallest key with a nonzero
/// entry, and is scaled so the pivot entry is one.
#[derive(Debug, Clone)]
pub struct EchelonBasis<K, S> {
    rows: BTreeMap<K, BTreeMap<K, S>>,
}

impl<K: Ord + Clone, S: Scalar> Default for EchelonBasis<K, S> {
    fn default() -> Self {
        Self { rows: BTreeMap::new() }
    }
}

impl<K: Ord + Clone, S: Scalar> EchelonBasis<K, S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against every stored pivot.
    pub fn reduce(&self, mut v: BTreeMap<K, S>) -> BTreeMap<K, S> {
        v.retain(|_, c| !c.is_zero());
        let mut cursor: Option<K> = None;
        loop {
            let lower = match &cursor {
                Some(k) => Bound::Excluded(k.clone()),
                None => Bound::Unbounded,
            };
            let next = v
                .range((lower, Bound::Unbounded))
                .find(|(k, _)| self.rows.contains_key(*k))
                .map(|(k, c)| (k.clone(), c.clone()));
            let Some((pivot, factor)) = next else {
                return v;
            };
            for (k, c) in &self.rows[&pivot] {
                let entry = v.entry(k.clone()).or_insert_with(S::zero);
                *entry = entry.clone() - factor.clone() * c.clone();
                if entry.is_zero() {
                    v.remove(k);
                }
            }
            cursor = Some(pivot);
        }
    }

    /// Adds `v` to the basis; returns `false` when it was already in the span.
    pub fn insert(&mut self, v: BTreeMap<K, S>) -> bool {
        let reduced = self.reduce(v);
        let Some((pivot, lead)) = reduced.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let row = reduced.into_iter().map(|(k, c)| (k, c / lead.clone())).collect();
        self.rows.insert(pivot, row);
        true
    }

    pub fn contains(&self, v: BTreeMap<K, S>) -> bool {
        self.reduce(v).is_empty()
    }
}

pub(crate) fn coordinates<S: Scalar>(e: &Element<S>) -> BTreeMap<Monomial, S> {
    e.terms().iter().cloned().collect()
}

/// Rank of a family of elements.
pub fn rank<S: Scalar>(vs: &[Element<S>]) -> usize {
    let mut basis = EchelonBasis::new();
    for v in vs {
        basis.insert(coordinates(v));
    }
    basis.rank()
}

/// Whether `vs` is linearly independent over the scalar field.
pub fn is_independent<S: Scalar>(vs: &[Element<S>]) -> bool {
    let mut basis = EchelonBasis::new();
    vs.iter().all(|v| basis.insert(coordinates(v)))
}

/// Whether two families span the same subspace.
pub fn same_span<S: Scalar>(a: &[Element<S>], b: &[Element<S>]) -> bool {
    let ra = rank(a);
    let rb = rank(b);
    let joint: Vec<_> = a.iter().chain(b).cloned().collect();
    ra == rb && rank(&joint) == ra
}

/// Basis of `{x : A x = 0}` for a dense matrix with `ncols` columns.
///
/// One vector per free column, each scaled so its first nonzero entry is one.
pub fn null_space<S: Scalar>(mut rows: Vec<Vec<S>>, ncols: usize) -> Vec<Vec<S>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let lead = rows[r][col].clone();
        for x in rows[r].iter_mut() {
            *x = x.clone() / lead.clone();
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = x.clone() - factor.clone() * p.clone();
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![S::zero(); ncols];
        v[free] = S::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -rows[i][free].clone();
        }
        if let Some(lead) = v.iter().find(|x| !x.is_zero()).cloned() {
            for x in v.iter_mut() {
                *x = x.clone() / lead.clone();
            }
        }
        basis.push(v);
    }
    basis
}
