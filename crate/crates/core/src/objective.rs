//! Objective vectors, trade-off sets and normalization.
//!
//! All objectives are minimized. A [`TradeoffSet`] stores its points in a
//! flat row-major buffer and caches the ideal and nadir points used for
//! normalization.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::{KneeError, Result};

/// Objective ranges below this are treated as degenerate.
pub const DEGENERATE_RANGE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    Dominates,
    DominatedBy,
    NonDominated,
}

/// Pareto dominance of `a` over `b` (minimization).
pub fn dominance(a: &[f64], b: &[f64]) -> Dominance {
    let mut better = false;
    let mut worse = false;
    for (x, y) in a.iter().zip(b) {
        if x < y {
            better = true;
        } else if x > y {
            worse = true;
        }
        if better && worse {
            return Dominance::NonDominated;
        }
    }
    match (better, worse) {
        (true, false) => Dominance::Dominates,
        (false, true) => Dominance::DominatedBy,
        _ => Dominance::NonDominated,
    }
}

pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    dominance(a, b) == Dominance::Dominates
}

#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffSet {
    dim: usize,
    values: Vec<f64>,
    ideal: Vec<f64>,
    nadir: Vec<f64>,
}

impl TradeoffSet {
    pub fn new<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let first = rows.first().ok_or(KneeError::Empty("trade-off set"))?;
        let dim = first.as_ref().len();
        let mut values = Vec::with_capacity(rows.len() * dim);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(KneeError::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            if i == 0 && dim < 2 {
                return Err(KneeError::TooFewObjectives(dim));
            }
            values.extend_from_slice(row);
        }
        Self::from_flat(dim, values)
    }

    pub fn from_flat(dim: usize, values: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(KneeError::TooFewObjectives(dim));
        }
        if values.is_empty() {
            return Err(KneeError::Empty("trade-off set"));
        }
        if !values.len().is_multiple_of(dim) {
            return Err(KneeError::DimensionMismatch {
                expected: dim,
                found: values.len() % dim,
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(KneeError::NonFinite {
                row: pos / dim,
                column: pos % dim,
            });
        }
        let mut ideal = values[..dim].to_vec();
        let mut nadir = ideal.clone();
        for row in values.chunks_exact(dim) {
            for j in 0..dim {
                ideal[j] = ideal[j].min(row[j]);
                nadir[j] = nadir[j].max(row[j]);
            }
        }
        Ok(TradeoffSet {
            dim,
            values,
            ideal,
            nadir,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> std::slice::ChunksExact<'_, f64> {
        self.values.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.values
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.points().map(<[f64]>::to_vec).collect()
    }

    pub fn ideal(&self) -> &[f64] {
        &self.ideal
    }

    pub fn nadir(&self) -> &[f64] {
        &self.nadir
    }

    /// Per-objective `nadir - ideal`, with degenerate ranges replaced by 1.
    pub fn ranges(&self) -> Vec<f64> {
        self.ideal
            .iter()
            .zip(&self.nadir)
            .map(|(lo, hi)| effective_range(hi - lo))
            .collect()
    }

    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let mut values = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            values.extend_from_slice(self.point(i));
        }
        Self::from_flat(self.dim, values)
    }

    pub fn normalize(&self) -> NormalizedSet {
        let mut values = Vec::with_capacity(self.values.len());
        for row in self.points() {
            for ((v, lo), hi) in row.iter().zip(&self.ideal).zip(&self.nadir) {
                let span = hi - lo;
                values.push(if span < DEGENERATE_RANGE { 0.0 } else { (v - lo) / span });
            }
        }
        NormalizedSet { dim: self.dim, values }
    }
}

pub(crate) fn effective_range(span: f64) -> f64 {
    if span < DEGENERATE_RANGE {
        1.0
    } else {
        span
    }
}

/// Points mapped into the unit hypercube by the set's own ideal and nadir.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedSet {
    dim: usize,
    values: Vec<f64>,
}

impl NormalizedSet {
    /// Wraps points that the caller has already normalized.
    pub fn assume_normalized<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let set = TradeoffSet::new(rows)?;
        Ok(NormalizedSet {
            dim: set.dim,
            values: set.values,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> std::slice::ChunksExact<'_, f64> {
        self.values.chunks_exact(self.dim)
    }
}

/// Indices (ascending) of the points not dominated by any other point.
/// Exact duplicates do not dominate each other.
pub fn pareto_filter(set: &TradeoffSet) -> Vec<usize> {
    pareto_filter_flat(set.dim(), set.as_flat())
}

pub(crate) fn pareto_filter_flat(dim: usize, values: &[f64]) -> Vec<usize> {
    let n = values.len() / dim;
    let row = |i: usize| &values[i * dim..(i + 1) * dim];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| lex_cmp(row(a), row(b)).then(a.cmp(&b)));

    let mut keep = vec![false; n];
    match dim {
        2 => {
            // Sweep in lexicographic order; a point survives if its f2 beats
            // every earlier distinct point.
            let mut best = f64::INFINITY;
            let mut prev: Option<usize> = None;
            for &i in &order {
                let p = row(i);
                if let Some(q) = prev {
                    if row(q) == p {
                        keep[i] = keep[q];
                        continue;
                    }
                }
                keep[i] = p[1] < best;
                best = best.min(p[1]);
                prev = Some(i);
            }
        }
        3 => {
            // Staircase over (f2 -> min f3) among earlier points.
            let mut stairs: BTreeMap<OrdF64, f64> = BTreeMap::new();
            let mut prev: Option<usize> = None;
            for &i in &order {
                let p = row(i);
                if let Some(q) = prev {
                    if row(q) == p {
                        keep[i] = keep[q];
                        continue;
                    }
                }
                prev = Some(i);
                let dominated = stairs
                    .range(..=OrdF64(p[1] + 0.0))
                    .next_back()
                    .is_some_and(|(_, &f3)| f3 <= p[2]);
                if dominated {
                    continue;
                }
                keep[i] = true;
                let stale: Vec<OrdF64> = stairs
                    .range(OrdF64(p[1] + 0.0)..)
                    .take_while(|(_, &f3)| f3 >= p[2])
                    .map(|(k, _)| *k)
                    .collect();
                for k in stale {
                    stairs.remove(&k);
                }
                stairs.insert(OrdF64(p[1] + 0.0), p[2]);
            }
        }
        _ => {
            // A dominator always precedes its victim lexicographically, so
            // comparing against the survivors so far is enough.
            let mut archive: Vec<usize> = Vec::new();
            for &i in &order {
                let p = row(i);
                if !archive.iter().any(|&a| dominates(row(a), p)) {
                    keep[i] = true;
                    archive.push(i);
                }
            }
        }
    }
    (0..n).filter(|&i| keep[i]).collect()
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        // Adding 0.0 folds -0.0 into 0.0.
        match (x + 0.0).total_cmp(&(y + 0.0)) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct OrdF64(f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalize_maps_to_unit_box() {
        let s = TradeoffSet::new(&[[0.0, 10.0], [2.0, 5.0], [4.0, 0.0]]).unwrap();
        let n = s.normalize();
        let rows: Vec<&[f64]> = n.points().collect();
        assert_eq!(rows, vec![&[0.0, 1.0][..], &[0.5, 0.5], &[1.0, 0.0]]);
    }

    #[test]
    fn degenerate_objective_normalizes_to_zero() {
        let s = TradeoffSet::new(&[[1.0, 3.0], [2.0, 3.0]]).unwrap();
        let n = s.normalize();
        assert_eq!(n.point(0), &[0.0, 0.0]);
        assert_eq!(n.point(1), &[1.0, 0.0]);
        assert_eq!(s.ranges(), vec![1.0, 1.0]);
    }

    #[test]
    fn rejects_bad_input() {
        let empty: [[f64; 2]; 0] = [];
        assert_eq!(TradeoffSet::new(&empty), Err(KneeError::Empty("trade-off set")));
        assert_eq!(TradeoffSet::new(&[vec![1.0]]), Err(KneeError::TooFewObjectives(1)));
        assert_eq!(
            TradeoffSet::new(&[vec![1.0, 2.0], vec![1.0]]),
            Err(KneeError::DimensionMismatch { expected: 2, found: 1 })
        );
        assert_eq!(
            TradeoffSet::new(&[[1.0, 2.0], [f64::NAN, 0.0]]),
            Err(KneeError::NonFinite { row: 1, column: 0 })
        );
    }

    #[test]
    fn dominance_cases() {
        assert_eq!(dominance(&[0.0, 0.0], &[1.0, 1.0]), Dominance::Dominates);
        assert_eq!(dominance(&[1.0, 1.0], &[0.0, 1.0]), Dominance::DominatedBy);
        assert_eq!(dominance(&[0.0, 1.0], &[1.0, 0.0]), Dominance::NonDominated);
        assert_eq!(dominance(&[1.0, 1.0], &[1.0, 1.0]), Dominance::NonDominated);
    }

    #[test]
    fn filter_small_cases() {
        let s = TradeoffSet::new(&[[0.0, 0.0], [1.0, 1.0], [0.5, 2.0], [0.0, 0.0]]).unwrap();
        assert_eq!(pareto_filter(&s), vec![0, 3]);
        let s = TradeoffSet::new(&[[1.0, 0.0, 1.0], [0.0, 1.0, 1.0], [1.0, 1.0, 1.0]]).unwrap();
        assert_eq!(pareto_filter(&s), vec![0, 1]);
    }

    fn naive_filter(rows: &[Vec<f64>]) -> Vec<usize> {
        (0..rows.len())
            .filter(|&i| !rows.iter().any(|q| dominates(q, &rows[i])))
            .collect()
    }

    proptest! {
        #[test]
        fn filter_matches_naive(
            m in 2usize..5,
            raw in prop::collection::vec(prop::collection::vec(0u8..6, 4), 1..60),
        ) {
            // Small integer grid so that ties and duplicates are common.
            let rows: Vec<Vec<f64>> = raw.iter().map(|r| r[..m].iter().map(|&v| v as f64).collect()).collect();
            let s = TradeoffSet::new(&rows).unwrap();
            prop_assert_eq!(pareto_filter(&s), naive_filter(&rows));
        }

        #[test]
        fn normalized_values_in_unit_box(
            rows in prop::collection::vec(prop::collection::vec(-1e3f64..1e3, 3), 1..40),
        ) {
            let s = TradeoffSet::new(&rows).unwrap();
            for p in s.normalize().points() {
                for &v in p {
                    prop_assert!((0.0..=1.0).contains(&v));
                }
            }
        }
    }
}
