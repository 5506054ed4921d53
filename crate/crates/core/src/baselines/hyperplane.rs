use super::{argmax_ties, argmin_ties};
use crate::objective::{NormalizedSet, TradeoffSet};

fn sums(norm: &NormalizedSet) -> Vec<f64> {
    norm.points().map(|p| p.iter().sum()).collect()
}

/// Largest distance to the hyperplane through the normalized extremes,
/// i.e. argmax of `|sum f - 1|`.
pub fn chim_knees(set: &TradeoffSet) -> Vec<usize> {
    chim_knees_normalized(&set.normalize())
}

pub fn chim_knees_normalized(norm: &NormalizedSet) -> Vec<usize> {
    let d: Vec<f64> = sums(norm).into_iter().map(|s| (s - 1.0).abs()).collect();
    argmax_ties(&d)
}

/// Smallest Manhattan distance to the normalized ideal point.
pub fn mmd_knee(set: &TradeoffSet) -> Vec<usize> {
    mmd_knee_normalized(&set.normalize())
}

pub fn mmd_knee_normalized(norm: &NormalizedSet) -> Vec<usize> {
    argmin_ties(&sums(norm))
}
