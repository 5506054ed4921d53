use super::{argmax_ties, SCORE_TIE};
use crate::error::{KneeError, Result};
use crate::neighbourhood::{choose_resolution, das_dennis};
use crate::objective::TradeoffSet;

#[derive(Debug, Clone, PartialEq)]
pub struct EmuResult {
    pub knees: Vec<usize>,
    /// Expected marginal utility of every solution.
    pub scores: Vec<f64>,
    /// Number of weight vectors actually used.
    pub weights: usize,
}

/// `max(2, ceil(n / 6))`.
pub fn default_weight_count(n: usize) -> usize {
    n.div_ceil(6).max(2)
}

/// Expected marginal utility over a simplex lattice of about `weight_count`
/// weights (default [`default_weight_count`]). Under each weight the unique
/// minimizer of the weighted normalized sum scores the gap to the runner-up.
pub fn emu_knees(set: &TradeoffSet, weight_count: Option<usize>) -> Result<EmuResult> {
    let n = set.len();
    let count = weight_count.unwrap_or_else(|| default_weight_count(n));
    if count < 2 {
        return Err(KneeError::param("weight_count", "must be at least 2"));
    }
    let m = set.dim();
    let lattice = das_dennis(m, choose_resolution(m, count))?;
    let norm = set.normalize();
    let mut scores = vec![0.0; n];
    for w in lattice.iter() {
        let mut best = (usize::MAX, f64::INFINITY);
        let mut second = f64::INFINITY;
        for (i, p) in norm.points().enumerate() {
            let u: f64 = p.iter().zip(w).map(|(a, b)| a * b).sum();
            if u < best.1 {
                second = best.1;
                best = (i, u);
            } else if u < second {
                second = u;
            }
        }
        let gap = second - best.1;
        if gap.is_finite() && gap > SCORE_TIE {
            scores[best.0] += gap;
        }
    }
    Ok(EmuResult {
        knees: argmax_ties(&scores),
        scores,
        weights: lattice.len(),
    })
}
