use crate::error::{KneeError, Result};
use crate::kpitu::{neighbourhoods_for, KpituConfig};
use crate::objective::TradeoffSet;

use super::SCORE_TIE;

#[derive(Debug, Clone, PartialEq)]
pub struct MuResult {
    /// Least improvement per unit deterioration of each solution; infinite
    /// when no partner trades off against it.
    pub values: Vec<f64>,
    /// Solutions whose value is a local maximum over their neighbourhood.
    pub knees: Vec<usize>,
}

/// Improvement of `a` over `b` divided by its deterioration, on normalized
/// values. `None` when `a` loses nothing against `b`.
fn ratio(a: &[f64], b: &[f64]) -> Option<f64> {
    let mut better = 0.0;
    let mut worse = 0.0;
    for (x, y) in a.iter().zip(b) {
        if x < y {
            better += y - x;
        } else {
            worse += x - y;
        }
    }
    (worse > 0.0).then(|| better / worse)
}

/// Neighbourhoods come from the default KPITU lattice, so the two methods
/// are compared on the same local structure.
pub fn mu_metric(set: &TradeoffSet) -> Result<MuResult> {
    if set.len() < 2 {
        return Err(KneeError::Unsupported {
            method: "mu metric",
            requirement: "at least 2 solutions".into(),
        });
    }
    let norm = set.normalize();
    let values: Vec<f64> = (0..set.len())
        .map(|i| {
            (0..set.len())
                .filter(|&j| j != i)
                .filter_map(|j| ratio(norm.point(i), norm.point(j)))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let (_, nb) = neighbourhoods_for(set, &KpituConfig::default())?;
    let knees = (0..set.len())
        .filter(|&i| {
            nb.psi(i)
                .into_iter()
                .all(|j| values[i] >= values[j] || values[j] - values[i] <= SCORE_TIE)
        })
        .collect();
    Ok(MuResult { values, knees })
}
