//! Knee identification quality: mean distance from the identified points to
//! their nearest true knee, in raw objective space.

use crate::error::{KneeError, Result};

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn indicator<A: AsRef<[f64]>, B: AsRef<[f64]>>(found: &[A], truth: &[B]) -> Result<f64> {
    if found.is_empty() {
        return Err(KneeError::Empty("identified knee set"));
    }
    if truth.is_empty() {
        return Err(KneeError::Empty("true knee set"));
    }
    let m = truth[0].as_ref().len();
    for p in found.iter().map(AsRef::as_ref).chain(truth.iter().map(AsRef::as_ref)) {
        if p.len() != m {
            return Err(KneeError::DimensionMismatch {
                expected: m,
                found: p.len(),
            });
        }
    }
    let total: f64 = found
        .iter()
        .map(|p| {
            truth
                .iter()
                .map(|q| distance(p.as_ref(), q.as_ref()))
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    Ok(total / found.len() as f64)
}
