use std::f64::consts::TAU;

use super::argmax_ties;
use crate::error::{KneeError, Result};
use crate::objective::TradeoffSet;

/// Angle at every interior point of the front polyline (sorted by `f1`),
/// on the side facing away from the ideal point; reflex when the corner
/// bulges toward the ideal. Returned as `(index, angle)` in polyline order.
pub fn reflex_angles(set: &TradeoffSet) -> Result<Vec<(usize, f64)>> {
    if set.dim() != 2 {
        return Err(KneeError::Unsupported {
            method: "reflex angle",
            requirement: format!("exactly 2 objectives, got {}", set.dim()),
        });
    }
    if set.len() < 3 {
        return Err(KneeError::Unsupported {
            method: "reflex angle",
            requirement: format!("at least 3 solutions, got {}", set.len()),
        });
    }
    let norm = set.normalize();
    let mut order: Vec<usize> = (0..set.len()).collect();
    order.sort_by(|&a, &b| {
        let (p, q) = (norm.point(a), norm.point(b));
        p[0].total_cmp(&q[0]).then(q[1].total_cmp(&p[1])).then(a.cmp(&b))
    });
    Ok(order
        .windows(3)
        .map(|w| {
            let (l, p, r) = (norm.point(w[0]), norm.point(w[1]), norm.point(w[2]));
            let u = [l[0] - p[0], l[1] - p[1]];
            let v = [r[0] - p[0], r[1] - p[1]];
            let cross = u[0] * v[1] - u[1] * v[0];
            let inner = cross.atan2(u[0] * v[0] + u[1] * v[1]).abs();
            // Negative cross product: the corner bends toward the ideal point.
            let angle = if cross < 0.0 { TAU - inner } else { inner };
            (w[1], angle)
        })
        .collect())
}

/// Interior solutions with the largest reflex angle.
pub fn reflex_angle_knee(set: &TradeoffSet) -> Result<Vec<usize>> {
    let angles = reflex_angles(set)?;
    let values: Vec<f64> = angles.iter().map(|&(_, a)| a).collect();
    let mut knees: Vec<usize> = argmax_ties(&values).into_iter().map(|k| angles[k].0).collect();
    knees.sort_unstable();
    Ok(knees)
}
