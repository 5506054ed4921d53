//! Reference knee identification methods used for comparison.
//!
//! Every method works on normalized objectives and returns the full set of
//! tied optima in ascending index order.

mod cone;
mod emu;
mod hyperplane;
mod mu;
mod reflex;

pub use cone::{cone_knees, ConeParams};
pub use emu::{default_weight_count, emu_knees, EmuResult};
pub use hyperplane::{chim_knees, chim_knees_normalized, mmd_knee, mmd_knee_normalized};
pub use mu::{mu_metric, MuResult};
pub use reflex::{reflex_angle_knee, reflex_angles};

/// Scores within this distance of the optimum are ties.
pub const SCORE_TIE: f64 = 1e-12;

pub(crate) fn argmax_ties(scores: &[f64]) -> Vec<usize> {
    let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (0..scores.len())
        .filter(|&i| scores[i] == best || best - scores[i] <= SCORE_TIE)
        .collect()
}

pub(crate) fn argmin_ties(scores: &[f64]) -> Vec<usize> {
    let best = scores.iter().copied().fold(f64::INFINITY, f64::min);
    (0..scores.len())
        .filter(|&i| scores[i] == best || scores[i] - best <= SCORE_TIE)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kpitu::identify;
    use crate::objective::TradeoffSet;

    #[test]
    fn every_method_agrees_on_the_triple() {
        let s = TradeoffSet::new(&[[0.0, 1.0], [0.2, 0.2], [1.0, 0.0]]).unwrap();
        assert_eq!(identify(&s).unwrap().knees, vec![1]);
        assert_eq!(cone_knees(&s, &ConeParams::default()).unwrap(), vec![1]);
        assert_eq!(emu_knees(&s, Some(5)).unwrap().knees, vec![1]);
        assert_eq!(reflex_angle_knee(&s).unwrap(), vec![1]);
        assert_eq!(chim_knees(&s), vec![1]);
        assert_eq!(mmd_knee(&s), vec![1]);
        assert_eq!(mu_metric(&s).unwrap().knees, vec![1]);
    }

    #[test]
    fn ties_are_collected() {
        assert_eq!(argmax_ties(&[1.0, 3.0, 3.0, 2.0]), vec![1, 2]);
        assert_eq!(argmin_ties(&[1.0, 3.0, 1.0 + 1e-14]), vec![0, 2]);
        assert_eq!(argmax_ties(&[f64::INFINITY, 1.0, f64::INFINITY]), vec![0, 2]);
    }
}
