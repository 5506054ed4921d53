use crate::error::{KneeError, Result};
use crate::objective::{pareto_filter_flat, TradeoffSet};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeParams {
    /// Dominance angle in degrees, strictly between 90 and 180.
    pub phi: f64,
}

impl Default for ConeParams {
    fn default() -> Self {
        ConeParams { phi: 135.0 }
    }
}

impl ConeParams {
    /// Off-diagonal entry `tan((phi - 90) / 2)` of the cone matrix.
    pub fn slope(&self) -> Result<f64> {
        if !(self.phi > 90.0 && self.phi < 180.0) {
            return Err(KneeError::param("phi", format!("{} is outside (90, 180)", self.phi)));
        }
        Ok(((self.phi - 90.0) / 2.0).to_radians().tan())
    }
}

/// Solutions not dominated once every normalized vector `f` is mapped to
/// `f_j + a * sum_{k != j} f_k`.
pub fn cone_knees(set: &TradeoffSet, params: &ConeParams) -> Result<Vec<usize>> {
    let a = params.slope()?;
    let m = set.dim();
    let mut mapped = Vec::with_capacity(set.len() * m);
    for p in set.normalize().points() {
        let total: f64 = p.iter().sum();
        mapped.extend(p.iter().map(|&v| v + a * (total - v)));
    }
    Ok(pareto_filter_flat(m, &mapped))
}
