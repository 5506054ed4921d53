//! Knee benchmark problems, front samplers and dense ground-truth oracles.
//!
//! Decision vectors lie in `[0, 1]^n`. The first one (two for DEB3DK)
//! variables position a point on the front; the rest feed the distance
//! function `g = 1 + 9 * mean(rest)`, which is 1 on the Pareto front.
//!
//! * DEB2DK: `r(x) = 5 + 10 (x - 0.5)^2 + cos(2 K pi x) / K`,
//!   `f = g r (sin(pi x / 2), cos(pi x / 2))`.
//! * DEB3DK: `r = (r1(x1) + r2(x2)) / 2` with
//!   `ri(x) = 5 + 10 (x - 0.5)^2 + 2 cos(2 K pi x) / K`,
//!   `f = g r (sin(a1) sin(a2), sin(a1) cos(a2), cos(a1))`, `ai = pi xi / 2`.
//! * DO2DK: `r(x) = 5 + 10 (x - 0.5)^2 + 2^(s/2) cos(2 K pi x) / K`,
//!   `f1 = g r (sin(pi x / 2^(s+1) + (1 + (2^s - 1) / 2^(s+2)) pi) + 1)`,
//!   `f2 = g r (cos(pi x / 2 + pi) + 1)`.
//! * CKP: a concave quarter circle dented by `K` knees,
//!   `r(x) = 5 + 2 cos(2 K pi x) / K`, `f = g r (sin(pi x / 2), cos(pi x / 2))`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{KneeError, Result};
use crate::objective::{pareto_filter, pareto_filter_flat, TradeoffSet};
use crate::tradeoff::{normalized_utility, UTILITY_TIE};

/// Dense oracle resolution for two-objective fronts (odd, so the centre is
/// on the grid).
pub const DENSE_POINTS_2D: usize = 20_001;
/// Dense oracle grid side for DEB3DK.
pub const DENSE_SIDE_3D: usize = 261;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Do2dk,
    Deb2dk,
    Deb3dk,
    Ckp,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Do2dk, Family::Deb2dk, Family::Deb3dk, Family::Ckp];

    pub fn objectives(self) -> usize {
        match self {
            Family::Deb3dk => 3,
            _ => 2,
        }
    }

    /// Number of decision variables that move along the front.
    pub fn position_variables(self) -> usize {
        self.objectives() - 1
    }

    /// Sample count used when none is given.
    pub fn default_samples(self) -> usize {
        match self {
            Family::Deb3dk => 676,
            _ => 200,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Do2dk => "do2dk",
            Family::Deb2dk => "deb2dk",
            Family::Deb3dk => "deb3dk",
            Family::Ckp => "ckp",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = KneeError;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| KneeError::param("family", format!("unknown family `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchmarkSpec {
    pub family: Family,
    pub m: usize,
    /// Knee-count parameter.
    pub k: u32,
    /// Skew, DO2DK only.
    pub s: u32,
    pub n: usize,
}

impl BenchmarkSpec {
    pub fn new(family: Family, k: u32, n: usize) -> Self {
        BenchmarkSpec {
            family,
            m: family.objectives(),
            k,
            s: 0,
            n,
        }
    }

    pub fn with_skew(mut self, s: u32) -> Self {
        self.s = s;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.m != self.family.objectives() {
            return Err(KneeError::Unsupported {
                method: self.family.name(),
                requirement: format!("m = {}, got {}", self.family.objectives(), self.m),
            });
        }
        if self.k == 0 {
            return Err(KneeError::param("k", "must be at least 1"));
        }
        if self.n == 0 {
            return Err(KneeError::param("n", "must be at least 1"));
        }
        if self.s != 0 && self.family != Family::Do2dk {
            return Err(KneeError::param("s", "skew applies to do2dk only"));
        }
        if self.s > 16 {
            return Err(KneeError::param("s", "must be at most 16"));
        }
        Ok(())
    }

    /// Objective vector of decision vector `x`.
    pub fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        let pos = self.family.position_variables();
        if x.len() < pos {
            return Err(KneeError::DimensionMismatch {
                expected: pos,
                found: x.len(),
            });
        }
        if let Some(i) = x.iter().position(|v| !v.is_finite()) {
            return Err(KneeError::NonFinite { row: 0, column: i });
        }
        let rest = &x[pos..];
        let g = if rest.is_empty() {
            1.0
        } else {
            1.0 + 9.0 * rest.iter().sum::<f64>() / rest.len() as f64
        };
        let mut f = self.front_point(&x[..pos]);
        for v in &mut f {
            *v *= g;
        }
        Ok(f)
    }

    /// Point on the Pareto front (`g = 1`) at position parameters `t`.
    pub fn front_point(&self, t: &[f64]) -> Vec<f64> {
        let k = self.k as f64;
        let bump = |x: f64, amp: f64| 5.0 + 10.0 * (x - 0.5).powi(2) + amp * (2.0 * k * PI * x).cos() / k;
        match self.family {
            Family::Deb2dk => {
                let r = bump(t[0], 1.0);
                let a = FRAC_PI_2 * t[0];
                vec![r * a.sin(), r * a.cos()]
            }
            Family::Deb3dk => {
                let r = (bump(t[0], 2.0) + bump(t[1], 2.0)) / 2.0;
                let (a1, a2) = (FRAC_PI_2 * t[0], FRAC_PI_2 * t[1]);
                vec![r * a1.sin() * a2.sin(), r * a1.sin() * a2.cos(), r * a1.cos()]
            }
            Family::Do2dk => {
                let s = self.s as f64;
                let r = bump(t[0], 2f64.powf(s / 2.0));
                let shift = (1.0 + (2f64.powf(s) - 1.0) / 2f64.powf(s + 2.0)) * PI;
                let f1 = r * ((PI * t[0] / 2f64.powf(s + 1.0) + shift).sin() + 1.0);
                let f2 = r * ((FRAC_PI_2 * t[0] + PI).cos() + 1.0);
                vec![f1, f2]
            }
            Family::Ckp => {
                let r = 5.0 + 2.0 * (2.0 * k * PI * t[0]).cos() / k;
                let a = FRAC_PI_2 * t[0];
                vec![r * a.sin(), r * a.cos()]
            }
        }
    }
}

fn grid(n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5];
    }
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

/// Parameter intervals of a curve whose points survive Pareto filtering on a
/// dense grid.
fn kept_intervals(spec: &BenchmarkSpec) -> Vec<(f64, f64)> {
    let xs = grid(DENSE_POINTS_2D);
    let values: Vec<f64> = xs.iter().flat_map(|&x| spec.front_point(&[x])).collect();
    let kept = pareto_filter_flat(2, &values);
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut prev: Option<usize> = None;
    for &i in &kept {
        match (prev, out.last_mut()) {
            (Some(p), Some(last)) if p + 1 == i => last.1 = xs[i],
            _ => out.push((xs[i], xs[i])),
        }
        prev = Some(i);
    }
    out
}

/// `n` points spread evenly in parameter over the non-dominated part of the
/// front. DEB3DK uses a `floor(sqrt(n))`-sided parameter grid and keeps its
/// non-dominated members, so it may return fewer than `n` points.
pub fn sample_front(spec: &BenchmarkSpec) -> Result<TradeoffSet> {
    spec.validate()?;
    let rows: Vec<Vec<f64>> = if spec.m == 3 {
        let side = (spec.n as f64).sqrt().floor() as usize;
        let g = grid(side.max(1));
        g.iter()
            .flat_map(|&a| g.iter().map(move |&b| [a, b]))
            .map(|t| spec.front_point(&t))
            .collect()
    } else {
        let intervals = kept_intervals(spec);
        let total: f64 = intervals.iter().map(|(a, b)| b - a).sum();
        let positions: Vec<f64> = if spec.n == 1 {
            vec![total / 2.0]
        } else {
            (0..spec.n).map(|i| total * i as f64 / (spec.n - 1) as f64).collect()
        };
        positions
            .into_iter()
            .map(|pos| spec.front_point(&[locate(&intervals, pos)]))
            .collect()
    };
    let set = TradeoffSet::new(&rows)?;
    let kept = pareto_filter(&set);
    if kept.len() == set.len() {
        Ok(set)
    } else {
        set.subset(&kept)
    }
}

fn locate(intervals: &[(f64, f64)], mut pos: f64) -> f64 {
    for &(a, b) in intervals {
        if pos <= b - a {
            return a + pos;
        }
        pos -= b - a;
    }
    intervals.last().map_or(0.0, |&(_, b)| b)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub knees: Vec<Vec<f64>>,
    /// Largest distance between neighbouring points of the dense grid.
    pub tolerance: f64,
}

/// True knees found on a dense grid: interior front points whose trade-off
/// utility against every grid neighbour is non-positive. The result does not
/// depend on `spec.n`.
pub fn ground_truth(spec: &BenchmarkSpec) -> Result<GroundTruth> {
    spec.validate()?;
    if spec.m == 3 {
        truth_3d(spec)
    } else {
        truth_2d(spec)
    }
}

fn truth_2d(spec: &BenchmarkSpec) -> Result<GroundTruth> {
    let xs = grid(DENSE_POINTS_2D);
    let values: Vec<f64> = xs.iter().flat_map(|&x| spec.front_point(&[x])).collect();
    let kept = pareto_filter_flat(2, &values);
    let mut front = TradeoffSet::new(&kept.iter().map(|&i| &values[2 * i..2 * i + 2]).collect::<Vec<_>>())?;
    let mut order: Vec<usize> = (0..front.len()).collect();
    order.sort_by(|&a, &b| front.point(a)[0].total_cmp(&front.point(b)[0]));
    let dense: Vec<usize> = order.iter().map(|&o| kept[o]).collect();
    front = front.subset(&order)?;
    let norm = front.normalize();

    let mut tolerance: f64 = 0.0;
    for w in 0..front.len().saturating_sub(1) {
        if dense[w].abs_diff(dense[w + 1]) == 1 {
            tolerance = tolerance.max(dist(front.point(w), front.point(w + 1)));
        }
    }
    let knees = (1..front.len().saturating_sub(1))
        .filter(|&i| {
            [i - 1, i + 1]
                .iter()
                .all(|&j| normalized_utility(norm.point(i), norm.point(j)) <= UTILITY_TIE)
        })
        .map(|i| front.point(i).to_vec())
        .collect();
    Ok(GroundTruth { knees, tolerance })
}

fn truth_3d(spec: &BenchmarkSpec) -> Result<GroundTruth> {
    let side = DENSE_SIDE_3D;
    let g = grid(side);
    let mut values = Vec::with_capacity(side * side * 3);
    for &a in &g {
        for &b in &g {
            values.extend(spec.front_point(&[a, b]));
        }
    }
    let kept = pareto_filter_flat(3, &values);
    let mut slot = vec![usize::MAX; side * side];
    for (pos, &i) in kept.iter().enumerate() {
        slot[i] = pos;
    }
    let front = TradeoffSet::new(&kept.iter().map(|&i| &values[3 * i..3 * i + 3]).collect::<Vec<_>>())?;
    let norm = front.normalize();

    let mut tolerance: f64 = 0.0;
    for r in 0..side {
        for c in 0..side {
            let here = slot[r * side + c];
            if here == usize::MAX {
                continue;
            }
            for (dr, dc) in [(0, 1), (1, 0)] {
                if r + dr < side && c + dc < side {
                    let there = slot[(r + dr) * side + c + dc];
                    if there != usize::MAX {
                        tolerance = tolerance.max(dist(front.point(here), front.point(there)));
                    }
                }
            }
        }
    }
    let mut knees = Vec::new();
    for r in 1..side - 1 {
        for c in 1..side - 1 {
            let here = slot[r * side + c];
            if here == usize::MAX {
                continue;
            }
            let mut interior = true;
            let mut best = true;
            for dr in [-1isize, 0, 1] {
                for dc in [-1isize, 0, 1] {
                    if dr == 0 && dc == 0 {
                        continue;
                    }
                    let nb = slot[(r as isize + dr) as usize * side + (c as isize + dc) as usize];
                    if nb == usize::MAX {
                        interior = false;
                    } else if normalized_utility(norm.point(here), norm.point(nb)) > UTILITY_TIE {
                        best = false;
                    }
                }
            }
            if interior && best {
                knees.push(front.point(here).to_vec());
            }
        }
    }
    Ok(GroundTruth { knees, tolerance })
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Mean spacing of a two-objective sample: polyline length (sorted by `f1`)
/// over the number of gaps. For more objectives, the mean nearest-neighbour
/// distance.
pub fn sample_spacing(set: &TradeoffSet) -> f64 {
    if set.len() < 2 {
        return 0.0;
    }
    if set.dim() == 2 {
        let mut pts: Vec<&[f64]> = set.points().collect();
        pts.sort_by(|a, b| a[0].total_cmp(&b[0]));
        let length: f64 = pts.windows(2).map(|w| dist(w[0], w[1])).sum();
        return length / (pts.len() - 1) as f64;
    }
    let total: f64 = (0..set.len())
        .map(|i| {
            (0..set.len())
                .filter(|&j| j != i)
                .map(|j| dist(set.point(i), set.point(j)))
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    total / set.len() as f64
}
