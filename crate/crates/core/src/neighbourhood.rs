//! Simplex-lattice reference vectors and the subregion neighbourhoods built
//! on top of them.
//!
//! The normalized objective space is split into subregions, one per
//! reference vector; each solution belongs to the subregion whose vector
//! makes the smallest acute angle with it. A solution's neighbourhood is
//! every other solution living in its own subregion or in one of the
//! neighbouring subregions.

use std::collections::HashMap;

use crate::error::{KneeError, Result};
use crate::objective::NormalizedSet;

/// Angles closer than this are treated as equal when collecting ties.
pub const ANGLE_TIE: f64 = 1e-12;

/// Reference vectors on the simplex lattice `{w : w_j = c_j / H, sum c_j = H}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVectorSet {
    dim: usize,
    resolution: usize,
    weights: Vec<f64>,
    counts: Vec<u32>,
}

impl WeightVectorSet {
    pub fn len(&self) -> usize {
        self.weights.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn weight(&self, k: usize) -> &[f64] {
        &self.weights[k * self.dim..(k + 1) * self.dim]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, f64> {
        self.weights.chunks_exact(self.dim)
    }

    /// Integer lattice coordinates `c` with `weight(k) = c / H`.
    pub fn lattice_point(&self, k: usize) -> &[u32] {
        &self.counts[k * self.dim..(k + 1) * self.dim]
    }
}

/// Number of lattice points, `C(H + m - 1, m - 1)`, or `None` on overflow.
pub fn das_dennis_count(m: usize, h: usize) -> Option<usize> {
    if m == 0 {
        return None;
    }
    let mut acc: u128 = 1;
    // C(h + k, k) built incrementally stays integral at every step.
    for k in 1..m {
        acc = acc.checked_mul((h + k) as u128)? / k as u128;
    }
    usize::try_from(acc).ok()
}

/// Lattice points in lexicographic order of their coordinates, first
/// component ascending.
pub fn das_dennis(m: usize, h: usize) -> Result<WeightVectorSet> {
    if m < 2 {
        return Err(KneeError::TooFewObjectives(m));
    }
    if h == 0 {
        return Err(KneeError::param("resolution", "must be at least 1"));
    }
    let total = das_dennis_count(m, h)
        .filter(|&c| c <= 50_000_000)
        .ok_or_else(|| KneeError::param("resolution", format!("lattice too large for m={m}, H={h}")))?;
    let mut counts = Vec::with_capacity(total * m);
    let mut current = vec![0u32; m];
    fill(&mut current, 0, h as u32, &mut counts);
    let weights = counts.iter().map(|&c| c as f64 / h as f64).collect();
    Ok(WeightVectorSet {
        dim: m,
        resolution: h,
        weights,
        counts,
    })
}

fn fill(current: &mut [u32], depth: usize, left: u32, out: &mut Vec<u32>) {
    if depth + 1 == current.len() {
        current[depth] = left;
        out.extend_from_slice(current);
        return;
    }
    for c in 0..=left {
        current[depth] = c;
        fill(current, depth + 1, left - c, out);
    }
}

/// Largest `H >= 1` whose lattice has at most `n` points; `1` if even that
/// lattice is larger than `n`.
pub fn choose_resolution(m: usize, n: usize) -> usize {
    let mut h = 1;
    while das_dennis_count(m, h + 1).is_some_and(|c| c <= n) {
        h += 1;
    }
    h
}

/// Acute angle between two non-negative vectors, in radians. Zero vectors
/// make an angle of 0 with everything.
///
/// Uses `2 atan2(|u' - v'|, |u' + v'|)` on the unit vectors, which stays
/// accurate for nearly parallel inputs where `acos` of the cosine does not.
pub fn acute_angle(u: &[f64], v: &[f64]) -> f64 {
    let nu = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv = v.iter().map(|b| b * b).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        return 0.0;
    }
    let mut diff = 0.0;
    let mut sum = 0.0;
    for (a, b) in u.iter().zip(v) {
        let (x, y) = (a / nu, b / nv);
        diff += (x - y) * (x - y);
        sum += (x + y) * (x + y);
    }
    2.0 * diff.sqrt().atan2(sum.sqrt())
}

/// Index of the reference vector with the smallest angle to `point`; the
/// lowest index wins ties.
pub fn associate(point: &[f64], weights: &WeightVectorSet) -> usize {
    let mut best = 0;
    let mut best_angle = f64::INFINITY;
    for (k, w) in weights.iter().enumerate() {
        let a = acute_angle(point, w);
        if a < best_angle {
            best_angle = a;
            best = k;
        }
    }
    best
}

/// How neighbouring subregions are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Adjacency {
    /// Subregions one lattice step away: one unit `1/H` moved between two
    /// components. These are exactly the vectors at the smallest Euclidean
    /// distance, so the relation is symmetric.
    #[default]
    Lattice,
    /// Only the vectors at the smallest angle, ties included.
    NearestAngle,
}

/// Indices (ascending) of the subregions neighbouring `k`, `k` included.
pub fn subregion_neighbours(weights: &WeightVectorSet, k: usize, adjacency: Adjacency) -> Vec<usize> {
    match adjacency {
        Adjacency::Lattice => lattice_neighbours(weights, &lattice_index(weights), k),
        Adjacency::NearestAngle => angle_neighbours(weights, k),
    }
}

fn lattice_index(weights: &WeightVectorSet) -> HashMap<&[u32], usize> {
    (0..weights.len()).map(|k| (weights.lattice_point(k), k)).collect()
}

fn lattice_neighbours(weights: &WeightVectorSet, index: &HashMap<&[u32], usize>, k: usize) -> Vec<usize> {
    let m = weights.dim();
    let mut out = vec![k];
    let mut probe = weights.lattice_point(k).to_vec();
    for from in 0..m {
        if probe[from] == 0 {
            continue;
        }
        for to in 0..m {
            if to == from {
                continue;
            }
            probe[from] -= 1;
            probe[to] += 1;
            if let Some(&j) = index.get(probe.as_slice()) {
                out.push(j);
            }
            probe[from] += 1;
            probe[to] -= 1;
        }
    }
    out.sort_unstable();
    out
}

fn angle_neighbours(weights: &WeightVectorSet, k: usize) -> Vec<usize> {
    let wk = weights.weight(k);
    let angles: Vec<f64> = weights.iter().map(|w| acute_angle(wk, w)).collect();
    let nearest = angles
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != k)
        .map(|(_, &a)| a)
        .fold(f64::INFINITY, f64::min);
    (0..weights.len())
        .filter(|&j| j == k || angles[j] - nearest <= ANGLE_TIE)
        .collect()
}

/// Subregion membership and neighbourhoods of every solution in a set.
#[derive(Debug, Clone, PartialEq)]
pub struct Neighbourhoods {
    /// Subregion of each solution.
    pub subregion: Vec<usize>,
    /// Solutions of each subregion, ascending.
    pub members: Vec<Vec<usize>>,
    /// Neighbouring subregions of each subregion, itself included.
    pub adjacent: Vec<Vec<usize>>,
}

impl Neighbourhoods {
    pub fn build(set: &NormalizedSet, weights: &WeightVectorSet, adjacency: Adjacency) -> Self {
        let subregion: Vec<usize> = set.points().map(|p| associate(p, weights)).collect();
        Self::from_assignment(subregion, weights, adjacency)
    }

    /// Builds the structure from a precomputed subregion assignment.
    pub fn from_assignment(subregion: Vec<usize>, weights: &WeightVectorSet, adjacency: Adjacency) -> Self {
        let mut members = vec![Vec::new(); weights.len()];
        for (i, &k) in subregion.iter().enumerate() {
            members[k].push(i);
        }
        let index = match adjacency {
            Adjacency::Lattice => Some(lattice_index(weights)),
            Adjacency::NearestAngle => None,
        };
        let adjacent = (0..weights.len())
            .map(|k| {
                if members[k].is_empty() {
                    return Vec::new();
                }
                match &index {
                    Some(index) => lattice_neighbours(weights, index, k),
                    None => angle_neighbours(weights, k),
                }
            })
            .collect();
        Neighbourhoods {
            subregion,
            members,
            adjacent,
        }
    }

    /// Every other solution in the subregions adjacent to solution `i`'s,
    /// ascending.
    pub fn psi(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.adjacent[self.subregion[i]]
            .iter()
            .flat_map(|&k| self.members[k].iter().copied())
            .filter(|&j| j != i)
            .collect();
        out.sort_unstable();
        out
    }
}
