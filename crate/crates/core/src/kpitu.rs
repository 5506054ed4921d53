//! Knee identification by trade-off utility (KPITU).
//!
//! A solution is a knee when no solution in its neighbourhood has a
//! negative utility against it. Knees are returned best first, ordered by
//! their accumulative utility over the knee set.

use log::warn;
use rayon::prelude::*;

use crate::error::{KneeError, Result};
use crate::neighbourhood::{associate, choose_resolution, das_dennis, Adjacency, Neighbourhoods, WeightVectorSet};
use crate::objective::{pareto_filter, NormalizedSet, TradeoffSet, DEGENERATE_RANGE};
use crate::tradeoff::{normalized_utility, UTILITY_TIE};

/// How the lattice resolution `H` is picked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolution {
    /// Largest `H` whose lattice has at most `ceil(N / per_subregion)`
    /// vectors. `per_subregion = 1` gives one vector per solution.
    Auto {
        per_subregion: usize,
    },
    Fixed(usize),
}

/// Which utilities are summed into a knee's accumulative utility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Accumulation {
    /// All other knees.
    #[default]
    KneeSet,
    /// The knee's own neighbourhood.
    Neighbourhood,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KpituConfig {
    pub resolution: Resolution,
    pub adjacency: Adjacency,
    /// Solutions sitting on the edge of the front (at the minimum of some
    /// non-degenerate objective) see a one-sided neighbourhood. When set,
    /// they are only reported if no other solution qualifies.
    pub exclude_boundary: bool,
    pub accumulation: Accumulation,
}

impl Default for KpituConfig {
    fn default() -> Self {
        KpituConfig {
            resolution: Resolution::Auto { per_subregion: 2 },
            adjacency: Adjacency::Lattice,
            exclude_boundary: true,
            accumulation: Accumulation::KneeSet,
        }
    }
}

impl KpituConfig {
    /// One reference vector per solution, angular nearest neighbours, every
    /// solution a candidate.
    pub fn strict() -> Self {
        KpituConfig {
            resolution: Resolution::Auto { per_subregion: 1 },
            adjacency: Adjacency::NearestAngle,
            exclude_boundary: false,
            accumulation: Accumulation::KneeSet,
        }
    }

    pub fn resolution_for(&self, m: usize, n: usize) -> Result<usize> {
        match self.resolution {
            Resolution::Auto { per_subregion: 0 } => Err(KneeError::param("per_subregion", "must be at least 1")),
            Resolution::Auto { per_subregion } => Ok(choose_resolution(m, n.div_ceil(per_subregion))),
            Resolution::Fixed(0) => Err(KneeError::param("resolution", "must be at least 1")),
            Resolution::Fixed(h) => Ok(h),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KneeResult {
    /// Knee indices into the input set, best first.
    pub knees: Vec<usize>,
    /// Accumulative utility of each knee, ascending.
    pub accumulative: Vec<f64>,
    /// Lattice resolution `H` used.
    pub resolution: usize,
    /// Input indices of the non-dominated solutions that were examined;
    /// `neighbourhoods` indexes into this list.
    pub examined: Vec<usize>,
    pub neighbourhoods: Neighbourhoods,
}

pub fn identify(set: &TradeoffSet) -> Result<KneeResult> {
    identify_with(set, &KpituConfig::default())
}

pub fn identify_with(set: &TradeoffSet, config: &KpituConfig) -> Result<KneeResult> {
    run(set, config, &Serial)
}

/// Same result as [`identify`], bit for bit, computed on `workers` threads.
pub fn identify_parallel(set: &TradeoffSet, workers: usize) -> Result<KneeResult> {
    identify_parallel_with(set, &KpituConfig::default(), workers)
}

pub fn identify_parallel_with(set: &TradeoffSet, config: &KpituConfig, workers: usize) -> Result<KneeResult> {
    if workers == 0 {
        return Err(KneeError::param("workers", "must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| KneeError::param("workers", e.to_string()))?;
    pool.install(|| run(set, config, &Parallel))
}

trait Exec {
    fn map<T: Send, F: Fn(usize) -> T + Sync + Send>(&self, n: usize, f: F) -> Vec<T>;
}

struct Serial;
struct Parallel;

impl Exec for Serial {
    fn map<T: Send, F: Fn(usize) -> T + Sync + Send>(&self, n: usize, f: F) -> Vec<T> {
        (0..n).map(f).collect()
    }
}

impl Exec for Parallel {
    fn map<T: Send, F: Fn(usize) -> T + Sync + Send>(&self, n: usize, f: F) -> Vec<T> {
        (0..n).into_par_iter().map(f).collect()
    }
}

fn run<E: Exec>(set: &TradeoffSet, config: &KpituConfig, exec: &E) -> Result<KneeResult> {
    let examined = pareto_filter(set);
    if examined.len() < set.len() {
        warn!(
            "{} dominated solution(s) ignored by knee identification",
            set.len() - examined.len()
        );
    }
    let front = set.subset(&examined)?;
    let norm = front.normalize();
    let n = front.len();
    let m = front.dim();
    let h = config.resolution_for(m, n)?;
    let weights = das_dennis(m, h)?;

    let assignment = exec.map(n, |i| associate(norm.point(i), &weights));
    let nb = Neighbourhoods::from_assignment(assignment, &weights, config.adjacency);

    let boundary = boundary_flags(&front, &norm);
    let is_knee = exec.map(n, |i| passes_local_test(&norm, &nb, i));
    let mut local: Vec<usize> = if config.exclude_boundary {
        (0..n).filter(|&i| is_knee[i] && !boundary[i]).collect()
    } else {
        Vec::new()
    };
    if local.is_empty() {
        local = (0..n).filter(|&i| is_knee[i]).collect();
    }

    let scores = exec.map(local.len(), |a| {
        let i = local[a];
        match config.accumulation {
            Accumulation::KneeSet => accumulate(&norm, i, &local),
            Accumulation::Neighbourhood => accumulate(&norm, i, &nb.psi(i)),
        }
    });
    let (order, accumulative) = order_by_score(&local, scores);
    Ok(KneeResult {
        knees: order.into_iter().map(|i| examined[i]).collect(),
        accumulative,
        resolution: h,
        examined,
        neighbourhoods: nb,
    })
}

/// Local knee test: nothing in the neighbourhood has a lower utility.
fn passes_local_test(norm: &NormalizedSet, nb: &Neighbourhoods, i: usize) -> bool {
    let p = norm.point(i);
    nb.psi(i)
        .into_iter()
        .all(|j| normalized_utility(p, norm.point(j)) <= UTILITY_TIE)
}

/// Solutions attaining the minimum of a non-degenerate objective.
pub fn boundary_flags(set: &TradeoffSet, norm: &NormalizedSet) -> Vec<bool> {
    let live: Vec<usize> = (0..set.dim())
        .filter(|&j| set.nadir()[j] - set.ideal()[j] >= DEGENERATE_RANGE)
        .collect();
    norm.points().map(|p| live.iter().any(|&j| p[j] == 0.0)).collect()
}

fn accumulate(norm: &NormalizedSet, i: usize, others: &[usize]) -> f64 {
    let p = norm.point(i);
    others
        .iter()
        .filter(|&&j| j != i)
        .map(|&j| normalized_utility(p, norm.point(j)))
        .sum()
}

fn order_by_score(indices: &[usize], scores: Vec<f64>) -> (Vec<usize>, Vec<f64>) {
    // Adding zero folds -0.0, which total_cmp would otherwise rank first.
    let mut pairs: Vec<(usize, f64)> = indices
        .iter()
        .copied()
        .zip(scores.into_iter().map(|s| s + 0.0))
        .collect();
    pairs.sort_by(|a, b| a.1.total_cmp(&b.1));
    pairs.into_iter().unzip()
}

/// Orders `knees` by accumulative utility over `knees` itself, best first.
/// Ties keep the given order.
pub fn sort_knees(knees: &[usize], set: &TradeoffSet) -> Result<(Vec<usize>, Vec<f64>)> {
    if knees.is_empty() {
        return Err(KneeError::Empty("knee set"));
    }
    if let Some(&bad) = knees.iter().find(|&&i| i >= set.len()) {
        return Err(KneeError::param("knees", format!("index {bad} out of range")));
    }
    let norm = set.normalize();
    let scores = knees.iter().map(|&i| accumulate(&norm, i, knees)).collect();
    Ok(order_by_score(knees, scores))
}

/// Lattice and neighbourhoods that [`identify_with`] would use on `set`,
/// which must already be mutually non-dominated.
pub fn neighbourhoods_for(set: &TradeoffSet, config: &KpituConfig) -> Result<(WeightVectorSet, Neighbourhoods)> {
    let norm = set.normalize();
    let weights = das_dennis(set.dim(), config.resolution_for(set.dim(), set.len())?)?;
    let nb = Neighbourhoods::build(&norm, &weights, config.adjacency);
    Ok((weights, nb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn triple() -> TradeoffSet {
        TradeoffSet::new(&[[0.0, 1.0], [0.2, 0.2], [1.0, 0.0]]).unwrap()
    }

    #[test]
    fn middle_of_triple_is_the_knee() {
        let fixed = KpituConfig {
            resolution: Resolution::Fixed(2),
            ..KpituConfig::default()
        };
        for cfg in [KpituConfig::default(), KpituConfig::strict(), fixed] {
            let r = identify_with(&triple(), &cfg).unwrap();
            assert_eq!(r.knees, vec![1], "{cfg:?}");
        }
        let r = identify_with(&triple(), &fixed).unwrap();
        assert_eq!(r.neighbourhoods.subregion, vec![0, 1, 2]);
        assert_eq!(r.accumulative, vec![0.0]);
    }

    #[test]
    fn single_point_is_a_knee() {
        let s = TradeoffSet::new(&[[3.0, 4.0]]).unwrap();
        let r = identify(&s).unwrap();
        assert_eq!(r.knees, vec![0]);
        assert_eq!(r.accumulative, vec![0.0]);
    }

    #[test]
    fn dominated_points_are_ignored() {
        let s = TradeoffSet::new(&[[0.0, 1.0], [0.2, 0.2], [1.0, 0.0], [0.5, 0.5]]).unwrap();
        let r = identify(&s).unwrap();
        assert_eq!(r.examined, vec![0, 1, 2]);
        assert_eq!(r.knees, vec![1]);
    }

    #[test]
    fn boundary_fallback_keeps_result_nonempty() {
        // Concave front: the interior never beats its outer neighbour.
        let rows: Vec<[f64; 2]> = (0..21)
            .map(|i| {
                let t = i as f64 / 20.0 * std::f64::consts::FRAC_PI_2;
                [t.sin(), t.cos()]
            })
            .collect();
        let s = TradeoffSet::new(&rows).unwrap();
        let r = identify(&s).unwrap();
        assert_eq!(r.knees, vec![0, 20]);
    }

    #[test]
    fn sort_worked_pair() {
        let s = TradeoffSet::new(&[[0.0, 1.0], [0.2, 0.2], [1.0, 0.0]]).unwrap();
        let (order, acc) = sort_knees(&[0, 1], &s).unwrap();
        assert_eq!(order, vec![1, 0]);
        assert_abs_diff_eq!(acc[0], -0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(acc[1], 0.6, epsilon = 1e-15);
        let (order, acc) = sort_knees(&[2], &s).unwrap();
        assert_eq!((order, acc), (vec![2], vec![0.0]));
        assert_eq!(sort_knees(&[], &s), Err(KneeError::Empty("knee set")));
    }

    #[test]
    fn sort_ties_keep_input_order() {
        let s = TradeoffSet::new(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert_eq!(sort_knees(&[1, 0], &s).unwrap().0, vec![1, 0]);
        assert_eq!(sort_knees(&[0, 1], &s).unwrap().0, vec![0, 1]);
    }

    #[test]
    fn bad_parameters() {
        let cfg = KpituConfig {
            resolution: Resolution::Fixed(0),
            ..KpituConfig::default()
        };
        assert!(identify_with(&triple(), &cfg).is_err());
        assert!(identify_parallel(&triple(), 0).is_err());
    }

    #[test]
    fn parallel_with_more_workers_than_points() {
        let a = identify(&triple()).unwrap();
        let b = identify_parallel(&triple(), 16).unwrap();
        assert_eq!(a, b);
    }

    fn front(m: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
        // Points on a curved simplex surface are mutually non-dominated.
        (
            prop::collection::vec(prop::collection::vec(0.01f64..1.0, m), 2..60),
            0.3f64..3.0,
        )
            .prop_map(|(raw, p)| {
                raw.into_iter()
                    .map(|r| {
                        let s: f64 = r.iter().sum();
                        r.iter().map(|v| (v / s).powf(p)).collect()
                    })
                    .collect()
            })
    }

    proptest! {
        #[test]
        fn knees_pass_the_local_test_and_are_sorted(rows in front(3)) {
            let s = TradeoffSet::new(&rows).unwrap();
            let r = identify(&s).unwrap();
            prop_assert!(!r.knees.is_empty());
            prop_assert!(r.accumulative.windows(2).all(|w| w[0] <= w[1]));
            let norm = s.subset(&r.examined).unwrap().normalize();
            let pos = |orig: usize| r.examined.iter().position(|&e| e == orig).unwrap();
            for &k in &r.knees {
                let i = pos(k);
                for j in r.neighbourhoods.psi(i) {
                    prop_assert!(normalized_utility(norm.point(i), norm.point(j)) <= UTILITY_TIE);
                }
            }
        }

        #[test]
        fn permutation_invariant(rows in front(2), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let s = TradeoffSet::new(&rows).unwrap();
            let mut perm: Vec<usize> = (0..rows.len()).collect();
            perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let shuffled: Vec<Vec<f64>> = perm.iter().map(|&i| rows[i].clone()).collect();
            let a = identify(&s).unwrap();
            let b = identify(&TradeoffSet::new(&shuffled).unwrap()).unwrap();
            let mut pa: Vec<Vec<f64>> = a.knees.iter().map(|&i| rows[i].clone()).collect();
            let mut pb: Vec<Vec<f64>> = b.knees.iter().map(|&i| shuffled[i].clone()).collect();
            pa.sort_by(|x, y| x.partial_cmp(y).unwrap());
            pb.sort_by(|x, y| x.partial_cmp(y).unwrap());
            prop_assert_eq!(pa, pb);
        }
    }
}
