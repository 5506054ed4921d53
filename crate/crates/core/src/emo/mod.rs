//! NSGA-II whose last-level truncation keeps knee points instead of the
//! least crowded solutions.

mod selection;
mod sorting;
mod variation;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::benchmarks::{ground_truth, BenchmarkSpec, GroundTruth};
use crate::error::{KneeError, Result};
use crate::kpitu::{identify_with, KpituConfig, Resolution};
use crate::metrics::indicator;
use crate::objective::TradeoffSet;

pub use selection::{environmental_selection_crowding, environmental_selection_kpitu, Survivors};
pub use sorting::{crowding_distance, fast_nondominated_sort};
pub use variation::{mutate, sbx, variation, VariationParams};

pub trait Problem: Sync {
    fn bounds(&self) -> Vec<(f64, f64)>;
    fn objectives(&self) -> usize;
    fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>>;
    /// True knees, when known.
    fn truth(&self) -> Option<Result<GroundTruth>> {
        None
    }
}

/// A benchmark family evaluated over `[0, 1]^variables`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchmarkProblem {
    pub spec: BenchmarkSpec,
    pub variables: usize,
}

impl BenchmarkProblem {
    pub fn new(spec: BenchmarkSpec, variables: usize) -> Result<Self> {
        spec.validate()?;
        if variables < spec.family.position_variables() {
            return Err(KneeError::param(
                "variables",
                format!("{} needs at least {}", spec.family, spec.family.position_variables()),
            ));
        }
        Ok(BenchmarkProblem { spec, variables })
    }
}

impl Problem for BenchmarkProblem {
    fn bounds(&self) -> Vec<(f64, f64)> {
        vec![(0.0, 1.0); self.variables]
    }

    fn objectives(&self) -> usize {
        self.spec.m
    }

    fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.spec.evaluate(x)
    }

    fn truth(&self) -> Option<Result<GroundTruth>> {
        Some(ground_truth(&self.spec))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genotype: Vec<f64>,
    pub objectives: Vec<f64>,
    /// Non-domination level within the current population, 0 is best.
    pub level: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SurvivalMode {
    Kpitu(KpituConfig),
    /// Plain NSGA-II crowding distance.
    Crowding,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvoConfig {
    /// Population size, even.
    pub population: usize,
    pub generations: usize,
    pub crossover_prob: f64,
    pub crossover_eta: f64,
    /// Per-gene mutation probability; `None` means `1 / variables`.
    pub mutation_prob: Option<f64>,
    pub mutation_eta: f64,
    pub seed: u64,
    pub survival: SurvivalMode,
    /// Used to pick the knees of the final (and, when tracing, every)
    /// population. The population is deliberately uneven by then, so a
    /// coarser lattice than the selection one keeps sparse stragglers from
    /// counting as knees.
    pub report: KpituConfig,
    /// Record the knee indicator after every generation.
    pub trace: bool,
    /// Threads for objective evaluation; results do not depend on it.
    pub workers: usize,
}

impl Default for EvoConfig {
    fn default() -> Self {
        EvoConfig {
            population: 100,
            generations: 300,
            crossover_prob: 0.9,
            crossover_eta: 20.0,
            mutation_prob: None,
            mutation_eta: 20.0,
            seed: 42,
            survival: SurvivalMode::Kpitu(KpituConfig::strict()),
            report: KpituConfig {
                resolution: Resolution::Auto { per_subregion: 5 },
                ..KpituConfig::default()
            },
            trace: false,
            workers: 1,
        }
    }
}

impl EvoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population < 2 || !self.population.is_multiple_of(2) {
            return Err(KneeError::param("population", "must be even and at least 2"));
        }
        let probs = [
            ("crossover_prob", Some(self.crossover_prob)),
            ("mutation_prob", self.mutation_prob),
        ];
        for (name, p) in probs {
            if let Some(p) = p {
                if !(0.0..=1.0).contains(&p) {
                    return Err(KneeError::param(name, "must lie in [0, 1]"));
                }
            }
        }
        if !(self.crossover_eta >= 0.0 && self.mutation_eta >= 0.0) {
            return Err(KneeError::param("eta", "distribution indices must be non-negative"));
        }
        if self.workers == 0 {
            return Err(KneeError::param("workers", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub population: Vec<Individual>,
    /// Knees of the final first level, as population indices, best first.
    pub knees: Vec<usize>,
    /// Knee indicator after initialization and after each generation, when
    /// tracing.
    pub trace: Vec<f64>,
    /// Knee indicator of the final population, when the truth is known.
    pub final_indicator: Option<f64>,
    pub evaluations: usize,
}

pub fn run<P: Problem>(problem: &P, config: &EvoConfig) -> Result<RunOutcome> {
    config.validate()?;
    let bounds = problem.bounds();
    if bounds.is_empty()
        || bounds
            .iter()
            .any(|(lo, hi)| lo > hi || !lo.is_finite() || !hi.is_finite())
    {
        return Err(KneeError::param("bounds", "need finite bounds with lower <= upper"));
    }
    let truth = problem.truth().transpose()?;
    let params = VariationParams {
        crossover_prob: config.crossover_prob,
        crossover_eta: config.crossover_eta,
        mutation_prob: config.mutation_prob.unwrap_or(1.0 / bounds.len() as f64),
        mutation_eta: config.mutation_eta,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| KneeError::param("workers", e.to_string()))?;
    let evaluate = |genes: Vec<Vec<f64>>| -> Result<Vec<Individual>> {
        let objs: Vec<Result<Vec<f64>>> = if config.workers == 1 {
            genes.iter().map(|g| problem.evaluate(g)).collect()
        } else {
            pool.install(|| genes.par_iter().map(|g| problem.evaluate(g)).collect())
        };
        genes
            .into_iter()
            .zip(objs)
            .map(|(genotype, f)| {
                let objectives = f?;
                if objectives.len() != problem.objectives() || objectives.iter().any(|v| !v.is_finite()) {
                    return Err(KneeError::param("objectives", "evaluation returned an invalid vector"));
                }
                Ok(Individual {
                    genotype,
                    objectives,
                    level: 0,
                })
            })
            .collect()
    };

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let initial: Vec<Vec<f64>> = (0..config.population)
        .map(|_| {
            bounds
                .iter()
                .map(|&(lo, hi)| lo + (hi - lo) * rng.gen::<f64>())
                .collect()
        })
        .collect();
    let mut population = evaluate(initial)?;
    assign_levels(&mut population);
    let mut evaluations = config.population;
    let report_cfg = config.report;
    let mut trace = Vec::new();
    if config.trace {
        if let Some(t) = &truth {
            trace.push(knee_indicator(&population, t, &report_cfg)?);
        }
    }

    for _ in 0..config.generations {
        let pool_genes = mating_pool(&population, &mut rng);
        let offspring = evaluate(variation(&pool_genes, &bounds, &params, &mut rng))?;
        evaluations += offspring.len();
        let mut merged = population;
        merged.extend(offspring);
        let objs: Vec<&[f64]> = merged.iter().map(|i| i.objectives.as_slice()).collect();
        let survivors = match config.survival {
            SurvivalMode::Kpitu(c) => environmental_selection_kpitu(&objs, config.population, &c)?,
            SurvivalMode::Crowding => environmental_selection_crowding(&objs, config.population)?,
        };
        let mut slots: Vec<Option<Individual>> = merged.into_iter().map(Some).collect();
        population = survivors
            .chosen
            .iter()
            .map(|&i| slots[i].take().expect("survivor chosen twice"))
            .collect();
        assign_levels(&mut population);
        if config.trace {
            if let Some(t) = &truth {
                trace.push(knee_indicator(&population, t, &report_cfg)?);
            }
        }
    }

    let knees = first_level_knees(&population, &report_cfg)?;
    let final_indicator = match &truth {
        Some(t) => {
            let pts: Vec<&[f64]> = knees.iter().map(|&i| population[i].objectives.as_slice()).collect();
            Some(indicator(&pts, &t.knees)?)
        }
        None => None,
    };
    Ok(RunOutcome {
        population,
        knees,
        trace,
        final_indicator,
        evaluations,
    })
}

fn assign_levels(pop: &mut [Individual]) {
    let objs: Vec<&[f64]> = pop.iter().map(|i| i.objectives.as_slice()).collect();
    let levels = fast_nondominated_sort(&objs);
    for (l, members) in levels.iter().enumerate() {
        for &i in members {
            pop[i].level = l;
        }
    }
}

/// Binary tournaments on level; ties go to a fair coin.
fn mating_pool<R: Rng>(pop: &[Individual], rng: &mut R) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(pop.len());
    for _ in 0..pop.len() {
        let a = rng.gen_range(0..pop.len());
        let b = rng.gen_range(0..pop.len());
        let pick = match pop[a].level.cmp(&pop[b].level) {
            std::cmp::Ordering::Less => a,
            std::cmp::Ordering::Greater => b,
            std::cmp::Ordering::Equal => {
                if rng.gen::<bool>() {
                    a
                } else {
                    b
                }
            }
        };
        out.push(pop[pick].genotype.clone());
    }
    out
}

fn first_level_knees(pop: &[Individual], config: &KpituConfig) -> Result<Vec<usize>> {
    let first: Vec<usize> = (0..pop.len()).filter(|&i| pop[i].level == 0).collect();
    let rows: Vec<&[f64]> = first.iter().map(|&i| pop[i].objectives.as_slice()).collect();
    let r = identify_with(&TradeoffSet::new(&rows)?, config)?;
    Ok(r.knees.into_iter().map(|k| first[k]).collect())
}

fn knee_indicator(pop: &[Individual], truth: &GroundTruth, config: &KpituConfig) -> Result<f64> {
    let knees = first_level_knees(pop, config)?;
    let pts: Vec<&[f64]> = knees.iter().map(|&i| pop[i].objectives.as_slice()).collect();
    indicator(&pts, &truth.knees)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::Family;

    fn problem() -> BenchmarkProblem {
        BenchmarkProblem::new(BenchmarkSpec::new(Family::Deb2dk, 1, 200), 10).unwrap()
    }

    #[test]
    fn zero_generations_returns_initial_population() {
        let cfg = EvoConfig {
            generations: 0,
            population: 10,
            ..EvoConfig::default()
        };
        let out = run(&problem(), &cfg).unwrap();
        assert_eq!(out.population.len(), 10);
        assert_eq!(out.evaluations, 10);
        assert!(out.population.iter().all(|i| i.genotype.len() == 10));
    }

    #[test]
    fn deterministic_for_a_seed_and_any_worker_count() {
        let cfg = EvoConfig {
            generations: 15,
            population: 20,
            trace: true,
            ..EvoConfig::default()
        };
        let a = run(&problem(), &cfg).unwrap();
        let b = run(&problem(), &EvoConfig { workers: 4, ..cfg }).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.trace.len(), 16);
        let c = run(&problem(), &EvoConfig { seed: 7, ..cfg }).unwrap();
        assert_ne!(a.population, c.population);
    }

    #[test]
    fn crowding_reference_mode_covers_the_front() {
        let cfg = EvoConfig {
            generations: 60,
            population: 40,
            survival: SurvivalMode::Crowding,
            ..EvoConfig::default()
        };
        let out = run(&problem(), &cfg).unwrap();
        assert_eq!(out.population.len(), 40);
        let f1: Vec<f64> = out.population.iter().map(|i| i.objectives[0]).collect();
        let spread =
            f1.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - f1.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(spread > 3.0, "spread {spread}");
    }

    #[test]
    fn default_run_settles_on_the_knee() {
        let out = run(&problem(), &EvoConfig::default()).unwrap();
        assert_eq!(out.evaluations, 100 * 301);
        let ind = out.final_indicator.unwrap();
        assert!(ind < 1e-2, "final indicator {ind}");
    }

    #[test]
    fn invalid_configs() {
        for cfg in [
            EvoConfig {
                population: 7,
                ..EvoConfig::default()
            },
            EvoConfig {
                crossover_prob: 1.5,
                ..EvoConfig::default()
            },
            EvoConfig {
                mutation_prob: Some(-0.1),
                ..EvoConfig::default()
            },
            EvoConfig {
                workers: 0,
                ..EvoConfig::default()
            },
        ] {
            assert!(run(&problem(), &cfg).is_err());
        }
        assert!(BenchmarkProblem::new(BenchmarkSpec::new(Family::Deb3dk, 1, 676), 1).is_err());
    }
}
