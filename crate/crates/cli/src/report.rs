use std::collections::BTreeMap;

use kneekit::emo::{BenchmarkProblem, EvoConfig, RunOutcome, SurvivalMode};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct RunReport {
    pub format_version: u32,
    pub method: &'static str,
    pub input_sha256: String,
    pub points: usize,
    pub objectives: usize,
    pub params: BTreeMap<&'static str, f64>,
    pub knees: Vec<usize>,
    pub knee_points: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accumulative: Option<Vec<f64>>,
    /// Per-solution scores for methods that rank the whole set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scores: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<f64>,
}

impl RunReport {
    pub fn new(method: &'static str, input: &[u8]) -> Self {
        RunReport {
            format_version: FORMAT_VERSION,
            method,
            input_sha256: hex_digest(input),
            points: 0,
            objectives: 0,
            params: BTreeMap::new(),
            knees: Vec::new(),
            knee_points: Vec::new(),
            accumulative: None,
            scores: None,
            wall_clock_ms: None,
        }
    }

    pub fn param(&mut self, name: &'static str, value: f64) {
        self.params.insert(name, value);
    }
}

#[derive(Serialize)]
pub struct EvolveManifest {
    pub format_version: u32,
    pub problem: ProblemInfo,
    pub config: ConfigInfo,
    pub evaluations: usize,
    pub final_indicator: Option<f64>,
    pub knees: Vec<usize>,
    pub knee_points: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<f64>,
}

#[derive(Serialize)]
pub struct ProblemInfo {
    pub family: &'static str,
    pub objectives: usize,
    pub k: u32,
    pub s: u32,
    pub variables: usize,
}

// Worker count is left out on purpose: it never changes results.
#[derive(Serialize)]
pub struct ConfigInfo {
    pub population: usize,
    pub generations: usize,
    pub seed: u64,
    pub crossover_prob: f64,
    pub crossover_eta: f64,
    pub mutation_prob: f64,
    pub mutation_eta: f64,
    pub survival: &'static str,
}

impl EvolveManifest {
    pub fn new(problem: &BenchmarkProblem, config: &EvoConfig, outcome: &RunOutcome) -> Self {
        EvolveManifest {
            format_version: FORMAT_VERSION,
            problem: ProblemInfo {
                family: problem.spec.family.name(),
                objectives: problem.spec.m,
                k: problem.spec.k,
                s: problem.spec.s,
                variables: problem.variables,
            },
            config: ConfigInfo {
                population: config.population,
                generations: config.generations,
                seed: config.seed,
                crossover_prob: config.crossover_prob,
                crossover_eta: config.crossover_eta,
                mutation_prob: config.mutation_prob.unwrap_or(1.0 / problem.variables as f64),
                mutation_eta: config.mutation_eta,
                survival: match config.survival {
                    SurvivalMode::Kpitu(_) => "kpitu",
                    SurvivalMode::Crowding => "crowding",
                },
            },
            evaluations: outcome.evaluations,
            final_indicator: outcome.final_indicator,
            knees: outcome.knees.clone(),
            knee_points: outcome
                .knees
                .iter()
                .map(|&i| outcome.population[i].objectives.clone())
                .collect(),
            trace: config.trace.then(|| outcome.trace.clone()),
            wall_clock_ms: None,
        }
    }
}

fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Pretty JSON with keys sorted at every level, newline terminated.
pub fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    // serde_json::Value keeps object keys in a BTreeMap.
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

/// Six significant digits in E-notation with an explicit exponent sign,
/// e.g. `7.071068E-1` or `0.000000E+0`.
pub fn format_indicator(value: f64) -> String {
    let s = format!("{value:.6E}");
    match s.split_once('E') {
        Some((mantissa, exp)) if !exp.starts_with('-') => format!("{mantissa}E+{exp}"),
        _ => s,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indicator_formatting() {
        assert_eq!(format_indicator(0.0), "0.000000E+0");
        assert_eq!(format_indicator(5.0), "5.000000E+0");
        assert_eq!(format_indicator(std::f64::consts::FRAC_1_SQRT_2), "7.071068E-1");
        assert_eq!(format_indicator(3.741e-5), "3.741000E-5");
        assert_eq!(format_indicator(1234.5), "1.234500E+3");
    }

    #[test]
    fn keys_are_sorted() {
        let mut r = RunReport::new("kpitu", b"1,2\n");
        r.param("resolution", 3.0);
        let json = to_json(&r).unwrap();
        let keys: Vec<usize> = [
            "format_version",
            "input_sha256",
            "knee_points",
            "knees",
            "method",
            "objectives",
        ]
        .iter()
        .map(|k| json.find(&format!("\"{k}\"")).unwrap())
        .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert!(!json.contains("wall_clock_ms"));
        assert!(json.ends_with("}\n"));
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(
            hex_digest(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
