//! `kneekit`: knee identification, benchmark fronts, indicator evaluation
//! and knee-driven evolution from the command line.

mod report;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use kneekit::baselines::{
    chim_knees, cone_knees, default_weight_count, emu_knees, mmd_knee, mu_metric, reflex_angle_knee, ConeParams,
};
use kneekit::benchmarks::{ground_truth, sample_front, BenchmarkSpec, Family};
use kneekit::emo::{run, BenchmarkProblem, EvoConfig, SurvivalMode};
use kneekit::io::{read_points, write_points};
use kneekit::kpitu::{identify, identify_parallel};
use kneekit::metrics::indicator;
use kneekit::{KneeError, TradeoffSet};

use report::{format_indicator, to_json, EvolveManifest, RunReport};

#[derive(Parser)]
#[command(name = "kneekit", version, about = "Knee point identification on Pareto fronts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find knee points in a CSV of objective vectors
    Identify(IdentifyArgs),
    /// Sample a benchmark front and its true knees
    Bench(BenchArgs),
    /// Mean distance from identified knees to the nearest true knee
    Eval { knees: PathBuf, truth: PathBuf },
    /// Run NSGA-II with knee-based survival on a benchmark problem
    Evolve(EvolveArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Kpitu,
    Cd,
    Emu,
    Ra,
    Chim,
    Mmd,
    Mu,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Kpitu => "kpitu",
            Method::Cd => "cd",
            Method::Emu => "emu",
            Method::Ra => "ra",
            Method::Chim => "chim",
            Method::Mmd => "mmd",
            Method::Mu => "mu",
        }
    }
}

#[derive(clap::Args)]
struct IdentifyArgs {
    /// Objective vectors, one per row
    input: PathBuf,
    #[arg(long, value_enum, default_value = "kpitu")]
    method: Method,
    /// Dominance angle in degrees for `cd`
    #[arg(long, default_value_t = 135.0)]
    phi: f64,
    /// Weight count for `emu` as a fraction of the set size
    #[arg(long)]
    weights_frac: Option<f64>,
    /// Worker threads for `kpitu`
    #[arg(long, env = "KNEEKIT_THREADS")]
    parallel: Option<usize>,
    /// Write the report here instead of stdout
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Include wall-clock time in the report
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Do2dk,
    Deb2dk,
    Deb3dk,
    Ckp,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Do2dk => Family::Do2dk,
            FamilyArg::Deb2dk => Family::Deb2dk,
            FamilyArg::Deb3dk => Family::Deb3dk,
            FamilyArg::Ckp => Family::Ckp,
        }
    }
}

#[derive(clap::Args)]
struct BenchArgs {
    #[arg(value_enum)]
    family: FamilyArg,
    /// Number of objectives; defaults to the family's own
    #[arg(short, long = "objectives")]
    m: Option<usize>,
    /// Knee-count parameter
    #[arg(short = 'k', long = "knees", default_value_t = 1)]
    k: u32,
    /// Skew, do2dk only
    #[arg(short = 's', long, default_value_t = 0)]
    skew: u32,
    /// Sample count; 200 for two objectives, 676 for three
    #[arg(short = 'n', long)]
    samples: Option<usize>,
    /// Front CSV
    #[arg(long)]
    out: PathBuf,
    /// True-knee CSV
    #[arg(long)]
    truth: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Survival {
    Kpitu,
    Crowding,
}

#[derive(clap::Args)]
struct EvolveArgs {
    #[arg(long, value_enum, default_value = "deb2dk")]
    problem: FamilyArg,
    #[arg(short = 'k', long = "knees", default_value_t = 1)]
    k: u32,
    #[arg(short = 's', long, default_value_t = 0)]
    skew: u32,
    /// Decision variables
    #[arg(long, default_value_t = 10)]
    variables: usize,
    #[arg(long, default_value_t = 100)]
    pop: usize,
    #[arg(long, default_value_t = 300)]
    gens: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 0.9)]
    pc: f64,
    #[arg(long, default_value_t = 20.0)]
    eta_c: f64,
    /// Per-gene mutation probability; 1/variables when omitted
    #[arg(long)]
    pm: Option<f64>,
    #[arg(long, default_value_t = 20.0)]
    eta_m: f64,
    #[arg(long, value_enum, default_value = "kpitu")]
    survival: Survival,
    /// Record the knee indicator of every generation
    #[arg(long)]
    trace: bool,
    /// Worker threads for objective evaluation
    #[arg(long, env = "KNEEKIT_THREADS")]
    parallel: Option<usize>,
    /// Run manifest (JSON)
    #[arg(long)]
    manifest: PathBuf,
    /// Final population objectives (CSV)
    #[arg(long)]
    population: PathBuf,
    /// Knees of the final population (CSV)
    #[arg(long)]
    knees_out: Option<PathBuf>,
    #[arg(long)]
    timing: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Identify(args) => cmd_identify(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Eval { knees, truth } => cmd_eval(&knees, &truth),
        Command::Evolve(args) => cmd_evolve(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Invalid flags or inputs that do not fit the request exit with 2, like
/// clap's own usage errors; everything else exits with 1.
fn exit_code(e: &anyhow::Error) -> u8 {
    let usage = e.chain().any(|c| {
        c.is::<Usage>()
            || matches!(
                c.downcast_ref::<KneeError>(),
                Some(
                    KneeError::InvalidParameter { .. }
                        | KneeError::Unsupported { .. }
                        | KneeError::DimensionMismatch { .. }
                )
            )
    });
    if usage {
        2
    } else {
        1
    }
}

#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn load(path: &Path) -> Result<(Vec<u8>, TradeoffSet)> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let set = read_points(bytes.as_slice()).with_context(|| format!("parsing {}", path.display()))?;
    Ok((bytes, set))
}

fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

fn write_csv<R: AsRef<[f64]>>(path: &Path, rows: &[R], dim: usize) -> Result<()> {
    let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    write_points(std::io::BufWriter::new(file), rows, dim).with_context(|| format!("writing {}", path.display()))
}

fn cmd_identify(args: IdentifyArgs) -> Result<()> {
    let (bytes, set) = load(&args.input)?;
    let start = Instant::now();
    let mut report = RunReport::new(args.method.name(), &bytes);
    match args.method {
        Method::Kpitu => {
            let r = match args.parallel {
                Some(w) => identify_parallel(&set, w)?,
                None => identify(&set)?,
            };
            report.knees = r.knees;
            report.accumulative = Some(r.accumulative);
            report.param("resolution", r.resolution as f64);
        }
        Method::Cd => {
            report.knees = cone_knees(&set, &ConeParams { phi: args.phi })?;
            report.param("phi", args.phi);
        }
        Method::Emu => {
            let count = match args.weights_frac {
                Some(f) if f > 0.0 && f.is_finite() => ((set.len() as f64 * f).ceil() as usize).max(2),
                Some(f) => return Err(Usage(format!("--weights-frac must be positive, got {f}")).into()),
                None => default_weight_count(set.len()),
            };
            let r = emu_knees(&set, Some(count))?;
            report.knees = r.knees;
            report.scores = Some(r.scores);
            report.param("weights", r.weights as f64);
        }
        Method::Ra => report.knees = reflex_angle_knee(&set)?,
        Method::Chim => report.knees = chim_knees(&set),
        Method::Mmd => report.knees = mmd_knee(&set),
        Method::Mu => {
            let r = mu_metric(&set)?;
            report.knees = r.knees;
            report.scores = Some(r.values);
        }
    }
    report.knee_points = report.knees.iter().map(|&i| set.point(i).to_vec()).collect();
    report.points = set.len();
    report.objectives = set.dim();
    if args.timing {
        report.wall_clock_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    emit(&to_json(&report)?, args.output.as_deref())
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let family = Family::from(args.family);
    let mut spec =
        BenchmarkSpec::new(family, args.k, args.samples.unwrap_or(family.default_samples())).with_skew(args.skew);
    if let Some(m) = args.m {
        spec.m = m;
    }
    let front = sample_front(&spec)?;
    let truth = ground_truth(&spec)?;
    write_csv(&args.out, &front.to_rows(), front.dim())?;
    write_csv(&args.truth, &truth.knees, spec.m)?;
    Ok(())
}

fn cmd_eval(knees: &Path, truth: &Path) -> Result<()> {
    let (_, found) = load(knees)?;
    let (_, exact) = load(truth)?;
    if found.dim() != exact.dim() {
        return Err(Usage(format!(
            "dimension mismatch: {} has {} objectives, {} has {}",
            knees.display(),
            found.dim(),
            truth.display(),
            exact.dim()
        ))
        .into());
    }
    let value = indicator(&found.to_rows(), &exact.to_rows())?;
    println!("{}", format_indicator(value));
    Ok(())
}

fn cmd_evolve(args: EvolveArgs) -> Result<()> {
    let family = Family::from(args.problem);
    let spec = BenchmarkSpec::new(family, args.k, family.default_samples()).with_skew(args.skew);
    let problem = BenchmarkProblem::new(spec, args.variables)?;
    let config = EvoConfig {
        population: args.pop,
        generations: args.gens,
        crossover_prob: args.pc,
        crossover_eta: args.eta_c,
        mutation_prob: args.pm,
        mutation_eta: args.eta_m,
        seed: args.seed,
        survival: match args.survival {
            Survival::Kpitu => EvoConfig::default().survival,
            Survival::Crowding => SurvivalMode::Crowding,
        },
        trace: args.trace,
        workers: args.parallel.unwrap_or(1),
        ..EvoConfig::default()
    };
    let start = Instant::now();
    let outcome = run(&problem, &config)?;
    let objs: Vec<&[f64]> = outcome.population.iter().map(|i| i.objectives.as_slice()).collect();
    write_csv(&args.population, &objs, spec.m)?;
    if let Some(path) = &args.knees_out {
        let knees: Vec<&[f64]> = outcome.knees.iter().map(|&i| objs[i]).collect();
        write_csv(path, &knees, spec.m)?;
    }
    let mut manifest = EvolveManifest::new(&problem, &config, &outcome);
    if args.timing {
        manifest.wall_clock_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    emit(&to_json(&manifest)?, Some(&args.manifest))
}
