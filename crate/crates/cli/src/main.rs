mod output;
mod reproduce;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use lqw_core::coined_walk::{self, Coin, CoinedWalkState1D, CoinedWalkStateND};
use lqw_core::lackadaisical_walk::{self as walk, Rounding, WalkParams};
use lqw_core::mlp::{self, BackpropConfig, TrainOutcome, TrainResult};
use lqw_core::stats;
use lqw_core::trainer::{self, ExperimentResult, TrainerConfig};

use output::RunManifest;

#[derive(Parser)]
#[command(
    name = "lqw",
    version,
    about = "Quantum-walk search for XOR network weights"
)]
struct Cli {
    /// Directory for outputs whose path is not given explicitly.
    #[arg(long, global = true, env = "LQW_OUT_DIR", default_value = "lqw-out")]
    out_dir: PathBuf,
    /// Worker threads for independent experiments and enumeration.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hadamard walk on the line.
    Walk1d(Walk1dArgs),
    /// Hadamard walk on the d-dimensional integer grid.
    Walknd(WalkndArgs),
    /// Lackadaisical walk on the complete graph: p(t) for the four outcomes.
    Walkc(WalkcArgs),
    /// Search a weight window for XOR solutions with the walk.
    Train(TrainArgs),
    /// Backpropagation baseline.
    Backprop(BackpropArgs),
    /// Regenerate every table and figure and write a comparison report.
    Reproduce(ReproduceArgs),
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Init {
    Asymmetric,
    Symmetric,
}

#[derive(Args, Serialize)]
struct Walk1dArgs {
    #[arg(long, default_value_t = 100)]
    steps: u64,
    #[arg(long, value_enum, default_value = "asymmetric")]
    init: Init,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct WalkndArgs {
    #[arg(long, default_value_t = 2)]
    dims: usize,
    #[arg(long, default_value_t = 20)]
    steps: u64,
    /// Initial coin basis state, bit p is the coin of axis p.
    #[arg(long, default_value_t = 0)]
    coin_index: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct WalkcArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: u64,
    #[arg(long, default_value_t = 1)]
    l: u64,
    /// Defaults to the rounded optimal step count.
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long, default_value = "ceiling")]
    rounding: Rounding,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    /// JSON trainer config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    delta_p: Option<f64>,
    #[arg(long)]
    z: Option<u32>,
    #[arg(long)]
    l: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    rounding: Option<Rounding>,
    #[arg(long)]
    max_window_shifts: Option<u64>,
    #[arg(long)]
    count_noise: Option<u64>,
    /// Fixed start origin, comma separated lattice indices.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    origin: Option<Vec<i64>>,
    #[arg(long)]
    allow_large: bool,
    /// Independent runs with seeds seed, seed+1, ...
    #[arg(long, default_value_t = 1)]
    runs: u64,
    /// Print the window and step count without running the walk.
    #[arg(long)]
    dry_run: bool,
    /// JSON result path; the CSV tables go next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BackpropArgs {
    /// JSON backprop config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    lr: Option<f64>,
    #[arg(long, default_value_t = 100)]
    runs: u64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_epochs: Option<u64>,
    #[arg(long)]
    stagnation_window: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    init_range: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
pub struct ReproduceArgs {
    /// Include the 2^27-vertex window.
    #[arg(long)]
    pub heavy: bool,
    /// Backprop runs per learning rate.
    #[arg(long, default_value_t = 100)]
    pub backprop_runs: u64,
    /// Trainer runs for the end-to-end statistics.
    #[arg(long, default_value_t = 1000)]
    pub train_runs: u64,
}

/// Failure with its exit status: 1 for bad input, 2 for runtime failures.
pub struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    pub fn usage(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: 1,
            error: error.into(),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Self { code: 2, error }
    }
}

impl From<lqw_core::Error> for Failure {
    fn from(e: lqw_core::Error) -> Self {
        use lqw_core::Error::*;
        let code = match e {
            InvalidParams(_) | Config(_) | NonUnitaryCoin { .. } | CoinDimension { .. } => 1,
            _ => 2,
        };
        Self {
            code,
            error: e.into(),
        }
    }
}

type Outcome<T = ()> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    if cli.jobs == Some(0) {
        return Err(Failure::usage(anyhow!("--jobs must be at least 1")));
    }
    let out_dir = cli.out_dir;
    let jobs = cli.jobs;
    match cli.command {
        Command::Walk1d(a) => walk1d(&out_dir, a),
        Command::Walknd(a) => walknd(&out_dir, a),
        Command::Walkc(a) => walkc(&out_dir, a),
        Command::Train(a) => train(&out_dir, jobs, a),
        Command::Backprop(a) => backprop(&out_dir, jobs, a),
        Command::Reproduce(a) => reproduce::run(&out_dir, jobs, &a),
    }
}

fn out_path(explicit: &Option<PathBuf>, out_dir: &Path, name: &str) -> PathBuf {
    explicit.clone().unwrap_or_else(|| out_dir.join(name))
}

/// `<path without extension><suffix>`, e.g. `train.json` -> `train_steps.csv`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().unwrap_or_default().to_string_lossy();
    path.with_file_name(format!("{stem}{suffix}"))
}

fn finish<C: Serialize>(mut manifest: RunManifest<C>, outputs: &[&Path]) -> Outcome {
    manifest.outputs = outputs.iter().map(|p| output::display(p)).collect();
    let path = manifest.write_next_to(outputs[0])?;
    for p in outputs {
        println!("wrote {}", p.display());
    }
    println!("wrote {}", path.display());
    Ok(())
}

fn walk1d(out_dir: &Path, args: Walk1dArgs) -> Outcome {
    let start = match args.init {
        Init::Asymmetric => CoinedWalkState1D::asymmetric(),
        Init::Symmetric => CoinedWalkState1D::symmetric(),
    };
    let dist = start.evolve(args.steps).distribution();
    let path = out_path(&args.out, out_dir, "walk1d.csv");
    coined_walk::write_distribution_1d(&dist, output::create(&path)?)?;
    finish(RunManifest::new("walk1d", &args, None), &[&path])
}

fn walknd(out_dir: &Path, args: WalkndArgs) -> Outcome {
    let state = CoinedWalkStateND::localized(args.dims, args.coin_index)?
        .evolve(&Coin::hadamard(args.dims), args.steps)?;
    let path = out_path(&args.out, out_dir, "walknd.csv");
    coined_walk::write_distribution_nd(args.dims, &state.distribution(), output::create(&path)?)?;
    finish(RunManifest::new("walknd", &args, None), &[&path])
}

fn walkc(out_dir: &Path, args: WalkcArgs) -> Outcome {
    let params = WalkParams::new(args.n, args.k, args.l)?;
    let steps = args
        .steps
        .unwrap_or_else(|| walk::steps_to_max(&params, args.rounding).t_int);
    let trace = walk::probability_trace(&params, steps);
    let path = out_path(&args.out, out_dir, "walkc.csv");
    walk::write_trace(&trace, output::create(&path)?)?;
    finish(RunManifest::new("walkc", &args, None), &[&path])
}

fn read_config<T: serde::de::DeserializeOwned + Default>(path: &Option<PathBuf>) -> Outcome<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("reading config {}", p.display()))
                .map_err(Failure::usage)?;
            serde_json::from_str(&text)
                .with_context(|| format!("parsing config {}", p.display()))
                .map_err(Failure::usage)
        }
    }
}

fn trainer_config(args: &TrainArgs, jobs: Option<usize>) -> Outcome<TrainerConfig> {
    let mut cfg: TrainerConfig = read_config(&args.config)?;
    macro_rules! set {
        ($($field:ident),*) => {$(
            if let Some(v) = args.$field.clone() {
                cfg.$field = v;
            }
        )*};
    }
    set!(
        delta_p,
        z,
        l,
        seed,
        rounding,
        max_window_shifts,
        count_noise
    );
    if args.origin.is_some() {
        cfg.origin = args.origin.clone();
    }
    if args.allow_large {
        cfg.allow_large = true;
    }
    if jobs.is_some() {
        cfg.jobs = jobs;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn pool(jobs: Option<usize>) -> anyhow::Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        b = b.num_threads(n);
    }
    Ok(b.build()?)
}

fn train(out_dir: &Path, jobs: Option<usize>, args: TrainArgs) -> Outcome {
    let cfg = trainer_config(&args, jobs)?;
    if args.dry_run {
        let plan = trainer::dry_run(&cfg)?;
        println!(
            "{}",
            serde_json::to_string_pretty(&plan).map_err(anyhow::Error::from)?
        );
        return Ok(());
    }
    if args.runs == 0 {
        return Err(Failure::usage(anyhow!("--runs must be at least 1")));
    }
    // experiments run concurrently; each enumerates serially so the job
    // count cannot change any result
    let per_run = TrainerConfig {
        jobs: None,
        ..cfg.clone()
    };
    let results: Vec<ExperimentResult> = pool(jobs)?.install(|| {
        (0..args.runs)
            .into_par_iter()
            .map(|i| {
                trainer::train(&TrainerConfig {
                    seed: cfg.seed + i,
                    ..per_run.clone()
                })
            })
            .collect::<lqw_core::Result<_>>()
    })?;

    let json = out_path(&args.out, out_dir, "train.json");
    if results.len() == 1 {
        output::write_json(&json, &results[0])?;
    } else {
        output::write_json(&json, &results)?;
    }
    let (t3, t4, runs) = (
        sibling(&json, "_steps.csv"),
        sibling(&json, "_probabilities.csv"),
        sibling(&json, "_runs.csv"),
    );
    write_experiment_tables(&results, &t3, &t4)?;
    let rows: Vec<_> = results
        .iter()
        .enumerate()
        .map(|(i, r)| {
            (
                i + 1,
                cfg.seed + i as u64,
                r.shifts,
                r.k_walk,
                r.outcome.to_string(),
                r.vertex,
                r.classification_error,
                r.weights.0,
            )
        })
        .collect();
    let mut header = vec![
        "experiment",
        "seed",
        "shifts",
        "k_walk",
        "outcome",
        "vertex",
        "classification_error",
    ];
    header.extend([
        "w00", "w01", "w02", "w10", "w11", "w12", "w20", "w21", "w22",
    ]);
    output::write_rows(&runs, &header, &rows)?;

    let solved = results.iter().filter(|r| r.outcome.is_solution()).count();
    println!("{solved}/{} runs measured a solution", results.len());
    finish(
        RunManifest::new("train", &cfg, Some(cfg.seed)),
        &[&json, &t3, &t4, &runs],
    )
}

pub fn write_experiment_tables(
    results: &[ExperimentResult],
    steps_csv: &Path,
    probs_csv: &Path,
) -> anyhow::Result<()> {
    let rows3: Vec<_> = results
        .iter()
        .enumerate()
        .map(|(i, r)| (i + 1, r.k, r.n, r.t_real, r.t_int))
        .collect();
    output::write_rows(
        steps_csv,
        &["experiment", "k", "N", "t_theoretical", "t_simulated"],
        &rows3,
    )?;
    let rows4: Vec<_> = results
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let p = r.probabilities;
            (i + 1, p[0], p[1], p[2], p[3])
        })
        .collect();
    output::write_rows(
        probs_csv,
        &["experiment", "p_AA", "p_AB", "p_BA", "p_BB"],
        &rows4,
    )
}

fn backprop_config(args: &BackpropArgs) -> Outcome<BackpropConfig> {
    let mut cfg: BackpropConfig = read_config(&args.config)?;
    if let Some(v) = args.lr {
        cfg.learning_rate = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.max_epochs {
        cfg.max_epochs = v;
    }
    if let Some(v) = args.stagnation_window {
        cfg.stagnation_window = v;
    }
    if let Some(v) = args.init_range {
        cfg.init_range = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn backprop_batch(
    cfg: &BackpropConfig,
    runs: u64,
    jobs: Option<usize>,
) -> anyhow::Result<Vec<TrainResult>> {
    let results = pool(jobs)?.install(|| {
        (0..runs)
            .into_par_iter()
            .map(|i| {
                mlp::backprop_train(&BackpropConfig {
                    seed: cfg.seed + i,
                    ..*cfg
                })
            })
            .collect::<lqw_core::Result<Vec<_>>>()
    })?;
    Ok(results)
}

#[derive(Debug, Serialize)]
pub struct BackpropSummary {
    pub lr: f64,
    pub runs: u64,
    pub successes: usize,
    pub epoch_limit: usize,
    pub stagnation: usize,
    pub min: Option<f64>,
    pub mean: Option<f64>,
    pub max: Option<f64>,
    pub std: Option<f64>,
}

pub fn summarize_backprop(lr: f64, results: &[TrainResult]) -> BackpropSummary {
    let count = |o| results.iter().filter(|r| r.outcome == o).count();
    let epochs: Vec<f64> = results.iter().map(|r| r.epochs_used as f64).collect();
    let s = stats::summarize(&epochs);
    BackpropSummary {
        lr,
        runs: results.len() as u64,
        successes: count(TrainOutcome::Success),
        epoch_limit: count(TrainOutcome::EpochLimit),
        stagnation: count(TrainOutcome::Stagnation),
        min: s.map(|s| s.min),
        mean: s.map(|s| s.mean),
        max: s.map(|s| s.max),
        std: s.map(|s| s.std),
    }
}

fn backprop(out_dir: &Path, jobs: Option<usize>, args: BackpropArgs) -> Outcome {
    let cfg = backprop_config(&args)?;
    let results = backprop_batch(&cfg, args.runs, jobs)?;
    let path = out_path(&args.out, out_dir, "backprop.csv");
    let rows: Vec<_> = results
        .iter()
        .enumerate()
        .map(|(i, r)| {
            (
                cfg.learning_rate,
                cfg.seed + i as u64,
                r.outcome.to_string(),
                r.epochs_used,
                r.final_mse,
            )
        })
        .collect();
    output::write_rows(
        &path,
        &["lr", "seed", "outcome", "epochs", "final_mse"],
        &rows,
    )?;

    let summary = summarize_backprop(cfg.learning_rate, &results);
    let summary_path = sibling(&path, "_summary.csv");
    output::write_rows(
        &summary_path,
        &[
            "lr",
            "runs",
            "successes",
            "epoch_limit",
            "stagnation",
            "min",
            "mean",
            "max",
            "std",
        ],
        &[&summary],
    )?;
    println!(
        "{} / {} successful, mean epochs {}",
        summary.successes,
        summary.runs,
        summary.mean.map_or("-".into(), |m| format!("{m:.2}"))
    );
    #[derive(Serialize)]
    struct Resolved {
        #[serde(flatten)]
        config: BackpropConfig,
        runs: u64,
    }
    finish(
        RunManifest::new(
            "backprop",
            Resolved {
                config: cfg,
                runs: args.runs,
            },
            Some(cfg.seed),
        ),
        &[&path, &summary_path],
    )
}
