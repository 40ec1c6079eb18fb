//! Batch experiment runner: sweep expansion, seed fan-out, parallel run
//! dispatch, and CSV/JSON emission.
//!
//! An experiment is a cross-product of sweep axes over a base configuration.
//! Every point runs `runs` simulations with seeds `seed + 0 … seed + runs−1`;
//! each run becomes one row of `runs.csv` and each point one row of
//! `summary.csv` (means plus 95% t-interval half-widths). Rows are written in
//! deterministic (point, seed) order regardless of worker-pool scheduling,
//! and floats are rendered with shortest-round-trip formatting, so identical
//! inputs produce byte-identical CSV bodies.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::allocation::StrategyKind;
use crate::config::{validate_config, ConfigError, SimConfig};
use crate::engine::{run_simulation, RunResult};
use crate::metrics::MetricSummary;

/// One sweep axis with its values.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepSpec {
    Workers(Vec<usize>),
    ArrivalMs(Vec<f64>),
    AreaKm(Vec<f64>),
    Strategy(Vec<StrategyKind>),
    EarlyExit(Vec<bool>),
}

impl fmt::Display for SweepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepSpec::Workers(v) => write!(f, "workers={v:?}"),
            SweepSpec::ArrivalMs(v) => write!(f, "arrival_ms={v:?}"),
            SweepSpec::AreaKm(v) => write!(f, "area_km={v:?}"),
            SweepSpec::Strategy(v) => {
                let names: Vec<&str> = v.iter().map(|s| s.name()).collect();
                write!(f, "strategy={names:?}")
            }
            SweepSpec::EarlyExit(v) => {
                let modes: Vec<&str> = v.iter().map(|e| if *e { "on" } else { "off" }).collect();
                write!(f, "early_exit={modes:?}")
            }
        }
    }
}

/// The four predefined experiment suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteName {
    /// Worker-count sweep, all strategies, early exit off.
    Basic,
    /// Arrival-rate sweep at 30 workers, all strategies.
    Input,
    /// Mission-area sweep at 30 workers, all strategies.
    Area,
    /// Worker-count sweep, Distributed, early exit on vs off.
    Exit,
    /// No presets; axes come from flags and config only.
    Custom,
}

impl SuiteName {
    pub fn name(&self) -> &'static str {
        match self {
            SuiteName::Basic => "basic",
            SuiteName::Input => "input",
            SuiteName::Area => "area",
            SuiteName::Exit => "exit",
            SuiteName::Custom => "custom",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Preset sweep axes of one suite.
pub fn suite_sweeps(suite: SuiteName) -> Vec<SweepSpec> {
    let all = StrategyKind::ALL.to_vec();
    match suite {
        SuiteName::Basic => vec![
            SweepSpec::Strategy(all),
            SweepSpec::Workers(vec![10, 20, 30, 40, 50]),
            SweepSpec::EarlyExit(vec![false]),
        ],
        SuiteName::Input => vec![
            SweepSpec::Strategy(all),
            SweepSpec::Workers(vec![30]),
            SweepSpec::ArrivalMs(vec![60.0, 70.0, 80.0, 90.0, 100.0]),
            SweepSpec::EarlyExit(vec![false]),
        ],
        SuiteName::Area => vec![
            SweepSpec::Strategy(all),
            SweepSpec::Workers(vec![30]),
            SweepSpec::AreaKm(vec![10.0, 20.0, 40.0]),
            SweepSpec::EarlyExit(vec![false]),
        ],
        SuiteName::Exit => vec![
            SweepSpec::Strategy(vec![StrategyKind::Distributed]),
            SweepSpec::Workers(vec![10, 20, 30, 40, 50]),
            SweepSpec::EarlyExit(vec![false, true]),
        ],
        SuiteName::Custom => Vec::new(),
    }
}

/// All four predefined suites with their axes.
pub fn default_paper_suite() -> Vec<(SuiteName, Vec<SweepSpec>)> {
    [SuiteName::Basic, SuiteName::Input, SuiteName::Area, SuiteName::Exit]
        .into_iter()
        .map(|s| (s, suite_sweeps(s)))
        .collect()
}

/// One fully resolved grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub workers: usize,
    pub arrival_ms: f64,
    pub area_km: f64,
    pub strategy: StrategyKind,
    pub early_exit: bool,
}

impl SweepPoint {
    /// The base values of `cfg` as a degenerate sweep point.
    fn base(cfg: &SimConfig, strategy: StrategyKind, early_exit: bool) -> Self {
        SweepPoint {
            workers: cfg.worker_count,
            arrival_ms: cfg.task_arrival_mean_s * 1000.0,
            area_km: cfg.area_side_m / 1000.0,
            strategy,
            early_exit,
        }
    }

    /// Instantiate this point's simulation config on top of `base`.
    pub fn config(&self, base: &SimConfig) -> SimConfig {
        SimConfig {
            worker_count: self.workers,
            task_arrival_mean_s: self.arrival_ms / 1000.0,
            area_side_m: self.area_km * 1000.0,
            ..base.clone()
        }
    }
}

/// Expand sweep axes over a base point into the grid, later axes innermost.
/// An axis listed twice keeps its last occurrence; no axes at all yields the
/// single base point.
pub fn expand_points(
    base: &SimConfig,
    base_strategy: StrategyKind,
    base_early_exit: bool,
    sweeps: &[SweepSpec],
) -> Vec<SweepPoint> {
    // Last occurrence of each axis wins.
    let mut workers: Option<&Vec<usize>> = None;
    let mut arrival: Option<&Vec<f64>> = None;
    let mut area: Option<&Vec<f64>> = None;
    let mut strategy: Option<&Vec<StrategyKind>> = None;
    let mut early_exit: Option<&Vec<bool>> = None;
    for sweep in sweeps {
        match sweep {
            SweepSpec::Workers(v) => workers = Some(v),
            SweepSpec::ArrivalMs(v) => arrival = Some(v),
            SweepSpec::AreaKm(v) => area = Some(v),
            SweepSpec::Strategy(v) => strategy = Some(v),
            SweepSpec::EarlyExit(v) => early_exit = Some(v),
        }
    }

    let point = SweepPoint::base(base, base_strategy, base_early_exit);
    let strategies = strategy.cloned().unwrap_or_else(|| vec![point.strategy]);
    let worker_values = workers.cloned().unwrap_or_else(|| vec![point.workers]);
    let arrival_values = arrival.cloned().unwrap_or_else(|| vec![point.arrival_ms]);
    let area_values = area.cloned().unwrap_or_else(|| vec![point.area_km]);
    let exit_values = early_exit.cloned().unwrap_or_else(|| vec![point.early_exit]);

    let mut points = Vec::new();
    for &strategy in &strategies {
        for &workers in &worker_values {
            for &arrival_ms in &arrival_values {
                for &area_km in &area_values {
                    for &early_exit in &exit_values {
                        points.push(SweepPoint {
                            workers,
                            arrival_ms,
                            area_km,
                            strategy,
                            early_exit,
                        });
                    }
                }
            }
        }
    }
    points
}

/// A complete experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub suite: SuiteName,
    pub base: SimConfig,
    pub base_strategy: StrategyKind,
    pub base_early_exit: bool,
    pub sweeps: Vec<SweepSpec>,
    /// Worker threads for run dispatch; 0 = one per core.
    pub jobs: usize,
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("I/O failure on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl ExperimentError {
    /// The process exit code this error maps to (config 1, I/O 2).
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Config(_) => 1,
            ExperimentError::Io { .. } => 2,
        }
    }
}

/// What `run_experiment` wrote.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub points: usize,
    pub rows: usize,
    pub runs_csv: PathBuf,
    pub summary_csv: PathBuf,
    pub manifest_json: PathBuf,
}

const PER_RUN_HEADER: &str = "suite,strategy,workers,arrival_ms,area_km,early_exit,seed,completed,mean_latency_s,mean_remaining_gflops,mean_transfer_s,jain,energy_per_task_j,mean_acc,fom";

const METRIC_NAMES: [&str; 8] = [
    "completed",
    "mean_latency_s",
    "mean_remaining_gflops",
    "mean_transfer_s",
    "jain",
    "energy_per_task_j",
    "mean_acc",
    "fom",
];

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x}"),
        None => String::new(),
    }
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> ExperimentError + '_ {
    move |source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn point_prefix(suite: SuiteName, p: &SweepPoint) -> String {
    format!(
        "{},{},{},{},{},{}",
        suite,
        p.strategy,
        p.workers,
        p.arrival_ms,
        p.area_km,
        if p.early_exit { "on" } else { "off" }
    )
}

fn per_run_row(suite: SuiteName, p: &SweepPoint, seed: u64, r: &RunResult) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        point_prefix(suite, p),
        seed,
        r.completed_tasks,
        fmt_opt(r.mean_latency_s),
        fmt_opt(r.mean_remaining_gflops),
        fmt_opt(r.mean_transfer_time_s),
        fmt_opt(r.jain_fairness),
        fmt_opt(r.energy_per_task_j),
        fmt_opt(r.mean_accuracy),
        fmt_opt(r.fom),
    )
}

/// The eight per-run metric columns in CSV order.
fn metric_values(r: &RunResult) -> [Option<f64>; 8] {
    [
        Some(r.completed_tasks as f64),
        r.mean_latency_s,
        r.mean_remaining_gflops,
        r.mean_transfer_time_s,
        r.jain_fairness,
        r.energy_per_task_j,
        r.mean_accuracy,
        r.fom,
    ]
}

fn summary_header() -> String {
    let mut cols = vec![
        "suite".to_string(),
        "strategy".to_string(),
        "workers".to_string(),
        "arrival_ms".to_string(),
        "area_km".to_string(),
        "early_exit".to_string(),
        "runs".to_string(),
    ];
    for m in METRIC_NAMES {
        cols.push(format!("{m}_mean"));
        cols.push(format!("{m}_ci95"));
    }
    cols.join(",")
}

fn summary_row(suite: SuiteName, p: &SweepPoint, runs: usize, results: &[RunResult]) -> String {
    let mut row = format!("{},{}", point_prefix(suite, p), runs);
    for idx in 0..METRIC_NAMES.len() {
        let summary = MetricSummary::of(results.iter().map(|r| metric_values(r)[idx]));
        row.push(',');
        row.push_str(&fmt_opt(summary.mean));
        row.push(',');
        row.push_str(&fmt_opt(summary.ci95));
    }
    row
}

#[derive(Serialize)]
struct Manifest<'a> {
    version: String,
    suite: &'a str,
    sweeps: Vec<String>,
    runs_per_point: usize,
    base_seed: u64,
    points: usize,
    rows: usize,
    wall_time_s: f64,
    base_config: &'a SimConfig,
}

/// Execute the experiment, writing `runs.csv`, `summary.csv`, and
/// `manifest.json` into `out_dir`.
///
/// Points execute in deterministic grid order; within a point, runs fan out
/// over the worker pool but rows land in seed order. Per-point output is
/// flushed as soon as the point finishes, so results written before an error
/// survive it.
pub fn run_experiment(
    spec: &ExperimentSpec,
    out_dir: &Path,
) -> Result<ExperimentOutput, ExperimentError> {
    let started = Instant::now();
    let points = expand_points(&spec.base, spec.base_strategy, spec.base_early_exit, &spec.sweeps);

    // Validate every point up front so a bad grid fails before any compute.
    let mut configs = Vec::with_capacity(points.len());
    for point in &points {
        configs.push(validate_config(point.config(&spec.base))?);
    }

    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let runs_csv = out_dir.join("runs.csv");
    let summary_csv = out_dir.join("summary.csv");
    let manifest_json = out_dir.join("manifest.json");

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .expect("thread pool");

    let mut runs_out =
        BufWriter::new(File::create(&runs_csv).map_err(io_err(&runs_csv))?);
    let mut summary_out =
        BufWriter::new(File::create(&summary_csv).map_err(io_err(&summary_csv))?);
    writeln!(runs_out, "{PER_RUN_HEADER}").map_err(io_err(&runs_csv))?;
    writeln!(summary_out, "{}", summary_header()).map_err(io_err(&summary_csv))?;

    let runs = spec.base.runs;
    let mut rows = 0usize;
    for (point, cfg) in points.iter().zip(&configs) {
        let seeds: Vec<u64> = (0..runs as u64).map(|k| spec.base.seed + k).collect();
        let results: Vec<RunResult> = pool.install(|| {
            seeds
                .par_iter()
                .map(|&seed| run_simulation(cfg, point.strategy, point.early_exit, seed))
                .collect()
        });
        for (seed, result) in seeds.iter().zip(&results) {
            writeln!(runs_out, "{}", per_run_row(spec.suite, point, *seed, result))
                .map_err(io_err(&runs_csv))?;
            rows += 1;
        }
        writeln!(summary_out, "{}", summary_row(spec.suite, point, runs, &results))
            .map_err(io_err(&summary_csv))?;
        runs_out.flush().map_err(io_err(&runs_csv))?;
        summary_out.flush().map_err(io_err(&summary_csv))?;
    }

    let manifest = Manifest {
        version: format!("swarmsplit {}", env!("CARGO_PKG_VERSION")),
        suite: spec.suite.name(),
        sweeps: spec.sweeps.iter().map(|s| s.to_string()).collect(),
        runs_per_point: runs,
        base_seed: spec.base.seed,
        points: points.len(),
        rows,
        wall_time_s: started.elapsed().as_secs_f64(),
        base_config: &spec.base,
    };
    let manifest_text =
        serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    std::fs::write(&manifest_json, manifest_text).map_err(io_err(&manifest_json))?;

    Ok(ExperimentOutput {
        points: points.len(),
        rows,
        runs_csv,
        summary_csv,
        manifest_json,
    })
}
