//! `swarmsplit` command-line front end.
//!
//! Assembles an experiment from three layers — built-in defaults, an optional
//! TOML config file, and command-line flags (highest precedence) — then runs
//! it and writes `runs.csv`, `summary.csv`, and `manifest.json` into the
//! output directory.
//!
//! Exit codes: 0 on success, 1 on an invalid configuration (bad flag value,
//! unparsable config file, parameter out of range), 2 on I/O failure.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::Parser;

use swarmsplit::allocation::StrategyKind;
use swarmsplit::config::{load_config_file, validate_config, SimConfig};
use swarmsplit::experiment::{
    run_experiment, suite_sweeps, ExperimentSpec, SuiteName, SweepSpec,
};

#[derive(Debug, Parser)]
#[command(
    name = "swarmsplit",
    version,
    about = "Deterministic simulator of split DNN inference over a UAV swarm",
    after_help = "Sweep flags accept comma-separated lists (e.g. --workers 10,30,50) and\n\
                  replace the matching axis of the chosen suite. Single values narrow the\n\
                  axis to one point."
)]
struct Cli {
    /// TOML file with base parameters (flags still take precedence).
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Experiment suite: basic, input, area, exit, or custom.
    #[arg(long, default_value = "basic", value_name = "NAME")]
    suite: String,

    /// Allocation strategies to sweep: random, random_acyclic, greedy,
    /// local_only, distributed.
    #[arg(long, value_delimiter = ',', value_name = "NAME,..")]
    strategy: Vec<String>,

    /// Swarm sizes to sweep.
    #[arg(long, value_delimiter = ',', value_name = "N,..")]
    workers: Vec<usize>,

    /// Mean task inter-arrival times to sweep, in milliseconds.
    #[arg(long = "arrival-ms", value_delimiter = ',', value_name = "MS,..")]
    arrival_ms: Vec<f64>,

    /// Mission-area side lengths to sweep, in kilometres.
    #[arg(long = "area-km", value_delimiter = ',', value_name = "KM,..")]
    area_km: Vec<f64>,

    /// Early-exit mode: on, off, or both (sweeps off then on).
    #[arg(long = "early-exit", value_name = "MODE")]
    early_exit: Option<String>,

    /// Simulation runs per sweep point (seeds seed, seed+1, …).
    #[arg(long, value_name = "N")]
    runs: Option<usize>,

    /// Base RNG seed.
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,

    /// Simulated mission length per run, in seconds.
    #[arg(long = "max-time-s", value_name = "S")]
    max_time_s: Option<f64>,

    /// Output directory for runs.csv, summary.csv, and manifest.json.
    #[arg(long, default_value = "results", value_name = "DIR")]
    out: PathBuf,

    /// Worker threads for parallel runs (0 = one per core).
    #[arg(long, default_value_t = 0, value_name = "N")]
    jobs: usize,
}

fn parse_suite(name: &str) -> Result<SuiteName, String> {
    match name {
        "basic" => Ok(SuiteName::Basic),
        "input" => Ok(SuiteName::Input),
        "area" => Ok(SuiteName::Area),
        "exit" => Ok(SuiteName::Exit),
        "custom" => Ok(SuiteName::Custom),
        other => Err(format!(
            "unknown suite {other:?} (expected basic, input, area, exit, or custom)"
        )),
    }
}

fn parse_exit_mode(mode: &str) -> Result<Vec<bool>, String> {
    match mode {
        "on" => Ok(vec![true]),
        "off" => Ok(vec![false]),
        "both" => Ok(vec![false, true]),
        other => Err(format!(
            "unknown early-exit mode {other:?} (expected on, off, or both)"
        )),
    }
}

fn build_spec(cli: &Cli) -> Result<ExperimentSpec, String> {
    let suite = parse_suite(&cli.suite)?;

    let mut base = SimConfig::default();
    let mut base_strategy = StrategyKind::Distributed;
    let mut base_early_exit = false;

    if let Some(path) = &cli.config {
        let file = load_config_file(path).map_err(|e| e.to_string())?;
        file.apply(&mut base).map_err(|e| e.to_string())?;
        if let Some(name) = &file.strategy {
            base_strategy = StrategyKind::from_str(name).map_err(|e| e.to_string())?;
        }
        if let Some(on) = file.early_exit_flag().map_err(|e| e.to_string())? {
            base_early_exit = on;
        }
    }
    if let Some(runs) = cli.runs {
        base.runs = runs;
    }
    if let Some(seed) = cli.seed {
        base.seed = seed;
    }
    if let Some(max_time_s) = cli.max_time_s {
        base.max_sim_time_s = max_time_s;
    }

    // Suite presets first; flag axes appended afterwards override them
    // because sweep expansion keeps the last occurrence of each axis.
    let mut sweeps = suite_sweeps(suite);
    if !cli.strategy.is_empty() {
        let parsed: Result<Vec<StrategyKind>, _> =
            cli.strategy.iter().map(|s| StrategyKind::from_str(s)).collect();
        sweeps.push(SweepSpec::Strategy(parsed.map_err(|e| e.to_string())?));
    }
    if !cli.workers.is_empty() {
        sweeps.push(SweepSpec::Workers(cli.workers.clone()));
    }
    if !cli.arrival_ms.is_empty() {
        sweeps.push(SweepSpec::ArrivalMs(cli.arrival_ms.clone()));
    }
    if !cli.area_km.is_empty() {
        sweeps.push(SweepSpec::AreaKm(cli.area_km.clone()));
    }
    if let Some(mode) = &cli.early_exit {
        sweeps.push(SweepSpec::EarlyExit(parse_exit_mode(mode)?));
    }

    // Surface base-parameter problems before the sweep grid expands them
    // into one error per point.
    validate_config(base.clone()).map_err(|e| e.to_string())?;

    Ok(ExperimentSpec {
        suite,
        base,
        base_strategy,
        base_early_exit,
        sweeps,
        jobs: cli.jobs,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };

    let spec = match build_spec(&cli) {
        Ok(spec) => spec,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };

    match run_experiment(&spec, &cli.out) {
        Ok(output) => {
            println!(
                "suite {}: {} sweep points, {} runs -> {}",
                spec.suite,
                output.points,
                output.rows,
                cli.out.display()
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
