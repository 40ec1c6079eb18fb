//! Python bindings for the swarm simulator.
//!
//! Exposes the per-formula primitives (path gain, capacity, φ updates,
//! fairness, figure of merit, exit labels) plus a one-call `run_simulation`
//! that accepts the same TOML text the CLI's `--config` flag reads and
//! returns a result object with the run's metrics. Build with
//! `cargo build -p swarmsplit-py`, then rename/copy the produced
//! `libswarmsplit_py.so` to `swarmsplit_py.so` somewhere on `sys.path`
//! (see `python/smoke_test.py` at the workspace root, which automates this).

use std::str::FromStr;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use swarmsplit::allocation::StrategyKind;
use swarmsplit::channel::ChannelParams;
use swarmsplit::config::{parse_config_toml, validate_config, SimConfig};
use swarmsplit::diffusive::NeighborPhi;
use swarmsplit::engine::RunResult;

/// Metrics of one simulation run.
#[pyclass(frozen, get_all, module = "swarmsplit_py")]
struct PyRunResult {
    completed_tasks: u64,
    tasks_created: u64,
    mean_latency_s: Option<f64>,
    mean_remaining_gflops: Option<f64>,
    mean_transfer_time_s: Option<f64>,
    jain_fairness: Option<f64>,
    energy_per_task_j: Option<f64>,
    mean_accuracy: Option<f64>,
    fom: Option<f64>,
    total_energy_j: f64,
    total_processed_gflops: f64,
    transfers_started: u64,
    transfers_delivered: u64,
    transfers_aborted: u64,
    revisit_deliveries: u64,
}

#[pymethods]
impl PyRunResult {
    fn __repr__(&self) -> String {
        format!(
            "RunResult(completed={}, created={}, latency={:?}, fom={:?})",
            self.completed_tasks, self.tasks_created, self.mean_latency_s, self.fom
        )
    }
}

impl From<RunResult> for PyRunResult {
    fn from(r: RunResult) -> Self {
        PyRunResult {
            completed_tasks: r.completed_tasks,
            tasks_created: r.tasks_created,
            mean_latency_s: r.mean_latency_s,
            mean_remaining_gflops: r.mean_remaining_gflops,
            mean_transfer_time_s: r.mean_transfer_time_s,
            jain_fairness: r.jain_fairness,
            energy_per_task_j: r.energy_per_task_j,
            mean_accuracy: r.mean_accuracy,
            fom: r.fom,
            total_energy_j: r.total_energy_j,
            total_processed_gflops: r.total_processed_gflops,
            transfers_started: r.transfers_started,
            transfers_delivered: r.transfers_delivered,
            transfers_aborted: r.transfers_aborted,
            revisit_deliveries: r.revisit_deliveries,
        }
    }
}

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// One seeded run. `strategy` is one of "random", "random_acyclic",
/// "greedy", "local_only", "distributed"; `config_toml`, when given, is the
/// same TOML the CLI accepts via `--config` and overrides the defaults.
#[pyfunction]
#[pyo3(signature = (strategy, early_exit, seed, config_toml = None))]
fn run_simulation(
    py: Python<'_>,
    strategy: &str,
    early_exit: bool,
    seed: u64,
    config_toml: Option<&str>,
) -> PyResult<PyRunResult> {
    let kind = StrategyKind::from_str(strategy).map_err(value_err)?;
    let mut cfg = SimConfig::default();
    if let Some(text) = config_toml {
        let file = parse_config_toml(text).map_err(value_err)?;
        file.apply(&mut cfg).map_err(value_err)?;
    }
    let validated = validate_config(cfg).map_err(value_err)?;
    let result = py.allow_threads(|| {
        swarmsplit::engine::run_simulation(&validated, kind, early_exit, seed)
    });
    Ok(result.into())
}

/// Two-ray path gain in dB at default radio parameters (overridable).
#[pyfunction]
#[pyo3(signature = (distance_m, carrier_hz = 2.4e9, altitude_m = 100.0))]
fn path_gain_db(distance_m: f64, carrier_hz: f64, altitude_m: f64) -> PyResult<f64> {
    let params = ChannelParams {
        carrier_hz,
        altitude_m,
        ..ChannelParams::from_config(&SimConfig::default())
    };
    swarmsplit::channel::path_gain_db(distance_m, &params).map_err(value_err)
}

/// Shannon capacity B·log2(1 + 10^(snr/10)) in bits per second.
#[pyfunction]
fn capacity_bps(bandwidth_hz: f64, snr_db: f64) -> f64 {
    swarmsplit::channel::capacity_bps(bandwidth_hz, snr_db)
}

/// One diffusive-metric update from a list of `(phi_gflops, tx_delay_s)`
/// neighbor advertisements; an empty list returns the capability itself.
#[pyfunction]
fn phi_update(capability_gflops: f64, neighbors: Vec<(f64, f64)>) -> f64 {
    let views: Vec<NeighborPhi> = neighbors
        .into_iter()
        .map(|(phi_gflops, tx_delay_s)| NeighborPhi {
            phi_gflops,
            tx_delay_s,
        })
        .collect();
    swarmsplit::diffusive::phi_update(capability_gflops, &views)
}

/// Estimated queue-drain time T/φ in seconds.
#[pyfunction]
fn utilization(total_load_gflops: f64, phi_gflops: f64) -> f64 {
    swarmsplit::allocation::utilization(total_load_gflops, phi_gflops)
}

/// Jain's fairness index, or None for empty/all-zero input.
#[pyfunction]
fn jain_fairness(values: Vec<f64>) -> Option<f64> {
    swarmsplit::metrics::jain_fairness(&values)
}

/// Composite figure of merit TPS·ACC/(AE·AL).
#[pyfunction]
fn figure_of_merit(tps: f64, acc: f64, ae: f64, al: f64) -> f64 {
    swarmsplit::metrics::figure_of_merit(tps, acc, ae, al)
}

/// Exit label ("full", "l1", "l2") for a smoothed load derivative.
#[pyfunction]
fn exit_label(derivative: f64, tau_med: f64, tau_high: f64) -> String {
    swarmsplit::earlyexit::exit_label(derivative, tau_med, tau_high).to_string()
}

#[pymodule]
fn swarmsplit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRunResult>()?;
    m.add_function(wrap_pyfunction!(run_simulation, m)?)?;
    m.add_function(wrap_pyfunction!(path_gain_db, m)?)?;
    m.add_function(wrap_pyfunction!(capacity_bps, m)?)?;
    m.add_function(wrap_pyfunction!(phi_update, m)?)?;
    m.add_function(wrap_pyfunction!(utilization, m)?)?;
    m.add_function(wrap_pyfunction!(jain_fairness, m)?)?;
    m.add_function(wrap_pyfunction!(figure_of_merit, m)?)?;
    m.add_function(wrap_pyfunction!(exit_label, m)?)?;
    Ok(())
}
