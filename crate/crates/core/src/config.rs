//! Simulation configuration: schema, defaults, validation, and the on-disk
//! config-file format.
//!
//! A [`SimConfig`] collects every tunable of a run, including the
//! [`ModelProfile`] describing the split network. Raw configs are untrusted;
//! [`validate_config`] checks every invariant and wraps the result in
//! [`ValidatedConfig`], the only form the engine accepts.

use std::ops::Deref;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Per-strategy gate probabilities for the randomized allocation strategies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyProbabilities {
    /// Probability that Random offloads at a decision epoch.
    pub random: f64,
    /// Probability that RandomAcyclic offloads at a decision epoch.
    pub random_acyclic: f64,
    /// Probability that Greedy offloads at a decision epoch.
    pub greedy: f64,
}

impl Default for StrategyProbabilities {
    fn default() -> Self {
        StrategyProbabilities {
            random: 0.2,
            random_acyclic: 0.1,
            greedy: 0.05,
        }
    }
}

/// Accuracy reached by each exit of the split network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExitAccuracies {
    pub full: f64,
    pub l1: f64,
    pub l2: f64,
}

impl Default for ExitAccuracies {
    fn default() -> Self {
        ExitAccuracies {
            full: 0.95,
            l1: 0.9,
            l2: 0.6,
        }
    }
}

/// Layer indices (1-based depth counts) of the network's exits.
///
/// `full` is the complete backbone; `l1` and `l2` are progressively earlier
/// exits with progressively lower accuracy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExitPoints {
    pub full: usize,
    pub l1: usize,
    pub l2: usize,
}

impl Default for ExitPoints {
    fn default() -> Self {
        ExitPoints { full: 60, l1: 30, l2: 15 }
    }
}

/// Static description of the split DNN being served.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelProfile {
    /// Number of backbone layers.
    pub layer_count: usize,
    /// Work per backbone layer in GFLOPs.
    pub layer_gflops: Vec<f64>,
    /// Output size of each layer in bits; index 0 doubles as the raw input
    /// size, which is what moves when a task is handed off before any layer
    /// has run.
    pub layer_output_bits: Vec<f64>,
    /// Depths of the full, mid, and early exits.
    pub exit_points: ExitPoints,
    /// Extra branch layers an early exit appends after its exit point.
    pub exit_branch_layers: usize,
    /// Accuracy delivered by each exit.
    pub exit_accuracies: ExitAccuracies,
}

impl ModelProfile {
    /// A profile with `layer_count` identical layers.
    pub fn uniform(layer_count: usize, gflops_per_layer: f64, output_bits: f64) -> Self {
        ModelProfile {
            layer_count,
            layer_gflops: vec![gflops_per_layer; layer_count],
            layer_output_bits: vec![output_bits; layer_count],
            exit_points: ExitPoints::default(),
            exit_branch_layers: 3,
            exit_accuracies: ExitAccuracies::default(),
        }
    }

    /// Total backbone work in GFLOPs.
    pub fn total_gflops(&self) -> f64 {
        self.layer_gflops.iter().sum()
    }

    /// Mean backbone layer output size in bits (S̄), the payload size assumed
    /// by the diffusive metric when estimating neighbor transfer delay.
    pub fn mean_output_bits(&self) -> f64 {
        self.layer_output_bits.iter().sum::<f64>() / self.layer_output_bits.len() as f64
    }

    /// Cost of one exit-branch layer: the mean backbone layer cost.
    pub fn branch_layer_gflops(&self) -> f64 {
        self.total_gflops() / self.layer_count as f64
    }

    /// Depth (layer count) of the given exit.
    pub fn exit_point(&self, label: crate::earlyexit::ExitLabel) -> usize {
        use crate::earlyexit::ExitLabel;
        match label {
            ExitLabel::Full => self.exit_points.full,
            ExitLabel::L1 => self.exit_points.l1,
            ExitLabel::L2 => self.exit_points.l2,
        }
    }

    /// Accuracy delivered by the given exit.
    pub fn exit_accuracy(&self, label: crate::earlyexit::ExitLabel) -> f64 {
        use crate::earlyexit::ExitLabel;
        match label {
            ExitLabel::Full => self.exit_accuracies.full,
            ExitLabel::L1 => self.exit_accuracies.l1,
            ExitLabel::L2 => self.exit_accuracies.l2,
        }
    }
}

impl Default for ModelProfile {
    fn default() -> Self {
        ModelProfile::uniform(60, 0.4, 4.0e6)
    }
}

/// Every tunable of a simulation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Number of UAV worker nodes.
    pub worker_count: usize,
    /// Side length of the square operating area, in meters.
    pub area_side_m: f64,
    /// The placement grid is `granularity × granularity` cells.
    pub placement_granularity: usize,
    /// Radius of each node's circular trajectory, in meters.
    pub movement_radius_m: f64,
    /// Tangential flight speed, in meters per second.
    pub speed_mps: f64,
    /// Mean of the node capability distribution, in GFLOPS.
    pub capability_mean_gflops: f64,
    /// Standard deviation of the capability distribution, in GFLOPS.
    pub capability_std_gflops: f64,
    /// Compute energy cost, in joules per GFLOP.
    pub energy_per_gflop_j: f64,
    /// Mean task inter-arrival time per node, in seconds (infinite = no tasks).
    pub task_arrival_mean_s: f64,
    /// Interval between allocation decision epochs, in seconds.
    pub decision_period_s: f64,
    /// Simulation step, in seconds.
    pub sim_step_s: f64,
    /// Simulated horizon, in seconds.
    pub max_sim_time_s: f64,
    /// Independent runs per sweep point.
    pub runs: usize,
    /// Radio transmit power, in dBm.
    pub tx_power_dbm: f64,
    /// Noise floor, in dBm.
    pub noise_dbm: f64,
    /// Minimum SNR for a usable link, in dB.
    pub min_snr_db: f64,
    /// Channel bandwidth, in Hz.
    pub bandwidth_hz: f64,
    /// Utilization-gap threshold γ a transfer must clear, in seconds.
    pub gamma_threshold: f64,
    /// Gate probabilities of the randomized strategies.
    pub strategy_probabilities: StrategyProbabilities,
    /// Smoothing factor α of the load derivative, in (0, 1].
    pub alpha_smoothing: f64,
    /// Load-derivative threshold between Full and L1 labels, in GFLOPs/s.
    pub tau_med: f64,
    /// Load-derivative threshold between L1 and L2 labels, in GFLOPs/s.
    pub tau_high: f64,
    /// Carrier frequency, in Hz.
    pub carrier_hz: f64,
    /// Flight altitude (antenna height of every node), in meters.
    pub altitude_m: f64,
    /// Master seed; all randomness in a run derives from it.
    pub seed: u64,
    /// The split network being served.
    pub model: ModelProfile,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            worker_count: 30,
            area_side_m: 20_000.0,
            placement_granularity: 15,
            movement_radius_m: 1_000.0,
            speed_mps: 75.0,
            capability_mean_gflops: 400.0,
            capability_std_gflops: 100.0,
            energy_per_gflop_j: 0.02,
            task_arrival_mean_s: 0.060,
            decision_period_s: 0.200,
            sim_step_s: 0.001,
            max_sim_time_s: 100.0,
            runs: 50,
            tx_power_dbm: 30.0,
            noise_dbm: -85.0,
            min_snr_db: 3.0,
            bandwidth_hz: 1.0e7,
            gamma_threshold: 0.02,
            strategy_probabilities: StrategyProbabilities::default(),
            alpha_smoothing: 0.3,
            tau_med: 1.5,
            tau_high: 2.5,
            carrier_hz: 2.4e9,
            altitude_m: 100.0,
            seed: 0,
            model: ModelProfile::default(),
        }
    }
}

/// A config every invariant of which has been checked.
///
/// Obtainable only through [`validate_config`]; dereferences to [`SimConfig`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedConfig(SimConfig);

impl Deref for ValidatedConfig {
    type Target = SimConfig;

    fn deref(&self) -> &SimConfig {
        &self.0
    }
}

impl ValidatedConfig {
    pub fn as_inner(&self) -> &SimConfig {
        &self.0
    }

    pub fn into_inner(self) -> SimConfig {
        self.0
    }
}

/// A constraint violation, naming the first offending field.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid config field `{field}`: {reason}")]
pub struct ConfigError {
    pub field: String,
    pub reason: String,
}

impl ConfigError {
    fn new(field: &str, reason: impl Into<String>) -> Self {
        ConfigError {
            field: field.to_string(),
            reason: reason.into(),
        }
    }
}

fn require_positive(field: &str, value: f64) -> Result<(), ConfigError> {
    if value > 0.0 {
        Ok(())
    } else {
        Err(ConfigError::new(field, format!("must be strictly positive, got {value}")))
    }
}

fn require_finite_positive(field: &str, value: f64) -> Result<(), ConfigError> {
    require_positive(field, value)?;
    if value.is_finite() {
        Ok(())
    } else {
        Err(ConfigError::new(field, "must be finite"))
    }
}

/// Check every invariant of `raw`, returning it wrapped on success or an
/// error naming the first violated constraint.
pub fn validate_config(raw: SimConfig) -> Result<ValidatedConfig, ConfigError> {
    let c = &raw;
    if c.worker_count == 0 {
        return Err(ConfigError::new("worker_count", "must be at least 1"));
    }
    require_finite_positive("area_side_m", c.area_side_m)?;
    if c.placement_granularity == 0 {
        return Err(ConfigError::new("placement_granularity", "must be at least 1"));
    }
    require_finite_positive("movement_radius_m", c.movement_radius_m)?;
    require_finite_positive("speed_mps", c.speed_mps)?;
    require_finite_positive("capability_mean_gflops", c.capability_mean_gflops)?;
    require_finite_positive("capability_std_gflops", c.capability_std_gflops)?;
    require_finite_positive("energy_per_gflop_j", c.energy_per_gflop_j)?;
    // Infinite mean inter-arrival is allowed: it means "no tasks".
    require_positive("task_arrival_mean_s", c.task_arrival_mean_s)?;
    require_finite_positive("decision_period_s", c.decision_period_s)?;
    require_finite_positive("sim_step_s", c.sim_step_s)?;
    require_finite_positive("max_sim_time_s", c.max_sim_time_s)?;
    if c.runs == 0 {
        return Err(ConfigError::new("runs", "must be at least 1"));
    }
    if !c.tx_power_dbm.is_finite() {
        return Err(ConfigError::new("tx_power_dbm", "must be finite"));
    }
    if !c.noise_dbm.is_finite() {
        return Err(ConfigError::new("noise_dbm", "must be finite"));
    }
    if !c.min_snr_db.is_finite() {
        return Err(ConfigError::new("min_snr_db", "must be finite"));
    }
    require_finite_positive("bandwidth_hz", c.bandwidth_hz)?;
    if !(c.gamma_threshold >= 0.0) {
        return Err(ConfigError::new(
            "gamma_threshold",
            format!("must be non-negative, got {}", c.gamma_threshold),
        ));
    }
    for (field, p) in [
        ("strategy_probabilities.random", c.strategy_probabilities.random),
        ("strategy_probabilities.random_acyclic", c.strategy_probabilities.random_acyclic),
        ("strategy_probabilities.greedy", c.strategy_probabilities.greedy),
    ] {
        if !(0.0..=1.0).contains(&p) {
            return Err(ConfigError::new(field, format!("must lie in [0, 1], got {p}")));
        }
    }
    if !(c.alpha_smoothing > 0.0 && c.alpha_smoothing <= 1.0) {
        return Err(ConfigError::new(
            "alpha_smoothing",
            format!("must lie in (0, 1], got {}", c.alpha_smoothing),
        ));
    }
    if !(c.tau_med < c.tau_high) {
        return Err(ConfigError::new(
            "tau_med",
            format!("must be strictly below tau_high ({} >= {})", c.tau_med, c.tau_high),
        ));
    }
    require_finite_positive("carrier_hz", c.carrier_hz)?;
    require_finite_positive("altitude_m", c.altitude_m)?;
    let cells = c.placement_granularity * c.placement_granularity;
    if cells < c.worker_count {
        return Err(ConfigError::new(
            "placement_granularity",
            format!(
                "grid has {cells} cells but worker_count is {}; granularity² must cover the swarm",
                c.worker_count
            ),
        ));
    }
    if c.area_side_m < 2.0 * c.movement_radius_m {
        return Err(ConfigError::new(
            "movement_radius_m",
            "trajectory diameter exceeds the operating area",
        ));
    }
    if c.sim_step_s > c.decision_period_s {
        return Err(ConfigError::new(
            "sim_step_s",
            "must not exceed decision_period_s",
        ));
    }

    let m = &c.model;
    if m.layer_count == 0 {
        return Err(ConfigError::new("model.layer_count", "must be at least 1"));
    }
    if m.layer_gflops.len() != m.layer_count {
        return Err(ConfigError::new(
            "model.layer_gflops",
            format!("expected {} entries, got {}", m.layer_count, m.layer_gflops.len()),
        ));
    }
    if m.layer_output_bits.len() != m.layer_count {
        return Err(ConfigError::new(
            "model.layer_output_bits",
            format!("expected {} entries, got {}", m.layer_count, m.layer_output_bits.len()),
        ));
    }
    for (i, g) in m.layer_gflops.iter().enumerate() {
        if !(g.is_finite() && *g > 0.0) {
            return Err(ConfigError::new(
                "model.layer_gflops",
                format!("layer {i} cost must be strictly positive, got {g}"),
            ));
        }
    }
    for (i, s) in m.layer_output_bits.iter().enumerate() {
        if !(s.is_finite() && *s >= 0.0) {
            return Err(ConfigError::new(
                "model.layer_output_bits",
                format!("layer {i} output must be non-negative, got {s}"),
            ));
        }
    }
    let ep = m.exit_points;
    if !(ep.l2 < ep.l1 && ep.l1 < ep.full) {
        return Err(ConfigError::new(
            "model.exit_points",
            format!("must satisfy l2 < l1 < full, got ({}, {}, {})", ep.full, ep.l1, ep.l2),
        ));
    }
    if ep.full != m.layer_count {
        return Err(ConfigError::new(
            "model.exit_points",
            format!("full exit {} must equal layer_count {}", ep.full, m.layer_count),
        ));
    }
    let acc = m.exit_accuracies;
    for (field, a) in [
        ("model.exit_accuracies.full", acc.full),
        ("model.exit_accuracies.l1", acc.l1),
        ("model.exit_accuracies.l2", acc.l2),
    ] {
        if !(a > 0.0 && a <= 1.0) {
            return Err(ConfigError::new(field, format!("must lie in (0, 1], got {a}")));
        }
    }
    if !(acc.l2 < acc.l1 && acc.l1 < acc.full) {
        return Err(ConfigError::new(
            "model.exit_accuracies",
            "must increase strictly with exit depth",
        ));
    }
    Ok(ValidatedConfig(raw))
}

/// Either a single value applied to every layer or an explicit per-layer list.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum PerLayer {
    Uniform(f64),
    List(Vec<f64>),
}

impl PerLayer {
    fn expand(&self, layer_count: usize) -> Vec<f64> {
        match self {
            PerLayer::Uniform(v) => vec![*v; layer_count],
            PerLayer::List(vs) => vs.clone(),
        }
    }
}

/// The `[model]` table of a config file; every key optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileModel {
    pub layer_count: Option<usize>,
    pub layer_gflops: Option<PerLayer>,
    pub layer_output_bits: Option<PerLayer>,
    pub exit_points: Option<ExitPoints>,
    pub exit_branch_layers: Option<usize>,
    pub exit_accuracies: Option<ExitAccuracies>,
}

/// On-disk configuration: TOML, keys named exactly as [`SimConfig`] fields,
/// every key optional. CLI flags override file values, which override the
/// built-in defaults.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub worker_count: Option<usize>,
    pub area_side_m: Option<f64>,
    pub placement_granularity: Option<usize>,
    pub movement_radius_m: Option<f64>,
    pub speed_mps: Option<f64>,
    pub capability_mean_gflops: Option<f64>,
    pub capability_std_gflops: Option<f64>,
    pub energy_per_gflop_j: Option<f64>,
    pub task_arrival_mean_s: Option<f64>,
    pub decision_period_s: Option<f64>,
    pub sim_step_s: Option<f64>,
    pub max_sim_time_s: Option<f64>,
    pub runs: Option<usize>,
    pub tx_power_dbm: Option<f64>,
    pub noise_dbm: Option<f64>,
    pub min_snr_db: Option<f64>,
    pub bandwidth_hz: Option<f64>,
    pub gamma_threshold: Option<f64>,
    pub strategy_probabilities: Option<StrategyProbabilities>,
    pub alpha_smoothing: Option<f64>,
    pub tau_med: Option<f64>,
    pub tau_high: Option<f64>,
    pub carrier_hz: Option<f64>,
    pub altitude_m: Option<f64>,
    pub seed: Option<u64>,
    /// Allocation strategy name; the CLI may override it.
    pub strategy: Option<String>,
    /// Early-exit switch: "on" or "off".
    pub early_exit: Option<String>,
    pub model: Option<FileModel>,
}

impl FileConfig {
    /// Overlay every present key onto `base`.
    pub fn apply(&self, base: &mut SimConfig) -> Result<(), ConfigError> {
        macro_rules! take {
            ($($field:ident),* $(,)?) => {
                $(if let Some(v) = self.$field.clone() { base.$field = v; })*
            };
        }
        take!(
            worker_count,
            area_side_m,
            placement_granularity,
            movement_radius_m,
            speed_mps,
            capability_mean_gflops,
            capability_std_gflops,
            energy_per_gflop_j,
            task_arrival_mean_s,
            decision_period_s,
            sim_step_s,
            max_sim_time_s,
            runs,
            tx_power_dbm,
            noise_dbm,
            min_snr_db,
            bandwidth_hz,
            gamma_threshold,
            strategy_probabilities,
            alpha_smoothing,
            tau_med,
            tau_high,
            carrier_hz,
            altitude_m,
            seed,
        );
        if let Some(fm) = &self.model {
            if let Some(n) = fm.layer_count {
                if n == 0 {
                    return Err(ConfigError::new("model.layer_count", "must be at least 1"));
                }
                base.model.layer_count = n;
                // Re-expand uniform defaults to the new depth; explicit lists
                // below still override.
                base.model.layer_gflops = vec![ModelProfile::default().layer_gflops[0]; n];
                base.model.layer_output_bits = vec![ModelProfile::default().layer_output_bits[0]; n];
            }
            if let Some(g) = &fm.layer_gflops {
                base.model.layer_gflops = g.expand(base.model.layer_count);
            }
            if let Some(s) = &fm.layer_output_bits {
                base.model.layer_output_bits = s.expand(base.model.layer_count);
            }
            if let Some(ep) = fm.exit_points {
                base.model.exit_points = ep;
            }
            if let Some(b) = fm.exit_branch_layers {
                base.model.exit_branch_layers = b;
            }
            if let Some(a) = fm.exit_accuracies {
                base.model.exit_accuracies = a;
            }
        }
        Ok(())
    }

    /// Parse the "on"/"off" early-exit switch, if present.
    pub fn early_exit_flag(&self) -> Result<Option<bool>, ConfigError> {
        match self.early_exit.as_deref() {
            None => Ok(None),
            Some("on") => Ok(Some(true)),
            Some("off") => Ok(Some(false)),
            Some(other) => Err(ConfigError::new(
                "early_exit",
                format!("expected \"on\" or \"off\", got {other:?}"),
            )),
        }
    }
}

/// Parse TOML config text.
pub fn parse_config_toml(text: &str) -> Result<FileConfig, ConfigError> {
    toml::from_str(text).map_err(|e| ConfigError {
        field: "config".to_string(),
        reason: format!("cannot parse config: {e}"),
    })
}

/// Load a TOML config file.
pub fn load_config_file(path: &Path) -> Result<FileConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
        field: "config".to_string(),
        reason: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_config_toml(&text).map_err(|e| ConfigError {
        field: "config".to_string(),
        reason: format!("{} (in {})", e.reason, path.display()),
    })
}
