//! Deterministic simulator of distributed split DNN inference over a mobile
//! UAV swarm.
//!
//! Worker drones fly circular trajectories over a mission area, receive
//! inference tasks, and either process them locally or hand layer activations
//! to neighbours over capacity-limited air-to-air links. Task placement is
//! driven by a diffusive capacity metric that each node maintains from
//! one-hop gossip, optionally combined with early-exit inference under load.
//! Every run is reproducible: one `u64` seed fixes placement, capabilities,
//! trajectory phases, arrivals, and strategy randomness through independent
//! counter-based RNG streams.
//!
//! Module map:
//!
//! * [`types`] — node, task, and unit-alias primitives.
//! * [`config`] — parameter set, validation, TOML file loading.
//! * [`rng`] — seed → named-substream derivation.
//! * [`channel`] — two-ray air-to-air link budget and capacity.
//! * [`mobility`] — grid placement and circular trajectories.
//! * [`diffusive`] — the gossip capacity metric.
//! * [`allocation`] — task-placement strategies.
//! * [`earlyexit`] — load-adaptive exit-depth selection.
//! * [`engine`] — the fixed-step event loop.
//! * [`metrics`] — fairness, figure of merit, confidence intervals.
//! * [`experiment`] — sweep grids, parallel dispatch, CSV output.

pub mod allocation;
pub mod channel;
pub mod config;
pub mod diffusive;
pub mod earlyexit;
pub mod engine;
pub mod experiment;
pub mod metrics;
pub mod mobility;
pub mod rng;
pub mod types;

pub use allocation::{strategy_decide, AllocationDecision, StrategyKind};
pub use channel::{capacity_bps, path_gain_db, snr_db, ChannelParams, LinkBudget};
pub use config::{validate_config, ModelProfile, SimConfig, ValidatedConfig};
pub use diffusive::{phi_init, phi_update};
pub use earlyexit::ExitLabel;
pub use engine::{run_simulation, RunResult};
pub use experiment::{run_experiment, ExperimentSpec, SuiteName, SweepSpec};
pub use metrics::{figure_of_merit, jain_fairness, MetricSummary};
pub use mobility::{place_nodes, CircularTrajectory, GeoPosition};
pub use types::{NodeId, NodeState, TaskId, TaskInstance};
