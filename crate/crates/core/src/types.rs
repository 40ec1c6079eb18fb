//! Shared domain types: unit aliases, task instances, and node state.
//!
//! Every quantity in the simulator carries explicit units in its name or its
//! alias. Work is measured in GFLOPs (billions of floating-point operations),
//! rates in GFLOPS (GFLOPs per second), and all times in seconds.

use std::collections::{BTreeSet, VecDeque};

use crate::config::ModelProfile;
use crate::earlyexit::ExitLabel;
use crate::mobility::CircularTrajectory;

/// Index of a worker node, dense in `0..worker_count`.
pub type NodeId = usize;
/// Unique task identifier, monotone in creation order within a run.
pub type TaskId = u64;
/// Simulation time or duration in seconds.
pub type Seconds = f64;
/// Distance in meters.
pub type Meters = f64;
/// An amount of work in GFLOPs.
pub type Gflops = f64;
/// A compute rate in GFLOPs per second.
pub type GflopsPerSec = f64;
/// Energy in joules.
pub type Joules = f64;
/// A payload size in bits.
pub type Bits = f64;
/// A link rate in bits per second.
pub type BitsPerSec = f64;
/// A ratio expressed in decibels.
pub type Db = f64;
/// A power level in dB-milliwatts.
pub type Dbm = f64;
/// A frequency in hertz.
pub type Hertz = f64;

/// One inference job travelling through the swarm.
///
/// A task is created at its origin node and processed layer by layer; it may
/// be handed to a neighbor between layers, in which case any partial progress
/// inside the current layer is discarded by the sender. `next_layer` is the
/// 0-based index of the first layer that still has to run; once the task has
/// committed to an early exit it counts on through the exit's branch layers.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskInstance {
    pub task_id: TaskId,
    /// Node the task was generated on.
    pub origin_node: NodeId,
    /// Simulation time of creation in seconds.
    pub created_at_s: Seconds,
    /// 0-based index of the next layer to execute.
    pub next_layer: usize,
    /// Work already done inside `next_layer`, in GFLOPs.
    pub in_layer_progress_gflops: Gflops,
    /// Every node that has ever held this task.
    pub visited_nodes: BTreeSet<NodeId>,
    /// Early-exit branch the task has committed to, if any.
    pub committed_exit: Option<ExitLabel>,
    /// Completion time in seconds, set exactly once.
    pub completed_at_s: Option<Seconds>,
    /// Accuracy of the result, set on completion.
    pub completion_accuracy: Option<f64>,
    /// Earliest time the current holder may work on the task (arrival or
    /// delivery instant).
    pub ready_at_s: Seconds,
    /// Total work ever spent on the task, including later-discarded work.
    pub work_spent_gflops: Gflops,
    /// Partial-layer work thrown away by transfers.
    pub discarded_gflops: Gflops,
}

impl TaskInstance {
    /// A fresh task sitting at `origin` with no progress.
    pub fn new(task_id: TaskId, origin: NodeId, created_at_s: Seconds) -> Self {
        let mut visited = BTreeSet::new();
        visited.insert(origin);
        TaskInstance {
            task_id,
            origin_node: origin,
            created_at_s,
            next_layer: 0,
            in_layer_progress_gflops: 0.0,
            visited_nodes: visited,
            committed_exit: None,
            completed_at_s: None,
            completion_accuracy: None,
            ready_at_s: created_at_s,
            work_spent_gflops: 0.0,
            discarded_gflops: 0.0,
        }
    }

    /// Total number of layers this task will run before finishing, given its
    /// current commitment: the full backbone when uncommitted, or the exit
    /// point plus the exit's branch layers once committed.
    pub fn depth_limit(&self, profile: &ModelProfile) -> usize {
        match self.committed_exit {
            None => profile.layer_count,
            Some(label) => profile.exit_point(label) + profile.exit_branch_layers,
        }
    }

    /// Cost in GFLOPs of the layer indexed by `next_layer`.
    ///
    /// Backbone layers use the profile's per-layer costs; committed branch
    /// layers (indices at or past the exit point) all cost the profile's mean
    /// per-layer GFLOPs.
    pub fn current_layer_cost(&self, profile: &ModelProfile) -> Gflops {
        match self.committed_exit {
            Some(label) if self.next_layer >= profile.exit_point(label) => {
                profile.branch_layer_gflops()
            }
            _ => profile.layer_gflops[self.next_layer],
        }
    }

    /// Work in GFLOPs still required to finish the task from its current
    /// position, accounting for partial progress in the current layer.
    pub fn remaining_gflops(&self, profile: &ModelProfile) -> Gflops {
        let mut total = 0.0;
        match self.committed_exit {
            None => {
                for cost in &profile.layer_gflops[self.next_layer..profile.layer_count] {
                    total += cost;
                }
            }
            Some(label) => {
                let exit = profile.exit_point(label);
                // Backbone layers still ahead of the exit point; empty once
                // the task has entered the branch.
                for cost in &profile.layer_gflops[self.next_layer.min(exit)..exit] {
                    total += cost;
                }
                let branch_done = self.next_layer.saturating_sub(exit);
                let branch_left =
                    profile.exit_branch_layers.saturating_sub(branch_done);
                total += branch_left as f64 * profile.branch_layer_gflops();
            }
        }
        total - self.in_layer_progress_gflops
    }

    /// Size in bits of the activation that must move if the task is handed
    /// off right now: the output of the last finished layer, or the raw input
    /// when no layer has run yet.
    pub fn payload_bits(&self, profile: &ModelProfile) -> Bits {
        let idx = self.next_layer.saturating_sub(1);
        profile.layer_output_bits[idx]
    }
}

/// Working state of one UAV.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeState {
    pub node_id: NodeId,
    /// Local compute capability F_i in GFLOPS.
    pub capability_gflops: GflopsPerSec,
    /// Deterministic flight path.
    pub trajectory: CircularTrajectory,
    /// FIFO task queue; the head is the task being computed.
    pub queue: VecDeque<TaskInstance>,
    /// Diffusive aggregated capability estimate, in GFLOPS.
    pub phi_gflops: GflopsPerSec,
    /// Sum of remaining work over all queued tasks, in GFLOPs.
    pub total_load_gflops: Gflops,
    /// Queue load at the previous decision epoch, for the load derivative.
    pub prev_total_load_gflops: Gflops,
    /// Exponentially smoothed load derivative D_i, in GFLOPs per second.
    pub smoothed_derivative: f64,
    /// Current early-exit label.
    pub exit_label: ExitLabel,
    /// Total energy drawn so far (compute plus radio), in joules.
    pub energy_consumed_j: Joules,
    /// Total work executed on this node, in GFLOPs.
    pub processed_gflops: Gflops,
}

impl NodeState {
    pub fn new(node_id: NodeId, capability_gflops: GflopsPerSec, trajectory: CircularTrajectory) -> Self {
        NodeState {
            node_id,
            capability_gflops,
            trajectory,
            queue: VecDeque::new(),
            phi_gflops: capability_gflops,
            total_load_gflops: 0.0,
            prev_total_load_gflops: 0.0,
            smoothed_derivative: 0.0,
            exit_label: ExitLabel::Full,
            energy_consumed_j: 0.0,
            processed_gflops: 0.0,
        }
    }
}
