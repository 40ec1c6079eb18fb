//! The fixed-step simulation loop.
//!
//! Computation and radio transfers advance every `sim_step_s`; decision
//! epochs fire every `decision_period_s` and are where adjacency is
//! refreshed, φ/U advertisements are exchanged, φ and the early-exit label
//! are updated, and allocation strategies run. A single run is strictly
//! single-threaded and fully determined by (config, strategy, early-exit
//! flag, seed); node iteration is id-ascending everywhere.
//!
//! Within one step, in order: decision epoch (if due at the step's start
//! instant), task arrivals, transfer progression, then compute progression.
//! Compute and transfer events (layer boundaries, completions, deliveries)
//! happen at exact sub-step times, so service times and latencies carry no
//! step-quantization error.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp;

use crate::allocation::{
    strategy_decide, utilization, AllocationDecision, DecisionView, NeighborInfo, StrategyKind,
};
use crate::channel::{link_matrix, neighbor_sets_from_matrix, ChannelParams, LinkBudget};
use crate::config::ValidatedConfig;
use crate::diffusive::{phi_init, phi_update, NeighborPhi, PhiView};
use crate::earlyexit::{exit_label, load_derivative, smooth, ExitLabel};
use crate::metrics::{figure_of_merit, jain_fairness, FairnessInput};
use crate::mobility::place_nodes;
use crate::rng::{sample_capability, substream, StreamKind};
use crate::types::{
    Bits, BitsPerSec, Gflops, Joules, NodeId, NodeState, Seconds, TaskId, TaskInstance,
};

/// A task currently on the air.
#[derive(Debug, Clone, PartialEq)]
pub struct InFlightTransfer {
    pub task: TaskInstance,
    pub from_node: NodeId,
    pub to_node: NodeId,
    /// Bits that must move: the last finished layer's output, or the raw
    /// input when no layer has run.
    pub payload_bits: Bits,
    /// Rate sampled at transfer start and held for its whole duration.
    pub capacity_bps: BitsPerSec,
    pub remaining_bits: Bits,
    pub started_at_s: Seconds,
    /// Index of this transfer's row in the run's transfer log.
    record_idx: usize,
}

/// Immutable log row for one transfer attempt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferRecord {
    pub from_node: NodeId,
    pub to_node: NodeId,
    pub payload_bits: Bits,
    pub capacity_bps: BitsPerSec,
    /// Radio energy charged to the sender at start (never refunded).
    pub energy_j: Joules,
    pub started_at_s: Seconds,
    /// Air time, set on delivery only.
    pub duration_s: Option<Seconds>,
    pub delivered: bool,
}

/// Swarm-level state sampled at each decision epoch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochSample {
    pub t_s: Seconds,
    /// Σ_i T_i / worker_count at the epoch instant, before decisions.
    pub mean_queue_gflops: Gflops,
    pub tasks_in_queues: u64,
    pub tasks_in_flight: u64,
    pub tasks_created: u64,
    pub tasks_completed: u64,
}

/// Per-node end-of-run summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeSummary {
    pub node_id: NodeId,
    pub capability_gflops: f64,
    pub processed_gflops: Gflops,
    pub energy_j: Joules,
    pub final_queue_gflops: Gflops,
    pub final_queue_len: usize,
}

/// Everything a single run produces.
///
/// Metrics that would be undefined (no completed tasks, no transfers, zero
/// processed work) are `None`, never NaN, so results compare bitwise.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub completed_tasks: u64,
    pub tasks_created: u64,
    pub mean_latency_s: Option<f64>,
    /// Time average over decision epochs of Σ_i T_i / worker_count.
    pub mean_remaining_gflops: Option<f64>,
    pub mean_transfer_time_s: Option<f64>,
    pub jain_fairness: Option<f64>,
    pub energy_per_task_j: Option<f64>,
    pub mean_accuracy: Option<f64>,
    pub fom: Option<f64>,
    pub total_energy_j: Joules,
    pub total_processed_gflops: Gflops,
    pub transfers_started: u64,
    pub transfers_delivered: u64,
    pub transfers_aborted: u64,
    /// Deliveries to a node already in the task's visited set.
    pub revisit_deliveries: u64,
    pub per_node: Vec<NodeSummary>,
    pub epochs: Vec<EpochSample>,
    pub transfers: Vec<TransferRecord>,
}

/// Knobs of [`run_with_options`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub strategy: StrategyKind,
    pub early_exit: bool,
    pub seed: u64,
    /// Recheck internal invariants (load bookkeeping, task conservation) at
    /// every decision epoch; meant for tests, costs extra time.
    pub verify_invariants: bool,
}

/// Simulate one run; the common entry point.
pub fn run_simulation(
    config: &ValidatedConfig,
    strategy: StrategyKind,
    early_exit: bool,
    seed: u64,
) -> RunResult {
    run_with_options(
        config,
        &RunOptions {
            strategy,
            early_exit,
            seed,
            verify_invariants: false,
        },
    )
}

/// Simulate one run with explicit options.
pub fn run_with_options(config: &ValidatedConfig, opts: &RunOptions) -> RunResult {
    Simulation::new(config, opts).run()
}

/// One node plus its engine-side bookkeeping.
struct Worker {
    state: NodeState,
    strategy_rng: ChaCha8Rng,
    arrival_rng: ChaCha8Rng,
    /// Distribution of inter-arrival gaps; `None` when the mean is infinite.
    arrival_dist: Option<Exp<f64>>,
    next_arrival_s: Seconds,
    /// A node may have at most one transfer on the air.
    outgoing_transfer: bool,
}

struct Simulation<'a> {
    cfg: &'a ValidatedConfig,
    opts: RunOptions,
    params: ChannelParams,
    workers: Vec<Worker>,
    transfers: Vec<InFlightTransfer>,
    next_task_id: TaskId,
    tasks_created: u64,
    completed_tasks: u64,
    latency_sum: f64,
    accuracy_sum: f64,
    transfers_started: u64,
    transfers_delivered: u64,
    transfers_aborted: u64,
    revisit_deliveries: u64,
    epochs: Vec<EpochSample>,
    records: Vec<TransferRecord>,
}

impl<'a> Simulation<'a> {
    fn new(cfg: &'a ValidatedConfig, opts: &RunOptions) -> Self {
        let seed = opts.seed;
        let trajectories =
            place_nodes(cfg, seed).expect("validated config fits the placement grid");
        let workers = trajectories
            .into_iter()
            .enumerate()
            .map(|(node_id, trajectory)| {
                let mut capability_rng = substream(seed, StreamKind::Capability, node_id);
                let capability = sample_capability(
                    &mut capability_rng,
                    cfg.capability_mean_gflops,
                    cfg.capability_std_gflops,
                );
                let mut state = NodeState::new(node_id, capability, trajectory);
                state.phi_gflops = phi_init(capability).expect("capability draws are positive");
                let mut arrival_rng = substream(seed, StreamKind::Arrivals, node_id);
                let arrival_dist = if cfg.task_arrival_mean_s.is_finite() {
                    Some(Exp::new(1.0 / cfg.task_arrival_mean_s).expect("positive rate"))
                } else {
                    None
                };
                let next_arrival_s = match arrival_dist {
                    Some(dist) => arrival_rng.sample(dist),
                    None => f64::INFINITY,
                };
                Worker {
                    state,
                    strategy_rng: substream(seed, StreamKind::Strategy, node_id),
                    arrival_rng,
                    arrival_dist,
                    next_arrival_s,
                    outgoing_transfer: false,
                }
            })
            .collect();
        Simulation {
            cfg,
            opts: *opts,
            params: ChannelParams::from_config(cfg),
            workers,
            transfers: Vec::new(),
            next_task_id: 0,
            tasks_created: 0,
            completed_tasks: 0,
            latency_sum: 0.0,
            accuracy_sum: 0.0,
            transfers_started: 0,
            transfers_delivered: 0,
            transfers_aborted: 0,
            revisit_deliveries: 0,
            epochs: Vec::new(),
            records: Vec::new(),
        }
    }

    fn run(mut self) -> RunResult {
        let dt = self.cfg.sim_step_s;
        let total_steps = (self.cfg.max_sim_time_s / dt).round() as u64;
        let steps_per_epoch = ((self.cfg.decision_period_s / dt).round() as u64).max(1);

        for k in 0..total_steps {
            let t0 = k as f64 * dt;
            let t1 = (k + 1) as f64 * dt;
            if k > 0 && k % steps_per_epoch == 0 {
                self.decision_epoch(t0);
            }
            self.generate_arrivals(t1);
            self.advance_transfers(t0, t1);
            for i in 0..self.workers.len() {
                self.advance_compute(i, t0, t1);
            }
        }
        if self.opts.verify_invariants {
            self.check_invariants();
        }
        self.finish()
    }

    /// Append tasks arriving up to and including `t1` to their origin queues.
    fn generate_arrivals(&mut self, t1: Seconds) {
        let profile = &self.cfg.model;
        for w in &mut self.workers {
            let Some(dist) = w.arrival_dist else { continue };
            while w.next_arrival_s <= t1 {
                let task = TaskInstance::new(self.next_task_id, w.state.node_id, w.next_arrival_s);
                self.next_task_id += 1;
                self.tasks_created += 1;
                w.state.total_load_gflops += task.remaining_gflops(profile);
                w.state.queue.push_back(task);
                w.next_arrival_s += w.arrival_rng.sample(dist);
            }
        }
    }

    /// One decision epoch at instant `t0`: sample swarm state, refresh
    /// adjacency, exchange advertisements, update φ and the exit label, then
    /// let every node decide about its head task (id order).
    fn decision_epoch(&mut self, t0: Seconds) {
        let n = self.workers.len();
        let profile = &self.cfg.model;

        // State sample before anything changes.
        let total_load: f64 = self.workers.iter().map(|w| w.state.total_load_gflops).sum();
        self.epochs.push(EpochSample {
            t_s: t0,
            mean_queue_gflops: total_load / n as f64,
            tasks_in_queues: self.workers.iter().map(|w| w.state.queue.len() as u64).sum(),
            tasks_in_flight: self.transfers.len() as u64,
            tasks_created: self.tasks_created,
            tasks_completed: self.completed_tasks,
        });
        if self.opts.verify_invariants {
            self.check_invariants();
        }

        // Adjacency and link budgets from current positions.
        let positions: Vec<_> = self
            .workers
            .iter()
            .map(|w| w.state.trajectory.position_at(t0))
            .collect();
        let matrix = link_matrix(&positions, &self.params);
        let adjacency = neighbor_sets_from_matrix(&matrix);

        // Everyone advertises (φ, U, T) as of this instant; decisions and φ
        // updates below read these snapshots, making the exchange
        // order-independent across nodes.
        struct Advert {
            phi: PhiView,
            utilization_s: f64,
            queue_gflops: f64,
        }
        let adverts: Vec<Advert> = self
            .workers
            .iter()
            .map(|w| Advert {
                phi: PhiView {
                    node_id: w.state.node_id,
                    phi_gflops: w.state.phi_gflops,
                    advertised_at_s: t0,
                },
                utilization_s: utilization(w.state.total_load_gflops, w.state.phi_gflops),
                queue_gflops: w.state.total_load_gflops,
            })
            .collect();

        // φ update from advertised neighbor values and current link delays;
        // the reference payload is the mean layer output size.
        let mean_bits = profile.mean_output_bits();
        for i in 0..n {
            let neighbor_phis: Vec<NeighborPhi> = adjacency[i]
                .iter()
                .map(|&k| {
                    let capacity = matrix[i][k].expect("neighbor implies link").capacity_bps;
                    NeighborPhi {
                        phi_gflops: adverts[k].phi.phi_gflops,
                        tx_delay_s: mean_bits / capacity,
                    }
                })
                .collect();
            let w = &mut self.workers[i];
            w.state.phi_gflops = phi_update(w.state.capability_gflops, &neighbor_phis);
        }

        // Congestion estimate and exit label.
        if self.opts.early_exit {
            for w in &mut self.workers {
                let delta = load_derivative(
                    w.state.total_load_gflops,
                    w.state.prev_total_load_gflops,
                    self.cfg.decision_period_s,
                );
                w.state.smoothed_derivative =
                    smooth(w.state.smoothed_derivative, delta, self.cfg.alpha_smoothing);
                w.state.exit_label =
                    exit_label(w.state.smoothed_derivative, self.cfg.tau_med, self.cfg.tau_high);
                w.state.prev_total_load_gflops = w.state.total_load_gflops;
            }
        }

        // Allocation decisions, id order. A node decides only when it has a
        // head task that is not already exit-committed (a committed task's
        // branch activations have no defined payload size) and no transfer of
        // its own on the air.
        for i in 0..n {
            let decision = {
                let w = &mut self.workers[i];
                let Some(head) = w.state.queue.front() else { continue };
                if w.outgoing_transfer || head.committed_exit.is_some() {
                    continue;
                }
                let neighbor_infos: Vec<NeighborInfo> = adjacency[i]
                    .iter()
                    .map(|&k| NeighborInfo {
                        node_id: k,
                        utilization_s: adverts[k].utilization_s,
                        queue_gflops: adverts[k].queue_gflops,
                    })
                    .collect();
                let view = DecisionView {
                    own_utilization_s: utilization(w.state.total_load_gflops, w.state.phi_gflops),
                    own_queue_gflops: w.state.total_load_gflops,
                    head_task_id: head.task_id,
                    head_visited: &head.visited_nodes,
                    neighbors: &neighbor_infos,
                    gamma_s: self.cfg.gamma_threshold,
                    probabilities: self.cfg.strategy_probabilities,
                };
                strategy_decide(self.opts.strategy, &view, &mut w.strategy_rng)
            };
            if let AllocationDecision::Transfer { target_node, task_id } = decision {
                debug_assert!(adjacency[i].contains(&target_node));
                let link = matrix[i][target_node].expect("strategy targets are neighbors");
                self.start_transfer(i, target_node, task_id, link, t0);
            }
        }
    }

    /// Pop the sender's head task, discard its partial layer progress, charge
    /// the radio energy up front, and put the task on the air.
    fn start_transfer(
        &mut self,
        from: NodeId,
        to: NodeId,
        task_id: TaskId,
        link: LinkBudget,
        t0: Seconds,
    ) {
        let profile = &self.cfg.model;
        let w = &mut self.workers[from];
        let mut task = w.state.queue.pop_front().expect("decision implies a head task");
        debug_assert_eq!(task.task_id, task_id);
        w.state.total_load_gflops -= task.remaining_gflops(profile);

        // Partial-work discard: the layer restarts at the destination.
        task.discarded_gflops += task.in_layer_progress_gflops;
        task.in_layer_progress_gflops = 0.0;

        let payload = task.payload_bits(profile);
        let tx_seconds = payload / link.capacity_bps;
        let p_watts = 10.0_f64.powf((self.params.tx_power_dbm - 30.0) / 10.0);
        let energy = tx_seconds * p_watts;
        w.state.energy_consumed_j += energy;
        w.outgoing_transfer = true;

        let record_idx = self.records.len();
        self.records.push(TransferRecord {
            from_node: from,
            to_node: to,
            payload_bits: payload,
            capacity_bps: link.capacity_bps,
            energy_j: energy,
            started_at_s: t0,
            duration_s: None,
            delivered: false,
        });
        self.transfers.push(InFlightTransfer {
            task,
            from_node: from,
            to_node: to,
            payload_bits: payload,
            capacity_bps: link.capacity_bps,
            remaining_bits: payload,
            started_at_s: t0,
            record_idx,
        });
        self.transfers_started += 1;
    }

    /// Advance all in-flight transfers across [t0, t1]: abort any whose link
    /// has dropped below the minimum SNR (task back to the sender's tail,
    /// energy not refunded), deliver those that finish within the step at
    /// their exact completion instant.
    fn advance_transfers(&mut self, t0: Seconds, t1: Seconds) {
        let profile = &self.cfg.model;
        let mut i = 0;
        while i < self.transfers.len() {
            let xfer = &self.transfers[i];
            let from = xfer.from_node;
            let to = xfer.to_node;
            let pos_from = self.workers[from].state.trajectory.position_at(t0);
            let pos_to = self.workers[to].state.trajectory.position_at(t0);
            let link_now = LinkBudget::between(pos_from, pos_to, &self.params)
                .expect("distinct trajectories keep nodes apart");

            if !link_now.connected {
                // Abort: the task rejoins the sender's queue at the tail.
                let mut xfer = self.transfers.remove(i);
                xfer.task.ready_at_s = t0;
                let w = &mut self.workers[from];
                w.state.total_load_gflops += xfer.task.remaining_gflops(profile);
                w.state.queue.push_back(xfer.task);
                w.outgoing_transfer = false;
                self.records[xfer.record_idx].delivered = false;
                self.transfers_aborted += 1;
                continue;
            }

            let drained = self.transfers[i].capacity_bps * (t1 - t0);
            if self.transfers[i].remaining_bits <= drained {
                let mut xfer = self.transfers.remove(i);
                let t_delivered = if xfer.payload_bits > 0.0 {
                    t0 + xfer.remaining_bits / xfer.capacity_bps
                } else {
                    t0
                };
                xfer.remaining_bits = 0.0;
                if !xfer.task.visited_nodes.insert(to) {
                    self.revisit_deliveries += 1;
                }
                xfer.task.ready_at_s = t_delivered;
                let receiver = &mut self.workers[to];
                receiver.state.total_load_gflops += xfer.task.remaining_gflops(profile);
                receiver.state.queue.push_back(xfer.task);
                self.workers[from].outgoing_transfer = false;
                let record = &mut self.records[xfer.record_idx];
                record.delivered = true;
                record.duration_s = Some(t_delivered - xfer.started_at_s);
                self.transfers_delivered += 1;
                continue;
            }

            self.transfers[i].remaining_bits -= drained;
            i += 1;
        }
    }

    /// Run node `i`'s processor across [t0, t1]: single-task FIFO service at
    /// capability F, with layer boundaries, exit commitment, and completions
    /// resolved at exact sub-step times.
    fn advance_compute(&mut self, i: NodeId, t0: Seconds, t1: Seconds) {
        let profile = &self.cfg.model;
        let early_exit = self.opts.early_exit;
        let joules_per_gflop = self.cfg.energy_per_gflop_j;
        let w = &mut self.workers[i];
        let capability = w.state.capability_gflops;
        let mut t_cur = t0;

        while let Some(head) = w.state.queue.front_mut() {
            let start = t_cur.max(head.ready_at_s);
            if start >= t1 {
                break;
            }
            let layer_cost = head.current_layer_cost(profile);
            let needed = layer_cost - head.in_layer_progress_gflops;
            let time_needed = needed / capability;
            let available = t1 - start;

            if time_needed > available {
                // Partial layer progress; the step ends mid-layer.
                let done = capability * available;
                head.in_layer_progress_gflops += done;
                head.work_spent_gflops += done;
                w.state.total_load_gflops -= done;
                w.state.processed_gflops += done;
                w.state.energy_consumed_j += done * joules_per_gflop;
                break;
            }

            // The layer finishes inside this step.
            head.in_layer_progress_gflops = 0.0;
            head.next_layer += 1;
            head.work_spent_gflops += needed;
            w.state.total_load_gflops -= needed;
            w.state.processed_gflops += needed;
            w.state.energy_consumed_j += needed * joules_per_gflop;
            t_cur = start + time_needed;

            // Exit commitment is checked at layer boundaries: if this node's
            // current label exits exactly here, the task binds to it and its
            // remaining work shrinks to the exit branch.
            if early_exit && head.committed_exit.is_none() {
                let label = w.state.exit_label;
                let commits = match label {
                    ExitLabel::Full => false,
                    ExitLabel::L1 => head.next_layer == profile.exit_points.l1,
                    ExitLabel::L2 => head.next_layer == profile.exit_points.l2,
                };
                if commits {
                    let before = head.remaining_gflops(profile);
                    head.committed_exit = Some(label);
                    let after = head.remaining_gflops(profile);
                    w.state.total_load_gflops += after - before;
                }
            }

            if head.next_layer == head.depth_limit(profile) {
                let mut task = w.state.queue.pop_front().expect("head exists");
                task.completed_at_s = Some(t_cur);
                let accuracy = profile.exit_accuracy(task.committed_exit.unwrap_or(ExitLabel::Full));
                task.completion_accuracy = Some(accuracy);
                if self.opts.verify_invariants {
                    // Work conservation: the task was charged exactly its
                    // committed depth plus whatever partial-layer progress
                    // mid-layer handoffs discarded.
                    let nominal: f64 = match task.committed_exit {
                        None => profile.total_gflops(),
                        Some(label) => profile.layer_gflops[..profile.exit_point(label)]
                            .iter()
                            .sum::<f64>()
                            + profile.exit_branch_layers as f64 * profile.branch_layer_gflops(),
                    };
                    let slack = task.work_spent_gflops - nominal - task.discarded_gflops;
                    assert!(
                        slack.abs() <= 1e-6,
                        "task {} work ledger drift {slack} (spent {}, nominal {nominal}, discarded {})",
                        task.task_id,
                        task.work_spent_gflops,
                        task.discarded_gflops
                    );
                    assert!(
                        task.work_spent_gflops >= nominal - 1e-6,
                        "task {} completed below its committed depth",
                        task.task_id
                    );
                    if task.discarded_gflops == 0.0 {
                        assert!(
                            (task.work_spent_gflops - nominal).abs() <= 1e-6,
                            "task {} overcharged without any discard",
                            task.task_id
                        );
                    }
                }
                self.completed_tasks += 1;
                self.latency_sum += t_cur - task.created_at_s;
                self.accuracy_sum += accuracy;
            }
        }
    }

    /// Expensive cross-checks of the incremental bookkeeping.
    fn check_invariants(&self) {
        let profile = &self.cfg.model;
        let mut queued: u64 = 0;
        for w in &self.workers {
            let recomputed: f64 = w
                .state
                .queue
                .iter()
                .map(|t| t.remaining_gflops(profile))
                .sum();
            let drift = (recomputed - w.state.total_load_gflops).abs();
            assert!(
                drift <= 1e-6,
                "node {} load drift {drift} (incremental {}, recomputed {recomputed})",
                w.state.node_id,
                w.state.total_load_gflops
            );
            queued += w.state.queue.len() as u64;
            assert!(w.state.phi_gflops > 0.0);
        }
        let accounted = self.completed_tasks + queued + self.transfers.len() as u64;
        assert_eq!(
            self.tasks_created, accounted,
            "task conservation violated: created {} vs completed+queued+in-flight {}",
            self.tasks_created, accounted
        );
    }

    fn finish(self) -> RunResult {
        let per_node: Vec<NodeSummary> = self
            .workers
            .iter()
            .map(|w| NodeSummary {
                node_id: w.state.node_id,
                capability_gflops: w.state.capability_gflops,
                processed_gflops: w.state.processed_gflops,
                energy_j: w.state.energy_consumed_j,
                final_queue_gflops: w.state.total_load_gflops,
                final_queue_len: w.state.queue.len(),
            })
            .collect();

        let total_energy_j: f64 = per_node.iter().map(|s| s.energy_j).sum();
        let total_processed_gflops: f64 = per_node.iter().map(|s| s.processed_gflops).sum();

        let completed = self.completed_tasks;
        let mean_latency_s = (completed > 0).then(|| self.latency_sum / completed as f64);
        let mean_accuracy = (completed > 0).then(|| self.accuracy_sum / completed as f64);
        let energy_per_task_j = (completed > 0).then(|| total_energy_j / completed as f64);

        let mean_remaining_gflops = (!self.epochs.is_empty()).then(|| {
            self.epochs.iter().map(|e| e.mean_queue_gflops).sum::<f64>()
                / self.epochs.len() as f64
        });

        let delivered_durations: Vec<f64> = self
            .records
            .iter()
            .filter_map(|r| r.duration_s)
            .collect();
        let mean_transfer_time_s = (!delivered_durations.is_empty()).then(|| {
            delivered_durations.iter().sum::<f64>() / delivered_durations.len() as f64
        });

        let fairness = FairnessInput {
            normalized_work: per_node
                .iter()
                .map(|s| s.processed_gflops / s.capability_gflops)
                .collect(),
        };
        let jain = fairness.jain();

        let fom = match (mean_latency_s, mean_accuracy, energy_per_task_j) {
            (Some(al), Some(acc), Some(ae)) if al > 0.0 && ae > 0.0 => {
                let tps = completed as f64 / self.cfg.max_sim_time_s;
                Some(figure_of_merit(tps, acc, ae, al))
            }
            _ => None,
        };
        debug_assert_eq!(jain, jain_fairness(&fairness.normalized_work));

        RunResult {
            completed_tasks: completed,
            tasks_created: self.tasks_created,
            mean_latency_s,
            mean_remaining_gflops,
            mean_transfer_time_s,
            jain_fairness: jain,
            energy_per_task_j,
            mean_accuracy,
            fom,
            total_energy_j,
            total_processed_gflops,
            transfers_started: self.transfers_started,
            transfers_delivered: self.transfers_delivered,
            transfers_aborted: self.transfers_aborted,
            revisit_deliveries: self.revisit_deliveries,
            per_node,
            epochs: self.epochs,
            transfers: self.records,
        }
    }
}
