//! Offloading decisions: utilization, the γ-threshold rule, and the five
//! allocation strategies under evaluation.
//!
//! All strategies decide about the head of the local queue, once per decision
//! epoch, against the neighbor state most recently advertised (and therefore
//! possibly one epoch stale). The randomized baselines gate on a per-epoch
//! coin flip; Distributed applies the deterministic utilization rule
//! U_i − U_k* > γ with no gate.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::config::StrategyProbabilities;
use crate::types::{Gflops, GflopsPerSec, NodeId, Seconds, TaskId};

/// The five offloading strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    /// Gate 0.2, transfer to a uniformly random neighbor.
    Random,
    /// Gate 0.1, transfer to a uniformly random neighbor the task has not
    /// visited.
    RandomAcyclic,
    /// Gate 0.05, transfer to the neighbor with the least queued work.
    Greedy,
    /// Never transfer.
    LocalOnly,
    /// Deterministic utilization rule on the diffusive metric.
    Distributed,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 5] = [
        StrategyKind::Random,
        StrategyKind::RandomAcyclic,
        StrategyKind::Greedy,
        StrategyKind::LocalOnly,
        StrategyKind::Distributed,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            StrategyKind::Random => "random",
            StrategyKind::RandomAcyclic => "random_acyclic",
            StrategyKind::Greedy => "greedy",
            StrategyKind::LocalOnly => "local_only",
            StrategyKind::Distributed => "distributed",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown strategy {0:?}; expected one of random, random_acyclic, greedy, local_only, distributed")]
pub struct ParseStrategyError(String);

impl FromStr for StrategyKind {
    type Err = ParseStrategyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(StrategyKind::Random),
            "random_acyclic" => Ok(StrategyKind::RandomAcyclic),
            "greedy" => Ok(StrategyKind::Greedy),
            "local_only" => Ok(StrategyKind::LocalOnly),
            "distributed" => Ok(StrategyKind::Distributed),
            other => Err(ParseStrategyError(other.to_string())),
        }
    }
}

/// What a node decides to do with its head task this epoch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AllocationDecision {
    ProcessLocally,
    Transfer { target_node: NodeId, task_id: TaskId },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum AllocationError {
    #[error("cannot select a target from an empty neighbor list")]
    NoNeighbors,
}

/// Estimated queue-drain time U = T/φ, in seconds.
pub fn utilization(total_load_gflops: Gflops, phi_gflops: GflopsPerSec) -> Seconds {
    debug_assert!(phi_gflops > 0.0);
    total_load_gflops / phi_gflops
}

/// The neighbor with minimum advertised utilization; ties break to the
/// lowest node id.
pub fn select_target(
    neighbor_utilizations: &[(NodeId, Seconds)],
) -> Result<NodeId, AllocationError> {
    neighbor_utilizations
        .iter()
        .fold(None::<(NodeId, Seconds)>, |best, &(id, u)| match best {
            None => Some((id, u)),
            Some((bid, bu)) => {
                if u < bu || (u == bu && id < bid) {
                    Some((id, u))
                } else {
                    Some((bid, bu))
                }
            }
        })
        .map(|(id, _)| id)
        .ok_or(AllocationError::NoNeighbors)
}

/// The γ rule: transfer the head task iff the utilization gap strictly
/// exceeds gamma.
pub fn transfer_decision(
    u_self: Seconds,
    u_target: Seconds,
    gamma: Seconds,
    target_node: NodeId,
    task_id: TaskId,
) -> AllocationDecision {
    debug_assert!(gamma >= 0.0);
    if u_self - u_target > gamma {
        AllocationDecision::Transfer { target_node, task_id }
    } else {
        AllocationDecision::ProcessLocally
    }
}

/// One neighbor's advertised state, as seen at decision time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborInfo {
    pub node_id: NodeId,
    /// Advertised utilization U_k, in seconds.
    pub utilization_s: Seconds,
    /// Advertised queue load T_k, in GFLOPs.
    pub queue_gflops: Gflops,
}

/// Everything a strategy may consult when deciding about the head task.
#[derive(Debug, Clone)]
pub struct DecisionView<'a> {
    /// The deciding node's own utilization, from its current φ.
    pub own_utilization_s: Seconds,
    /// The deciding node's queued work.
    pub own_queue_gflops: Gflops,
    pub head_task_id: TaskId,
    /// Nodes the head task has already been held by.
    pub head_visited: &'a BTreeSet<NodeId>,
    /// Current neighbors, ascending by node id.
    pub neighbors: &'a [NeighborInfo],
    pub gamma_s: Seconds,
    pub probabilities: StrategyProbabilities,
}

/// Evaluate `kind` on `view`.
///
/// Randomized strategies draw their gate coin first and, if it passes, one
/// target index; LocalOnly and Distributed consume no randomness, so the
/// per-node strategy stream advances identically across those strategies.
pub fn strategy_decide(
    kind: StrategyKind,
    view: &DecisionView<'_>,
    rng: &mut impl Rng,
) -> AllocationDecision {
    match kind {
        StrategyKind::LocalOnly => AllocationDecision::ProcessLocally,
        StrategyKind::Random => {
            let gate = rng.gen::<f64>() < view.probabilities.random;
            if !gate || view.neighbors.is_empty() {
                return AllocationDecision::ProcessLocally;
            }
            let pick = rng.gen_range(0..view.neighbors.len());
            AllocationDecision::Transfer {
                target_node: view.neighbors[pick].node_id,
                task_id: view.head_task_id,
            }
        }
        StrategyKind::RandomAcyclic => {
            let gate = rng.gen::<f64>() < view.probabilities.random_acyclic;
            if !gate {
                return AllocationDecision::ProcessLocally;
            }
            let eligible: Vec<NodeId> = view
                .neighbors
                .iter()
                .map(|n| n.node_id)
                .filter(|id| !view.head_visited.contains(id))
                .collect();
            if eligible.is_empty() {
                return AllocationDecision::ProcessLocally;
            }
            let pick = rng.gen_range(0..eligible.len());
            AllocationDecision::Transfer {
                target_node: eligible[pick],
                task_id: view.head_task_id,
            }
        }
        StrategyKind::Greedy => {
            let gate = rng.gen::<f64>() < view.probabilities.greedy;
            if !gate || view.neighbors.is_empty() {
                return AllocationDecision::ProcessLocally;
            }
            let least_busy = view
                .neighbors
                .iter()
                .fold(None::<(NodeId, Gflops)>, |best, n| match best {
                    None => Some((n.node_id, n.queue_gflops)),
                    Some((bid, bt)) => {
                        if n.queue_gflops < bt || (n.queue_gflops == bt && n.node_id < bid) {
                            Some((n.node_id, n.queue_gflops))
                        } else {
                            Some((bid, bt))
                        }
                    }
                })
                .map(|(id, _)| id)
                .expect("non-empty neighbors");
            AllocationDecision::Transfer {
                target_node: least_busy,
                task_id: view.head_task_id,
            }
        }
        StrategyKind::Distributed => {
            let utils: Vec<(NodeId, Seconds)> = view
                .neighbors
                .iter()
                .map(|n| (n.node_id, n.utilization_s))
                .collect();
            match select_target(&utils) {
                Err(AllocationError::NoNeighbors) => AllocationDecision::ProcessLocally,
                Ok(target) => {
                    let u_target = utils
                        .iter()
                        .find(|(id, _)| *id == target)
                        .map(|(_, u)| *u)
                        .expect("target came from the list");
                    transfer_decision(
                        view.own_utilization_s,
                        u_target,
                        view.gamma_s,
                        target,
                        view.head_task_id,
                    )
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn neighbors(rows: &[(NodeId, f64, f64)]) -> Vec<NeighborInfo> {
        rows.iter()
            .map(|&(node_id, utilization_s, queue_gflops)| NeighborInfo {
                node_id,
                utilization_s,
                queue_gflops,
            })
            .collect()
    }

    fn view<'a>(
        own_u: f64,
        nbrs: &'a [NeighborInfo],
        visited: &'a BTreeSet<NodeId>,
        gamma: f64,
    ) -> DecisionView<'a> {
        DecisionView {
            own_utilization_s: own_u,
            own_queue_gflops: own_u * 400.0,
            head_task_id: 11,
            head_visited: visited,
            neighbors: nbrs,
            gamma_s: gamma,
            probabilities: StrategyProbabilities::default(),
        }
    }

    #[test]
    fn utilization_examples() {
        assert!((utilization(100.0, 400.0) - 0.25).abs() < 1e-12);
        assert_eq!(utilization(0.0, 400.0), 0.0);
        assert!((utilization(24.0, 240.0) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn select_target_argmin_and_tie_break() {
        assert_eq!(select_target(&[(1, 0.5), (2, 0.3), (3, 0.4)]), Ok(2));
        assert_eq!(select_target(&[(7, 0.2), (3, 0.2)]), Ok(3));
        assert_eq!(select_target(&[]), Err(AllocationError::NoNeighbors));
    }

    #[test]
    fn select_target_is_scale_invariant() {
        let base = [(4, 0.5), (9, 0.31), (2, 0.7), (5, 0.31)];
        let winner = select_target(&base).unwrap();
        for c in [1e-6, 0.5, 3.0, 1e9] {
            let scaled: Vec<(NodeId, f64)> =
                base.iter().map(|&(id, u)| (id, u * c)).collect();
            assert_eq!(select_target(&scaled), Ok(winner), "scale {c}");
        }
    }

    #[test]
    fn gamma_rule_is_strict() {
        let t = |us, uk, g| transfer_decision(us, uk, g, 5, 11);
        assert_eq!(
            t(0.50, 0.25, 0.125),
            AllocationDecision::Transfer { target_node: 5, task_id: 11 }
        );
        assert_eq!(t(0.25, 0.25, 0.125), AllocationDecision::ProcessLocally);
        // Gap exactly gamma: strict inequality keeps the task local. The
        // operands are dyadic so the subtraction is exact in binary.
        assert_eq!(t(0.375, 0.25, 0.125), AllocationDecision::ProcessLocally);
        assert_eq!(t(0.50, 0.25, f64::INFINITY), AllocationDecision::ProcessLocally);
    }

    #[test]
    fn local_only_never_transfers() {
        let nbrs = neighbors(&[(1, 0.0, 0.0)]);
        let visited = BTreeSet::from([0]);
        let v = view(100.0, &nbrs, &visited, 0.02);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100 {
            assert_eq!(
                strategy_decide(StrategyKind::LocalOnly, &v, &mut rng),
                AllocationDecision::ProcessLocally
            );
        }
    }

    #[test]
    fn distributed_follows_gamma_rule() {
        let nbrs = neighbors(&[(1, 0.25, 10.0), (2, 0.40, 20.0)]);
        let visited = BTreeSet::from([0]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let transfer = strategy_decide(StrategyKind::Distributed, &view(0.30, &nbrs, &visited, 0.02), &mut rng);
        assert_eq!(
            transfer,
            AllocationDecision::Transfer { target_node: 1, task_id: 11 }
        );
        let hold = strategy_decide(StrategyKind::Distributed, &view(0.26, &nbrs, &visited, 0.02), &mut rng);
        assert_eq!(hold, AllocationDecision::ProcessLocally);
        // Isolated node: no panic, processes locally.
        let iso = strategy_decide(StrategyKind::Distributed, &view(9.0, &[], &visited, 0.02), &mut rng);
        assert_eq!(iso, AllocationDecision::ProcessLocally);
    }

    #[test]
    fn random_acyclic_excludes_visited_nodes() {
        let nbrs = neighbors(&[(1, 0.1, 5.0), (2, 0.1, 5.0), (3, 0.1, 5.0)]);
        let visited = BTreeSet::from([0, 1, 3]);
        let v = view(10.0, &nbrs, &visited, 0.02);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut transfers = 0;
        for _ in 0..2000 {
            match strategy_decide(StrategyKind::RandomAcyclic, &v, &mut rng) {
                AllocationDecision::Transfer { target_node, .. } => {
                    assert_eq!(target_node, 2, "only unvisited neighbor is 2");
                    transfers += 1;
                }
                AllocationDecision::ProcessLocally => {}
            }
        }
        // Gate probability 0.1 over 2000 trials: expect about 200.
        assert!(transfers > 120 && transfers < 290, "transfers {transfers}");
    }

    #[test]
    fn random_acyclic_exhausted_falls_back_to_local() {
        let nbrs = neighbors(&[(1, 0.1, 5.0), (2, 0.1, 5.0)]);
        let visited = BTreeSet::from([0, 1, 2]);
        let v = view(10.0, &nbrs, &visited, 0.02);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..500 {
            assert_eq!(
                strategy_decide(StrategyKind::RandomAcyclic, &v, &mut rng),
                AllocationDecision::ProcessLocally
            );
        }
    }

    #[test]
    fn greedy_targets_least_queued_work() {
        let nbrs = neighbors(&[(1, 0.9, 30.0), (2, 0.1, 10.0), (3, 0.5, 20.0)]);
        let visited = BTreeSet::from([0]);
        let v = view(10.0, &nbrs, &visited, 0.02);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut transfers = 0;
        for _ in 0..5000 {
            if let AllocationDecision::Transfer { target_node, .. } =
                strategy_decide(StrategyKind::Greedy, &v, &mut rng)
            {
                assert_eq!(target_node, 2);
                transfers += 1;
            }
        }
        // Gate 0.05 over 5000 trials: expect about 250.
        assert!(transfers > 150 && transfers < 360, "transfers {transfers}");
    }

    #[test]
    fn random_gate_rate_matches_probability() {
        let nbrs = neighbors(&[(1, 0.1, 5.0), (2, 0.2, 9.0)]);
        let visited = BTreeSet::from([0]);
        let v = view(10.0, &nbrs, &visited, 0.02);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 10_000;
        let mut transfers = 0;
        let mut hit_each = BTreeSet::new();
        for _ in 0..n {
            if let AllocationDecision::Transfer { target_node, .. } =
                strategy_decide(StrategyKind::Random, &v, &mut rng)
            {
                transfers += 1;
                hit_each.insert(target_node);
            }
        }
        // Gate 0.2: 2000 expected, sigma = 35.8; allow five sigmas.
        assert!((transfers as f64 - 2000.0).abs() < 180.0, "transfers {transfers}");
        assert_eq!(hit_each, BTreeSet::from([1, 2]), "both neighbors reachable");
    }

    #[test]
    fn strategy_names_round_trip() {
        for kind in StrategyKind::ALL {
            assert_eq!(kind.name().parse::<StrategyKind>().unwrap(), kind);
        }
        assert!("fastest".parse::<StrategyKind>().is_err());
    }
}
