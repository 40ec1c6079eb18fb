//! Cross-module invariant suite: every module's documented invariants as
//! standalone automated tests, with property-based generalization where the
//! domain is cheap to sample. Runs well under the whole-suite time budget.

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use swarmsplit::allocation::{
    select_target, strategy_decide, transfer_decision, AllocationDecision, DecisionView,
    NeighborInfo, StrategyKind,
};
use swarmsplit::channel::{
    capacity_bps, crossover_distance_m, neighbor_sets, path_gain_db, tx_delay, ChannelParams,
    LinkBudget,
};
use swarmsplit::config::{validate_config, SimConfig, StrategyProbabilities};
use swarmsplit::diffusive::{phi_update, NeighborPhi};
use swarmsplit::earlyexit::{exit_label, ExitLabel};
use swarmsplit::engine::{run_simulation, run_with_options, RunOptions};
use swarmsplit::metrics::{figure_of_merit, jain_fairness, MetricSummary};
use swarmsplit::mobility::{place_nodes, GeoPosition};

fn default_params() -> ChannelParams {
    ChannelParams::from_config(&SimConfig::default())
}

fn small_validated(workers: usize, secs: f64) -> swarmsplit::config::ValidatedConfig {
    validate_config(SimConfig {
        worker_count: workers,
        max_sim_time_s: secs,
        ..SimConfig::default()
    })
    .expect("valid test config")
}

// ---------------------------------------------------------------- channel

proptest! {
    /// Path gain strictly decreases with distance inside each regime and
    /// never increases across the crossover.
    #[test]
    fn gain_monotone_in_distance(d1 in 1.0f64..2.0e6, factor in 1.001f64..10.0) {
        let params = default_params();
        let d2 = d1 * factor;
        let g1 = path_gain_db(d1, &params).unwrap();
        let g2 = path_gain_db(d2, &params).unwrap();
        prop_assert!(g2 < g1, "gain rose from {g1} to {g2} over {d1} -> {d2}");
    }

    /// Shannon capacity strictly increases with SNR.
    #[test]
    fn capacity_monotone_in_snr(snr in -40.0f64..60.0, gap in 0.01f64..20.0) {
        let lo = capacity_bps(1.0e7, snr);
        let hi = capacity_bps(1.0e7, snr + gap);
        prop_assert!(hi > lo);
    }

    /// Transmission delay is payload over held capacity.
    #[test]
    fn tx_delay_is_linear_in_payload(payload in 0.0f64..1e9, snr in 3.0f64..40.0) {
        let link = LinkBudget {
            snr_db: snr,
            capacity_bps: capacity_bps(1.0e7, snr),
            connected: true,
        };
        let d = tx_delay(payload, &link).unwrap();
        prop_assert!((d - payload / link.capacity_bps).abs() <= 1e-15 * d.max(1.0));
    }

    /// With uniform transmit power, i ∈ M_j ⇔ j ∈ M_i, no self-links, and
    /// each neighbor list is strictly ascending.
    #[test]
    fn connectivity_symmetric(coords in prop::collection::vec((0.0f64..20_000.0, 0.0f64..20_000.0), 2..8)) {
        let positions: Vec<GeoPosition> =
            coords.iter().map(|&(x, y)| GeoPosition { x, y }).collect();
        // Coincident points have no defined link; nudge exact duplicates.
        let mut positions = positions;
        for i in 0..positions.len() {
            for j in (i + 1)..positions.len() {
                if positions[i] == positions[j] {
                    positions[j].x += 0.001 * (j as f64 + 1.0);
                }
            }
        }
        let adj = neighbor_sets(&positions, &default_params());
        for (i, row) in adj.iter().enumerate() {
            prop_assert!(!row.contains(&i), "self-link at {i}");
            prop_assert!(row.windows(2).all(|w| w[0] < w[1]), "unsorted row {i}");
            for &j in row {
                prop_assert!(adj[j].contains(&i), "asymmetric {i}<->{j}");
            }
        }
    }
}

#[test]
fn crossover_seam_is_continuous() {
    let params = default_params();
    let d_c = crossover_distance_m(&params);
    let below = path_gain_db(d_c * (1.0 - 1e-12), &params).unwrap();
    let above = path_gain_db(d_c * (1.0 + 1e-12), &params).unwrap();
    assert!((below - above).abs() < 0.5);
}

// ---------------------------------------------------------------- mobility

proptest! {
    /// Orbit radius is exact and the whole circle stays inside the area.
    #[test]
    fn placement_keeps_orbits_inside_area(seed in 0u64..500, workers in 1usize..20) {
        let cfg = SimConfig {
            worker_count: workers,
            ..SimConfig::default()
        };
        let trajectories = place_nodes(&cfg, seed).unwrap();
        prop_assert_eq!(trajectories.len(), workers);
        for tr in &trajectories {
            for k in 0..16 {
                let t = k as f64 * 7.3;
                let p = tr.position_at(t);
                let r = p.distance_to(&tr.center);
                prop_assert!((r - tr.radius_m).abs() <= 1e-9 * tr.radius_m);
                prop_assert!(p.x >= -1e-9 && p.x <= cfg.area_side_m + 1e-9);
                prop_assert!(p.y >= -1e-9 && p.y <= cfg.area_side_m + 1e-9);
            }
        }
        // Cell sampling is without replacement: distinct centers.
        let mut centers: Vec<(u64, u64)> = trajectories
            .iter()
            .map(|t| (t.center.x.to_bits(), t.center.y.to_bits()))
            .collect();
        centers.sort_unstable();
        centers.dedup();
        prop_assert_eq!(centers.len(), workers, "duplicate trajectory centers");
    }
}

// ---------------------------------------------------------------- diffusive

proptest! {
    /// φ stays positive and is monotone: longer neighbor delays never raise
    /// it, larger own capability strictly raises it.
    #[test]
    fn phi_update_monotonicities(
        capability in 1.0f64..2000.0,
        neighbors in prop::collection::vec((1.0f64..2000.0, 0.0f64..1.0), 0..6),
        extra_delay in 0.001f64..1.0,
    ) {
        let base: Vec<NeighborPhi> = neighbors
            .iter()
            .map(|&(phi, d)| NeighborPhi { phi_gflops: phi, tx_delay_s: d })
            .collect();
        let phi = phi_update(capability, &base);
        prop_assert!(phi > 0.0);

        if !base.is_empty() {
            let mut slower = base.clone();
            slower[0].tx_delay_s += extra_delay;
            prop_assert!(phi_update(capability, &slower) <= phi + 1e-12);
        }

        let richer = phi_update(capability * 1.5, &base);
        prop_assert!(richer > phi);
    }
}

#[test]
fn phi_update_empty_neighborhood_is_identity() {
    for f in [1.0, 128.0, 400.0, 1e6] {
        assert_eq!(phi_update(f, &[]), f);
    }
}

// ---------------------------------------------------------------- allocation

fn neighbor_infos(raw: &[(usize, f64, f64)]) -> Vec<NeighborInfo> {
    raw.iter()
        .map(|&(node_id, utilization_s, queue_gflops)| NeighborInfo {
            node_id,
            utilization_s,
            queue_gflops,
        })
        .collect()
}

proptest! {
    /// select_target is invariant under positive rescaling of every
    /// utilization.
    #[test]
    fn argmin_scale_invariance(
        utils in prop::collection::vec(0.0f64..100.0, 1..10),
        scale in prop::sample::select(vec![1e-9f64, 0.25, 1.0, 7.0, 1e9]),
    ) {
        let base: Vec<(usize, f64)> =
            utils.iter().enumerate().map(|(i, &u)| (i, u)).collect();
        let scaled: Vec<(usize, f64)> =
            base.iter().map(|&(i, u)| (i, u * scale)).collect();
        prop_assert_eq!(select_target(&base), select_target(&scaled));
    }

    /// The γ gate: strict inequality, and γ = ∞ never transfers.
    #[test]
    fn gamma_gate_behaves(u_self in 0.0f64..10.0, u_k in 0.0f64..10.0, gamma in 0.0f64..5.0) {
        let d = transfer_decision(u_self, u_k, gamma, 1, 0);
        let expect_transfer = u_self - u_k > gamma;
        prop_assert_eq!(
            matches!(d, AllocationDecision::Transfer { .. }),
            expect_transfer
        );
        prop_assert_eq!(
            transfer_decision(u_self, u_k, f64::INFINITY, 1, 0),
            AllocationDecision::ProcessLocally
        );
    }

    /// Gate probability zero keeps all randomized strategies local; gate one
    /// makes them offload whenever an eligible neighbor exists. Distributed
    /// and LocalOnly never touch the RNG.
    #[test]
    fn strategy_gates_and_rng_discipline(
        seed in 0u64..1000,
        own_util in 0.0f64..10.0,
        nbrs in prop::collection::vec((1usize..50, 0.0f64..10.0, 0.0f64..500.0), 0..6),
    ) {
        // Dedup ids to keep the neighbor list well-formed.
        let mut seen = BTreeSet::new();
        let raw: Vec<(usize, f64, f64)> = nbrs
            .into_iter()
            .filter(|&(id, _, _)| seen.insert(id))
            .collect();
        let neighbors = neighbor_infos(&raw);
        let visited = BTreeSet::from([0usize]);
        let mk_view = |p: StrategyProbabilities| DecisionView {
            own_utilization_s: own_util,
            own_queue_gflops: own_util * 100.0,
            head_task_id: 9,
            head_visited: &visited,
            neighbors: &neighbors,
            gamma_s: 0.02,
            probabilities: p,
        };

        let closed = mk_view(StrategyProbabilities {
            random: 0.0,
            random_acyclic: 0.0,
            greedy: 0.0,
        });
        let open = mk_view(StrategyProbabilities {
            random: 1.0,
            random_acyclic: 1.0,
            greedy: 1.0,
        });

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for kind in [StrategyKind::Random, StrategyKind::RandomAcyclic, StrategyKind::Greedy] {
            prop_assert_eq!(
                strategy_decide(kind, &closed, &mut rng),
                AllocationDecision::ProcessLocally
            );
            let decision = strategy_decide(kind, &open, &mut rng);
            let has_eligible = match kind {
                StrategyKind::RandomAcyclic => raw.iter().any(|&(id, _, _)| !visited.contains(&id)),
                _ => !raw.is_empty(),
            };
            prop_assert_eq!(matches!(decision, AllocationDecision::Transfer { .. }), has_eligible);
            if let AllocationDecision::Transfer { target_node, .. } = decision {
                prop_assert!(raw.iter().any(|&(id, _, _)| id == target_node));
                if kind == StrategyKind::RandomAcyclic {
                    prop_assert!(!visited.contains(&target_node));
                }
            }
        }

        // Deterministic strategies: two different RNGs, same outcome.
        let view = mk_view(StrategyProbabilities::default());
        for kind in [StrategyKind::LocalOnly, StrategyKind::Distributed] {
            let mut a = ChaCha8Rng::seed_from_u64(seed);
            let mut b = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
            prop_assert_eq!(
                strategy_decide(kind, &view, &mut a),
                strategy_decide(kind, &view, &mut b)
            );
        }
    }
}

// ---------------------------------------------------------------- earlyexit

proptest! {
    /// The τ thresholds partition the derivative axis into exactly the three
    /// labels.
    #[test]
    fn exit_label_partitions_derivative_axis(
        d in -100.0f64..100.0,
        tau_med in 0.1f64..5.0,
        gap in 0.1f64..5.0,
    ) {
        let tau_high = tau_med + gap;
        let label = exit_label(d, tau_med, tau_high);
        let expect = if d <= tau_med {
            ExitLabel::Full
        } else if d <= tau_high {
            ExitLabel::L1
        } else {
            ExitLabel::L2
        };
        prop_assert_eq!(label, expect);
    }
}

// ---------------------------------------------------------------- metrics

proptest! {
    /// Jain's index lies in [1/n, 1], is 1 for equal shares, and is
    /// scale-invariant.
    #[test]
    fn jain_bounds_and_scale(xs in prop::collection::vec(0.01f64..1000.0, 1..20), c in 0.001f64..1000.0) {
        let n = xs.len() as f64;
        let j = jain_fairness(&xs).unwrap();
        prop_assert!(j >= 1.0 / n - 1e-12 && j <= 1.0 + 1e-12, "jain {j} outside bounds");
        let scaled: Vec<f64> = xs.iter().map(|x| x * c).collect();
        let js = jain_fairness(&scaled).unwrap();
        prop_assert!((j - js).abs() <= 1e-9, "scale broke jain: {j} vs {js}");
    }

    /// FOM is strictly monotone in each argument, in the documented
    /// directions.
    #[test]
    fn fom_monotonicities(tps in 0.1f64..1e4, acc in 0.1f64..1.0, ae in 0.1f64..100.0, al in 0.01f64..100.0) {
        let base = figure_of_merit(tps, acc, ae, al);
        prop_assert!(figure_of_merit(tps * 1.1, acc, ae, al) > base);
        prop_assert!(figure_of_merit(tps, (acc * 1.01).min(1.0_f64.next_down()), ae, al) >= base);
        prop_assert!(figure_of_merit(tps, acc, ae * 1.1, al) < base);
        prop_assert!(figure_of_merit(tps, acc, ae, al * 1.1) < base);
    }
}

#[test]
fn metric_summary_uses_pairwise_exclusion() {
    let s = MetricSummary::of([Some(2.0), None, Some(4.0), None]);
    assert_eq!(s.n, 2);
    assert_eq!(s.mean, Some(3.0));
    let empty = MetricSummary::of([None, None]);
    assert_eq!(empty.n, 0);
    assert_eq!(empty.mean, None);
    assert_eq!(empty.ci95, None);
}

// ---------------------------------------------------------------- engine

/// Transfers under Distributed are non-increasing in γ on matched seeds.
#[test]
fn transfer_count_non_increasing_in_gamma() {
    for seed in [7u64, 11, 13] {
        let mut prev = u64::MAX;
        for gamma in [0.0, 0.02, 0.1, f64::INFINITY] {
            let cfg = validate_config(SimConfig {
                worker_count: 20,
                max_sim_time_s: 5.0,
                gamma_threshold: gamma,
                ..SimConfig::default()
            })
            .unwrap();
            let r = run_simulation(&cfg, StrategyKind::Distributed, false, seed);
            assert!(
                r.transfers_started <= prev,
                "seed {seed}: transfers rose to {} at gamma {gamma}",
                r.transfers_started
            );
            prev = r.transfers_started;
        }
        assert_eq!(prev, 0, "gamma = inf must suppress all transfers");
    }
}

/// RandomAcyclic never delivers a task to a node it has already visited.
#[test]
fn random_acyclic_never_revisits_over_full_runs() {
    for seed in [1u64, 2, 3] {
        let cfg = small_validated(20, 5.0);
        let r = run_simulation(&cfg, StrategyKind::RandomAcyclic, false, seed);
        assert!(r.transfers_delivered > 0, "seed {seed}: no transfers exercised");
        assert_eq!(r.revisit_deliveries, 0, "seed {seed}: task revisited a node");
    }
}

/// With early exit disabled, the exit machinery is inert: harsh thresholds
/// and a hot smoothing constant change nothing in the trace.
#[test]
fn early_exit_off_is_bit_inert() {
    let base = SimConfig {
        worker_count: 12,
        max_sim_time_s: 4.0,
        ..SimConfig::default()
    };
    let tuned = validate_config(SimConfig {
        tau_med: 0.001,
        tau_high: 0.002,
        alpha_smoothing: 0.9,
        ..base.clone()
    })
    .unwrap();
    let plain = validate_config(base).unwrap();
    let a = run_simulation(&tuned, StrategyKind::Distributed, false, 21);
    let b = run_simulation(&plain, StrategyKind::Distributed, false, 21);
    assert_eq!(a, b);
}

/// The reported time-averaged backlog is exactly the mean of the per-epoch
/// samples the run recorded.
#[test]
fn mean_remaining_is_epoch_average() {
    let cfg = small_validated(10, 5.0);
    let r = run_simulation(&cfg, StrategyKind::Distributed, false, 4);
    assert!(!r.epochs.is_empty());
    let recomputed: f64 =
        r.epochs.iter().map(|e| e.mean_queue_gflops).sum::<f64>() / r.epochs.len() as f64;
    let reported = r.mean_remaining_gflops.unwrap();
    let rel = (recomputed - reported).abs() / reported.max(1e-30);
    assert!(rel <= 1e-12, "epoch average {recomputed} vs reported {reported}");
}

/// Determinism at the run level: same config and seed, same everything.
#[test]
fn run_results_are_bit_identical_across_repeats() {
    let cfg = small_validated(15, 4.0);
    for strategy in StrategyKind::ALL {
        let a = run_simulation(&cfg, strategy, true, 99);
        let b = run_simulation(&cfg, strategy, true, 99);
        assert_eq!(a, b, "{strategy} diverged across identical runs");
    }
}

// Conservation and ledger checks stay on through a mixed proptest-driven
// set of small scenarios.
proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]
    #[test]
    fn engine_invariants_hold_on_random_small_scenarios(
        workers in 2usize..8,
        arrival_ms in 50.0f64..200.0,
        seed in 0u64..5000,
        strategy_idx in 0usize..5,
        early_exit in any::<bool>(),
    ) {
        let cfg = validate_config(SimConfig {
            worker_count: workers,
            task_arrival_mean_s: arrival_ms / 1000.0,
            max_sim_time_s: 2.0,
            ..SimConfig::default()
        })
        .unwrap();
        let opts = RunOptions {
            strategy: StrategyKind::ALL[strategy_idx],
            early_exit,
            seed,
            verify_invariants: true,
        };
        // run_with_options panics if any internal invariant breaks.
        let r = run_with_options(&cfg, &opts);
        prop_assert_eq!(
            r.transfers_started,
            r.transfers.len() as u64
        );
        prop_assert!(r.completed_tasks <= r.tasks_created);
    }
}

// ---------------------------------------------------------------- csv schema

/// The CSV schemas are stable: exact column names in exact order.
#[test]
fn csv_schema_is_stable() {
    use swarmsplit::experiment::{run_experiment, ExperimentSpec, SuiteName};

    let dir = tempfile::tempdir().unwrap();
    let spec = ExperimentSpec {
        suite: SuiteName::Custom,
        base: SimConfig {
            worker_count: 3,
            max_sim_time_s: 0.5,
            runs: 1,
            ..SimConfig::default()
        },
        base_strategy: StrategyKind::LocalOnly,
        base_early_exit: false,
        sweeps: Vec::new(),
        jobs: 1,
    };
    let out = run_experiment(&spec, dir.path()).unwrap();

    let runs = std::fs::read_to_string(&out.runs_csv).unwrap();
    assert_eq!(
        runs.lines().next().unwrap(),
        "suite,strategy,workers,arrival_ms,area_km,early_exit,seed,completed,\
         mean_latency_s,mean_remaining_gflops,mean_transfer_s,jain,energy_per_task_j,\
         mean_acc,fom"
    );

    let summary = std::fs::read_to_string(&out.summary_csv).unwrap();
    let expected_summary = {
        let metrics = [
            "completed",
            "mean_latency_s",
            "mean_remaining_gflops",
            "mean_transfer_s",
            "jain",
            "energy_per_task_j",
            "mean_acc",
            "fom",
        ];
        let mut cols = vec![
            "suite", "strategy", "workers", "arrival_ms", "area_km", "early_exit", "runs",
        ]
        .into_iter()
        .map(String::from)
        .collect::<Vec<_>>();
        for m in metrics {
            cols.push(format!("{m}_mean"));
            cols.push(format!("{m}_ci95"));
        }
        cols.join(",")
    };
    assert_eq!(summary.lines().next().unwrap(), expected_summary);
}
