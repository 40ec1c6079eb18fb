//! Congestion-driven early-exit control.
//!
//! Each node tracks how fast its queue load is growing: the raw derivative
//! ΔT = (T_t − T_{t−1})/Δt is smoothed into D by an EWMA, and D selects an
//! exit label — Full when the queue is stable, L1 under moderate growth, L2
//! under heavy growth. Tasks consult the label when their computation crosses
//! an exit-point layer boundary and, on a match, commit: they run the exit's
//! short branch instead of the rest of the backbone and finish with the
//! exit's (lower) accuracy.

use std::fmt;

use crate::config::ModelProfile;

/// A node's current inference-depth directive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExitLabel {
    /// Run the whole backbone.
    Full,
    /// Exit at the mid network exit.
    L1,
    /// Exit at the earliest exit.
    L2,
}

impl fmt::Display for ExitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExitLabel::Full => write!(f, "full"),
            ExitLabel::L1 => write!(f, "l1"),
            ExitLabel::L2 => write!(f, "l2"),
        }
    }
}

/// Smoothed congestion estimate plus the label it currently selects.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExitState {
    /// D, in GFLOPs per second.
    pub smoothed_derivative: f64,
    pub label: ExitLabel,
}

impl Default for ExitState {
    fn default() -> Self {
        ExitState {
            smoothed_derivative: 0.0,
            label: ExitLabel::Full,
        }
    }
}

/// Raw load derivative ΔT = (T_now − T_prev)/dt, in GFLOPs per second.
pub fn load_derivative(t_now_gflops: f64, t_prev_gflops: f64, dt_s: f64) -> f64 {
    debug_assert!(dt_s > 0.0);
    (t_now_gflops - t_prev_gflops) / dt_s
}

/// EWMA step D ← D + α(ΔT − D).
pub fn smooth(d_prev: f64, delta: f64, alpha: f64) -> f64 {
    debug_assert!(alpha > 0.0 && alpha <= 1.0);
    d_prev + alpha * (delta - d_prev)
}

/// Map the smoothed derivative to a label; both thresholds are inclusive on
/// the lower branch.
pub fn exit_label(d: f64, tau_med: f64, tau_high: f64) -> ExitLabel {
    debug_assert!(tau_med < tau_high);
    if d <= tau_med {
        ExitLabel::Full
    } else if d <= tau_high {
        ExitLabel::L1
    } else {
        ExitLabel::L2
    }
}

/// How deep a task committed to `label` runs: the last backbone layer it
/// executes and the extra branch layers appended after it.
pub fn effective_depth(label: ExitLabel, profile: &ModelProfile) -> (usize, usize) {
    match label {
        ExitLabel::Full => (profile.exit_points.full, 0),
        ExitLabel::L1 => (profile.exit_points.l1, profile.exit_branch_layers),
        ExitLabel::L2 => (profile.exit_points.l2, profile.exit_branch_layers),
    }
}

/// Accuracy delivered when completing through `label`'s exit.
pub fn exit_accuracy(label: ExitLabel, profile: &ModelProfile) -> f64 {
    profile.exit_accuracy(label)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_examples() {
        assert!((load_derivative(120.0, 100.0, 0.2) - 100.0).abs() < 1e-12);
        assert_eq!(load_derivative(100.0, 100.0, 0.2), 0.0);
        assert!((load_derivative(80.0, 100.0, 0.2) + 100.0).abs() < 1e-12);
    }

    #[test]
    fn smoothing_examples() {
        assert!((smooth(0.0, 100.0, 0.3) - 30.0).abs() < 1e-12);
        assert_eq!(smooth(17.0, 99.0, 1.0), 99.0);
        assert_eq!(smooth(42.0, 42.0, 0.3), 42.0);
    }

    #[test]
    fn label_thresholds_inclusive_below() {
        assert_eq!(exit_label(1.0, 1.5, 2.5), ExitLabel::Full);
        assert_eq!(exit_label(1.5, 1.5, 2.5), ExitLabel::Full);
        assert_eq!(exit_label(2.0, 1.5, 2.5), ExitLabel::L1);
        assert_eq!(exit_label(2.5, 1.5, 2.5), ExitLabel::L1);
        assert_eq!(exit_label(3.0, 1.5, 2.5), ExitLabel::L2);
    }

    #[test]
    fn label_is_monotone_in_d_with_two_switch_points() {
        let mut switches = 0;
        let mut prev = exit_label(-10.0, 1.5, 2.5);
        let mut d = -10.0;
        while d <= 10.0 {
            let label = exit_label(d, 1.5, 2.5);
            assert!(label >= prev, "label regressed at D={d}");
            if label != prev {
                switches += 1;
            }
            prev = label;
            d += 0.01;
        }
        assert_eq!(switches, 2);
    }

    #[test]
    fn ewma_stays_inside_input_envelope() {
        let (a, b): (f64, f64) = (-50.0, 75.0);
        let mut d: f64 = 10.0;
        let inputs = [75.0, -50.0, 0.0, 30.0, -20.0, 75.0, -50.0];
        for delta in inputs {
            d = smooth(d, delta, 0.3);
            assert!(d >= a.min(10.0) && d <= b.max(10.0), "D escaped: {d}");
        }
    }

    #[test]
    fn effective_depths_and_accuracies() {
        let p = ModelProfile::default();
        assert_eq!(effective_depth(ExitLabel::Full, &p), (60, 0));
        assert_eq!(effective_depth(ExitLabel::L1, &p), (30, 3));
        assert_eq!(effective_depth(ExitLabel::L2, &p), (15, 3));
        assert_eq!(exit_accuracy(ExitLabel::Full, &p), 0.95);
        assert_eq!(exit_accuracy(ExitLabel::L1, &p), 0.9);
        assert_eq!(exit_accuracy(ExitLabel::L2, &p), 0.6);
    }
}
