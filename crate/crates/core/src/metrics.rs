//! Fairness, the figure of merit, and multi-run aggregation.
//!
//! Metrics that can be undefined (no completed tasks, no transfers, all-zero
//! work) are represented as `None`, never as NaN, so run results stay
//! bitwise comparable and CSV cells stay empty rather than poisoned.

use statrs::distribution::{ContinuousCDF, StudentsT};

/// Capability-normalized per-node work, the input to Jain's index.
#[derive(Debug, Clone, PartialEq)]
pub struct FairnessInput {
    /// x_i = processed_gflops_i / capability_gflops_i, in seconds of
    /// work-equivalent.
    pub normalized_work: Vec<f64>,
}

impl FairnessInput {
    pub fn jain(&self) -> Option<f64> {
        jain_fairness(&self.normalized_work)
    }
}

/// Jain's fairness index (Σx)²/(n·Σx²) over non-negative inputs; `None` when
/// the input is empty or all zero.
pub fn jain_fairness(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    debug_assert!(xs.iter().all(|x| *x >= 0.0));
    let sum: f64 = xs.iter().sum();
    let sum_sq: f64 = xs.iter().map(|x| x * x).sum();
    if sum_sq == 0.0 {
        return None;
    }
    Some(sum * sum / (xs.len() as f64 * sum_sq))
}

/// Figure of merit FOM = TPS·ACC/(AE·AL).
///
/// `ae` is joules per completed task, `al` seconds per completed task; both
/// must be strictly positive (no completed tasks means the FOM is undefined
/// and should be represented as `None` by the caller).
pub fn figure_of_merit(tps: f64, acc: f64, ae: f64, al: f64) -> f64 {
    debug_assert!(ae > 0.0 && al > 0.0);
    tps * acc / (ae * al)
}

/// Sample mean and 95% t-confidence half-width of the defined values among
/// `values`; undefined entries are excluded pairwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSummary {
    pub mean: Option<f64>,
    pub ci95: Option<f64>,
    /// How many runs had the metric defined.
    pub n: usize,
}

impl MetricSummary {
    pub fn of(values: impl IntoIterator<Item = Option<f64>>) -> MetricSummary {
        let xs: Vec<f64> = values.into_iter().flatten().collect();
        let n = xs.len();
        if n == 0 {
            return MetricSummary { mean: None, ci95: None, n };
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        if n == 1 {
            return MetricSummary { mean: Some(mean), ci95: None, n };
        }
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        let t = StudentsT::new(0.0, 1.0, (n - 1) as f64)
            .expect("valid dof")
            .inverse_cdf(0.975);
        MetricSummary {
            mean: Some(mean),
            ci95: Some(t * se),
            n,
        }
    }
}
