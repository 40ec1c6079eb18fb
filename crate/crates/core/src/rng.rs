//! Deterministic randomness.
//!
//! All randomness in a run derives from one 64-bit master seed through a
//! counter-based generator with independent substreams per node and per
//! subsystem. Adding a node or reordering draws in one subsystem therefore
//! never perturbs any other node's stream, and identical (config, seed)
//! pairs replay bit-identically.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::types::{GflopsPerSec, NodeId};

/// The independent random subsystems of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamKind {
    /// Placement-grid cell shuffle (one stream, node index unused).
    Placement = 0,
    /// Per-node capability draw.
    Capability = 1,
    /// Per-node trajectory phase.
    Phase = 2,
    /// Per-node task inter-arrival times.
    Arrivals = 3,
    /// Per-node strategy coin flips and target picks.
    Strategy = 4,
}

/// The generator for one (subsystem, node) substream of `seed`.
pub fn substream(seed: u64, kind: StreamKind, node: NodeId) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((kind as u64) << 32) | node as u64);
    rng
}

/// One draw from the node-capability distribution N(mean, std), redrawn
/// until strictly positive.
pub fn sample_capability(
    rng: &mut impl Rng,
    mean_gflops: f64,
    std_gflops: f64,
) -> GflopsPerSec {
    let normal = Normal::new(mean_gflops, std_gflops)
        .expect("validated config guarantees a positive std");
    loop {
        let draw = normal.sample(rng);
        if draw > 0.0 {
            return draw;
        }
    }
}
