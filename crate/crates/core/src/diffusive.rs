//! The diffusive aggregated-capability metric φ.
//!
//! φ estimates, in GFLOPS, how much compute a node can effectively draw on:
//! its own capability plus what its neighborhood offers once transfer delays
//! are priced in. The update is neighbor-recursive in inverse space —
//!
//! 1/φ_i(t+1) = 1/(|M_i|+1) · (1/F_i + max_k (d_tx_ik + 1/φ_k(t)))
//!
//! — where the max runs over the advertised values of current neighbors and
//! d_tx_ik is the estimated one-layer-output transfer delay. A node with no
//! neighbors falls back to φ = F_i: it can only count on itself.

use thiserror::Error;

use crate::types::{GflopsPerSec, NodeId, Seconds};

/// A neighbor's most recently advertised φ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiView {
    pub node_id: NodeId,
    pub phi_gflops: GflopsPerSec,
    pub advertised_at_s: Seconds,
}

/// One neighbor's contribution to a φ update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborPhi {
    /// The neighbor's advertised aggregated capability.
    pub phi_gflops: GflopsPerSec,
    /// Estimated delay to ship one mean layer output to that neighbor.
    pub tx_delay_s: Seconds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum DiffusiveError {
    #[error("capability must be strictly positive")]
    NonPositiveCapability,
}

/// Initial value φ₀ = F: before any exchange a node counts only itself.
pub fn phi_init(capability_gflops: GflopsPerSec) -> Result<GflopsPerSec, DiffusiveError> {
    if capability_gflops > 0.0 {
        Ok(capability_gflops)
    } else {
        Err(DiffusiveError::NonPositiveCapability)
    }
}

/// One φ update from the node's own capability and its neighbors' advertised
/// values. Empty neighborhood returns the capability unchanged.
pub fn phi_update(capability_gflops: GflopsPerSec, neighbors: &[NeighborPhi]) -> GflopsPerSec {
    debug_assert!(capability_gflops > 0.0);
    if neighbors.is_empty() {
        return capability_gflops;
    }
    let worst = neighbors
        .iter()
        .map(|n| {
            debug_assert!(n.phi_gflops > 0.0 && n.tx_delay_s >= 0.0);
            n.tx_delay_s + 1.0 / n.phi_gflops
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let inv = (1.0 / capability_gflops + worst) / (neighbors.len() + 1) as f64;
    1.0 / inv
}
