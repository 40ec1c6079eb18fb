//! Node placement on a granularity grid and closed-form circular motion.
//!
//! Trajectory centers are sampled uniformly without replacement from the
//! centers of a `granularity × granularity` cell grid over the square area,
//! then clamped inward so the full circle stays in bounds. Motion is a
//! counterclockwise circle at constant angular speed ω = v/r with a uniform
//! random phase per node; positions are closed-form in t, so mobility never
//! accumulates integration error.

use rand::Rng;
use thiserror::Error;

use crate::config::SimConfig;
use crate::rng::{substream, StreamKind};
use crate::types::{Meters, Seconds};

/// A point in the operating area, meters from the south-west corner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoPosition {
    pub x: Meters,
    pub y: Meters,
}

impl GeoPosition {
    pub fn distance_to(&self, other: &GeoPosition) -> Meters {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// A node's flight path: a circle traversed counterclockwise at constant
/// angular speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircularTrajectory {
    pub center: GeoPosition,
    pub radius_m: Meters,
    /// ω = speed / radius, in radians per second.
    pub angular_speed_rad_s: f64,
    /// Initial angle on the circle, in radians.
    pub phase_rad: f64,
}

impl CircularTrajectory {
    /// Position at simulation time `t` (seconds):
    /// center + r·(cos(ωt + φ), sin(ωt + φ)).
    pub fn position_at(&self, t: Seconds) -> GeoPosition {
        let angle = self.angular_speed_rad_s * t + self.phase_rad;
        GeoPosition {
            x: self.center.x + self.radius_m * angle.cos(),
            y: self.center.y + self.radius_m * angle.sin(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlacementError {
    #[error("cannot place {workers} workers on a grid of {cells} cells")]
    TooManyWorkers { workers: usize, cells: usize },
}

/// Sample one trajectory per worker.
///
/// Cell choices come from the placement substream of `seed`; each node's
/// phase comes from its own substream, so placement is stable when phases
/// are re-drawn and vice versa.
pub fn place_nodes(cfg: &SimConfig, seed: u64) -> Result<Vec<CircularTrajectory>, PlacementError> {
    let g = cfg.placement_granularity;
    let cells = g * g;
    if cfg.worker_count > cells {
        return Err(PlacementError::TooManyWorkers {
            workers: cfg.worker_count,
            cells,
        });
    }

    // Partial Fisher-Yates: after k swaps the first k entries are a uniform
    // sample without replacement.
    let mut cell_ids: Vec<usize> = (0..cells).collect();
    let mut placement_rng = substream(seed, StreamKind::Placement, 0);
    for k in 0..cfg.worker_count {
        let j = placement_rng.gen_range(k..cells);
        cell_ids.swap(k, j);
    }

    let cell_side = cfg.area_side_m / g as f64;
    let r = cfg.movement_radius_m;
    let clamp = |v: f64| v.clamp(r, cfg.area_side_m - r);
    let trajectories = cell_ids[..cfg.worker_count]
        .iter()
        .enumerate()
        .map(|(node, &cell)| {
            let row = cell / g;
            let col = cell % g;
            let center = GeoPosition {
                x: clamp((col as f64 + 0.5) * cell_side),
                y: clamp((row as f64 + 0.5) * cell_side),
            };
            let mut phase_rng = substream(seed, StreamKind::Phase, node);
            CircularTrajectory {
                center,
                radius_m: r,
                angular_speed_rad_s: cfg.speed_mps / r,
                phase_rad: phase_rng.gen_range(0.0..std::f64::consts::TAU),
            }
        })
        .collect();
    Ok(trajectories)
}
