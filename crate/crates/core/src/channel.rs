//! Per-link radio budget: path gain, SNR, Shannon capacity, neighbor sets,
//! and transmission delay.
//!
//! The propagation model is a piecewise two-ray ground model: free-space
//! attenuation up to the crossover distance d_c = 4π·h_t·h_r·f/c, and a
//! fourth-power distance law beyond it. With the default carrier (2.4 GHz)
//! and altitude (100 m), d_c is about 1006 km, so every link inside the
//! default 20 km area falls in the free-space regime; the far branch exists
//! for other geometries.
//!
//! All gains are negative dB; SNR arithmetic happens entirely in the dB
//! domain (SNR = P + gain − N₀) and capacity converts to linear only inside
//! Shannon's formula.

use thiserror::Error;

use crate::config::SimConfig;
use crate::mobility::GeoPosition;
use crate::types::{Bits, BitsPerSec, Db, Dbm, Hertz, Meters, NodeId, Seconds};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;

/// Free-space path-loss constant 20·log10(4π/c) (c in m/s), so that
/// gain = −(20·log10(d) + 20·log10(f) − 147.55…).
///
/// The full-precision value is deliberate: it keeps the piecewise model
/// exactly continuous at the crossover distance (both branches agree there by
/// construction), where the display-rounded 147.55 would leave a 0.002 dB
/// seam and shift the maximum connected range by about two meters.
const FSPL_CONST_DB: f64 = 147.552_216_778_116_64;

/// Radio parameters shared by every link in a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    /// Transmit power P, in dBm.
    pub tx_power_dbm: Dbm,
    /// Noise floor N₀, in dBm.
    pub noise_dbm: Dbm,
    /// Bandwidth B, in Hz.
    pub bandwidth_hz: Hertz,
    /// Links below this SNR are unusable, in dB (inclusive threshold).
    pub min_snr_db: Db,
    /// Carrier frequency f, in Hz.
    pub carrier_hz: Hertz,
    /// Antenna height of every node (h_t = h_r), in meters.
    pub altitude_m: Meters,
}

impl ChannelParams {
    pub fn from_config(cfg: &SimConfig) -> Self {
        ChannelParams {
            tx_power_dbm: cfg.tx_power_dbm,
            noise_dbm: cfg.noise_dbm,
            bandwidth_hz: cfg.bandwidth_hz,
            min_snr_db: cfg.min_snr_db,
            carrier_hz: cfg.carrier_hz,
            altitude_m: cfg.altitude_m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ChannelError {
    #[error("path gain requires a strictly positive distance")]
    NonPositiveDistance,
    #[error("link is below the minimum SNR")]
    DisconnectedLink,
}

/// Crossover distance d_c = 4π·h_t·h_r·f/c separating the free-space and
/// fourth-power regimes, in meters.
pub fn crossover_distance_m(params: &ChannelParams) -> Meters {
    4.0 * std::f64::consts::PI * params.altitude_m * params.altitude_m * params.carrier_hz
        / SPEED_OF_LIGHT_M_S
}

/// Two-ray path gain in dB (always negative at practical distances).
///
/// Free space below the crossover distance:
///   gain = −(20·log10(d) + 20·log10(f) − 20·log10(4π/c))
/// and a fourth-power law above it:
///   gain = −(40·log10(d) − 20·log10(h_t·h_r)).
pub fn path_gain_db(distance_m: Meters, params: &ChannelParams) -> Result<Db, ChannelError> {
    if !(distance_m > 0.0) {
        return Err(ChannelError::NonPositiveDistance);
    }
    let d_c = crossover_distance_m(params);
    let gain = if distance_m <= d_c {
        -(20.0 * distance_m.log10() + 20.0 * params.carrier_hz.log10() - FSPL_CONST_DB)
    } else {
        let h_product = params.altitude_m * params.altitude_m;
        -(40.0 * distance_m.log10() - 20.0 * h_product.log10())
    };
    Ok(gain)
}

/// SNR in dB: transmit power plus (negative) path gain minus noise, all in
/// the dB domain.
pub fn snr_db(tx_power_dbm: Dbm, gain_db: Db, noise_dbm: Dbm) -> Db {
    tx_power_dbm + gain_db - noise_dbm
}

/// Shannon capacity B·log2(1 + SNR_linear) in bits per second.
pub fn capacity_bps(bandwidth_hz: Hertz, snr_db: Db) -> BitsPerSec {
    let snr_linear = 10.0_f64.powf(snr_db / 10.0);
    bandwidth_hz * (1.0 + snr_linear).log2()
}

/// The radio budget of one directed link (symmetric under equal tx power).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub snr_db: Db,
    pub capacity_bps: BitsPerSec,
    /// True iff snr_db ≥ min_snr_db (inclusive).
    pub connected: bool,
}

impl LinkBudget {
    /// Budget of the link between two distinct positions.
    pub fn between(
        a: GeoPosition,
        b: GeoPosition,
        params: &ChannelParams,
    ) -> Result<LinkBudget, ChannelError> {
        let gain = path_gain_db(a.distance_to(&b), params)?;
        let snr = snr_db(params.tx_power_dbm, gain, params.noise_dbm);
        Ok(LinkBudget {
            snr_db: snr,
            capacity_bps: capacity_bps(params.bandwidth_hz, snr),
            connected: snr >= params.min_snr_db,
        })
    }
}

/// Budgets for every ordered pair of nodes; `matrix[i][j]` is `None` on the
/// diagonal, `Some` elsewhere.
pub fn link_matrix(
    positions: &[GeoPosition],
    params: &ChannelParams,
) -> Vec<Vec<Option<LinkBudget>>> {
    let n = positions.len();
    let mut matrix = vec![vec![None; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let budget = LinkBudget::between(positions[i], positions[j], params)
                .expect("distinct node positions");
            matrix[i][j] = Some(budget);
            matrix[j][i] = Some(budget);
        }
    }
    matrix
}

/// The neighbor set M_i of every node: j ∈ M_i iff i ≠ j and the link meets
/// the minimum SNR. Each list is ascending in node id.
pub fn neighbor_sets(positions: &[GeoPosition], params: &ChannelParams) -> Vec<Vec<NodeId>> {
    let matrix = link_matrix(positions, params);
    neighbor_sets_from_matrix(&matrix)
}

/// Extract adjacency from a precomputed [`link_matrix`].
pub fn neighbor_sets_from_matrix(matrix: &[Vec<Option<LinkBudget>>]) -> Vec<Vec<NodeId>> {
    matrix
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter_map(|(j, budget)| match budget {
                    Some(b) if b.connected => Some(j),
                    _ => None,
                })
                .collect()
        })
        .collect()
}

/// Time to push `payload_bits` through a connected link, in seconds.
pub fn tx_delay(payload_bits: Bits, link: &LinkBudget) -> Result<Seconds, ChannelError> {
    if !link.connected {
        return Err(ChannelError::DisconnectedLink);
    }
    Ok(payload_bits / link.capacity_bps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_params() -> ChannelParams {
        ChannelParams::from_config(&SimConfig::default())
    }

    #[test]
    fn fspl_constant_matches_its_definition() {
        let derived = 20.0 * (4.0 * std::f64::consts::PI / SPEED_OF_LIGHT_M_S).log10();
        assert!(
            (FSPL_CONST_DB + derived).abs() < 1e-12,
            "constant drifted from 20·log10(4π/c): {derived}"
        );
    }

    #[test]
    fn free_space_gain_at_one_km() {
        let gain = path_gain_db(1000.0, &default_params()).unwrap();
        assert!((gain - (-100.05200805611548)).abs() < 1e-9, "gain {gain}");
        // Two-decimal check: −100.05 dB at 1 km, 2.4 GHz.
        assert!((gain - (-100.05)).abs() < 5e-3);
    }

    #[test]
    fn gain_is_zero_when_distance_and_frequency_terms_cancel() {
        // At d = 1 m and 20·log10(f) = 147.55 the free-space terms cancel.
        let params = ChannelParams {
            carrier_hz: 10.0_f64.powf(FSPL_CONST_DB / 20.0),
            ..default_params()
        };
        let gain = path_gain_db(1.0, &params).unwrap();
        assert!(gain.abs() < 1e-9, "gain {gain}");
    }

    #[test]
    fn far_field_uses_fourth_power_law() {
        // Beyond d_c (≈1.006e6 m at defaults) the gain is
        // −(40·log10(d) − 20·log10(h_t·h_r)) = −(40·log10(2e6) − 80).
        let gain = path_gain_db(2.0e6, &default_params()).unwrap();
        let expect = -(40.0 * 2.0e6_f64.log10() - 80.0);
        assert!((gain - expect).abs() < 1e-9, "gain {gain}");
        assert!((gain - (-172.0412)).abs() < 1e-3, "gain {gain}");
    }

    #[test]
    fn crossover_distance_matches_closed_form() {
        let d_c = crossover_distance_m(&default_params());
        let expect = 4.0 * std::f64::consts::PI * 100.0 * 100.0 * 2.4e9 / SPEED_OF_LIGHT_M_S;
        assert_eq!(d_c, expect);
        assert!((d_c - 1.006e6).abs() < 1e3, "d_c {d_c}");
    }

    #[test]
    fn gain_continuous_at_crossover() {
        let params = default_params();
        let d_c = crossover_distance_m(&params);
        let below = path_gain_db(d_c * (1.0 - 1e-12), &params).unwrap();
        let above = path_gain_db(d_c * (1.0 + 1e-12), &params).unwrap();
        assert!((below - above).abs() < 0.5, "jump {} dB", (below - above).abs());
    }

    #[test]
    fn gain_decreases_with_distance_in_both_regimes() {
        let params = default_params();
        let mut prev = f64::INFINITY;
        for d in [1.0, 10.0, 1e3, 1e5, 1e6, 2e6, 1e7] {
            let gain = path_gain_db(d, &params).unwrap();
            assert!(gain < prev, "gain not decreasing at d={d}");
            prev = gain;
        }
    }

    #[test]
    fn non_positive_distance_is_an_error() {
        assert_eq!(
            path_gain_db(0.0, &default_params()),
            Err(ChannelError::NonPositiveDistance)
        );
        assert_eq!(
            path_gain_db(-5.0, &default_params()),
            Err(ChannelError::NonPositiveDistance)
        );
    }

    #[test]
    fn snr_is_plain_db_arithmetic() {
        assert!((snr_db(30.0, -100.0542, -85.0) - 14.9458).abs() < 1e-9);
        assert_eq!(snr_db(30.0, -115.0, -85.0), 0.0);
        assert_eq!(snr_db(30.0, -112.0, -85.0), 3.0);
    }

    #[test]
    fn capacity_oracles() {
        // log2(2) = 1 exactly at 0 dB.
        assert!((capacity_bps(1.0e7, 0.0) - 1.0e7).abs() < 1e-6);
        // 10 MHz × log2(1 + 10^0.3) = 15.8268 Mbps.
        assert!((capacity_bps(1.0e7, 3.0) - 15.8268e6).abs() < 1.0e3);
        // 10 MHz × log2(1 + 10^1.495) = 50.117 Mbps.
        assert!((capacity_bps(1.0e7, 14.95) - 50.117e6).abs() < 1.0e3);
    }

    #[test]
    fn capacity_increases_with_snr() {
        let mut prev = 0.0;
        for snr in [-20.0, -3.0, 0.0, 3.0, 10.0, 30.0] {
            let c = capacity_bps(1.0e7, snr);
            assert!(c > prev);
            prev = c;
        }
    }

    #[test]
    fn connectivity_boundary_is_inclusive() {
        let params = default_params();
        // Find the distance where SNR = exactly min_snr_db: FSPL = 112 dB.
        let d = 10.0_f64.powf(
            (112.0 - 20.0 * params.carrier_hz.log10() + FSPL_CONST_DB) / 20.0,
        );
        let link = LinkBudget::between(
            GeoPosition { x: 0.0, y: 0.0 },
            GeoPosition { x: d, y: 0.0 },
            &params,
        )
        .unwrap();
        assert!((link.snr_db - 3.0).abs() < 1e-9);
        assert!(link.connected);
    }

    #[test]
    fn neighbor_sets_match_range_and_are_symmetric() {
        let params = default_params();
        let positions = vec![
            GeoPosition { x: 0.0, y: 0.0 },
            GeoPosition { x: 1000.0, y: 0.0 },
            GeoPosition { x: 11_000.0, y: 0.0 },
        ];
        let adj = neighbor_sets(&positions, &params);
        // 1 km link connects; the 10 km link sits below min SNR.
        assert_eq!(adj[0], vec![1]);
        assert_eq!(adj[1], vec![0]);
        assert!(adj[2].is_empty());
        for i in 0..positions.len() {
            for &j in &adj[i] {
                assert!(adj[j].contains(&i), "asymmetric adjacency {i}<->{j}");
            }
        }
    }

    #[test]
    fn single_node_has_no_neighbors() {
        let adj = neighbor_sets(&[GeoPosition { x: 5.0, y: 5.0 }], &default_params());
        assert_eq!(adj, vec![Vec::<NodeId>::new()]);
    }

    #[test]
    fn tx_delay_divides_and_rejects_disconnected() {
        let connected = LinkBudget {
            snr_db: 10.0,
            capacity_bps: 16.0e6,
            connected: true,
        };
        assert!((tx_delay(4.0e6, &connected).unwrap() - 0.25).abs() < 1e-12);
        assert_eq!(tx_delay(0.0, &connected).unwrap(), 0.0);
        let dead = LinkBudget {
            connected: false,
            ..connected
        };
        assert_eq!(tx_delay(4.0e6, &dead), Err(ChannelError::DisconnectedLink));
    }

    #[test]
    fn max_connected_distance_matches_closed_form_inversion() {
        // At defaults the SNR budget allows FSPL up to P − N₀ − min_snr =
        // 112 dB; inverting the free-space law gives the maximum range.
        let params = default_params();
        let max_fspl = params.tx_power_dbm - params.noise_dbm - params.min_snr_db;
        let d_max = 10.0_f64.powf(
            (max_fspl - 20.0 * params.carrier_hz.log10() + FSPL_CONST_DB) / 20.0,
        );
        assert!((d_max - 3957.3057).abs() < 1e-3, "d_max {d_max}");
        // Coarse sanity window on the default-parameter radio horizon.
        assert!((d_max - 3958.0).abs() <= 1.0, "d_max {d_max} outside 3958±1");
        let at = |d: f64| {
            LinkBudget::between(
                GeoPosition { x: 0.0, y: 0.0 },
                GeoPosition { x: d, y: 0.0 },
                &params,
            )
            .unwrap()
            .connected
        };
        assert!(at(d_max - 0.001));
        assert!(!at(d_max + 0.001));
    }
}
