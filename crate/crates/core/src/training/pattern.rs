use std::f64::consts::PI;

use num_complex::Complex64;

use crate::channel::{SystemConfig, UserLocation};
use crate::codebooks::active_count;
use crate::error::Result;

/// Received beam pattern `|b_SLAᴴ(r0, θ0) a_SLA(θ)|` of a sparse-array beam
/// steered to `theta`, summed exactly over the `Q` active elements with
/// spherical-wavefront distances.
pub fn beam_pattern(config: &SystemConfig, loc: &UserLocation, theta: f64, interval: usize) -> Result<f64> {
    let q = active_count(config.n_antennas, interval)?;
    let k0 = 2.0 * PI / config.wavelength();
    let c = config.center() as f64;
    let (r0, th0) = (loc.range_m, loc.spatial_angle);
    let sum: Complex64 = (0..config.n_antennas)
        .step_by(interval)
        .map(|k| {
            let offset = (k as f64 - c) * config.antenna_spacing;
            let r = (r0 * r0 + offset * offset - 2.0 * r0 * th0 * offset).sqrt();
            Complex64::from_polar(1.0, -k0 * r - PI * k as f64 * theta)
        })
        .sum();
    Ok(sum.norm() / q as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_in_two_over_interval() {
        let cfg = SystemConfig::default();
        let loc = UserLocation::new(15.0, 0.37).unwrap();
        for theta in [-0.05, 0.0, 0.021, 0.06] {
            let base = beam_pattern(&cfg, &loc, theta, 16).unwrap();
            for k in [-2.0, -1.0, 1.0, 2.0] {
                let shifted = beam_pattern(&cfg, &loc, theta + 2.0 * k / 16.0, 16).unwrap();
                assert!((base - shifted).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn matched_far_user_sees_full_gain() {
        let cfg = SystemConfig::default();
        let loc = UserLocation::new(1e6, 0.2).unwrap();
        let f = beam_pattern(&cfg, &loc, 0.2, 16).unwrap();
        assert!((f - 1.0).abs() < 1e-3, "{f}");
    }
}
