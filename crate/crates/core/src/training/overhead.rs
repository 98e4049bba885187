//! Pilot-overhead formulas and the activation-interval optimiser.

use serde::{Deserialize, Serialize};

use crate::codebooks::{active_count, far_field_subarray_limit};
use crate::error::{Error, Result};

/// Three-phase overhead `Q + U + K·V` (`= (N-1)/U + U + V + 1` for `K = 1`).
pub fn three_phase(n: usize, interval: usize, v: usize, k: usize) -> Result<usize> {
    Ok(active_count(n, interval)? + interval + k * v)
}

/// Exhaustive polar search over the `QU`-point grid: `QUV`.
pub fn exhaustive(n: usize, interval: usize, v: usize) -> Result<usize> {
    Ok(active_count(n, interval)? * interval * v)
}

/// Two-phase DFT + polar training: `QU + KV`.
pub fn two_phase(n: usize, interval: usize, v: usize, k: usize) -> Result<usize> {
    Ok(active_count(n, interval)? * interval + k * v)
}

/// Far-field DFT sweep: `QU`.
pub fn far_field(n: usize, interval: usize) -> Result<usize> {
    Ok(active_count(n, interval)? * interval)
}

/// Least-squares estimation: one pilot per antenna.
pub fn least_squares(n: usize) -> usize {
    n
}

/// Continuous objective `F(U) = (N-1)/U + U + V + 1`.
pub fn objective(n: usize, interval: usize, v: usize) -> f64 {
    (n - 1) as f64 / interval as f64 + interval as f64 + v as f64 + 1.0
}

/// Activation interval minimising the three-phase overhead.
///
/// Among intervals dividing `N-1` and not exceeding `√(1.2(N-1))`, returns
/// the one closest to `√(N-1)`; ties go to the smaller interval. The range
/// count only shifts the objective and does not affect the minimiser.
pub fn optimal_interval(n: usize, _v: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::Config(format!("interval optimisation needs N >= 2, got {n}")));
    }
    let target = ((n - 1) as f64).sqrt();
    let limit = far_field_subarray_limit(n);
    (1..n)
        .filter(|u| (n - 1).is_multiple_of(*u) && *u as f64 <= limit)
        .min_by(|a, b| {
            let da = (*a as f64 - target).abs();
            let db = (*b as f64 - target).abs();
            da.total_cmp(&db).then(a.cmp(b))
        })
        .ok_or_else(|| Error::Config(format!("no feasible activation interval for N = {n}")))
}

/// Pilot counts of every scheme for one parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverheadTable {
    pub three_phase: usize,
    pub exhaustive: usize,
    pub two_phase: usize,
    pub far_field: usize,
    pub least_squares: usize,
}

impl OverheadTable {
    pub fn new(n: usize, interval: usize, v: usize, k: usize) -> Result<Self> {
        Ok(Self {
            three_phase: three_phase(n, interval, v, k)?,
            exhaustive: exhaustive(n, interval, v)?,
            two_phase: two_phase(n, interval, v, k)?,
            far_field: far_field(n, interval)?,
            least_squares: least_squares(n),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example_counts() {
        let t = OverheadTable::new(1025, 32, 5, 1).unwrap();
        assert_eq!((t.three_phase, t.exhaustive, t.two_phase), (70, 5280, 1061));
        assert_eq!(exhaustive(257, 16, 5).unwrap(), 1360);
        assert_eq!(far_field(257, 16).unwrap(), 272);
        assert_eq!(two_phase(257, 16, 5, 3).unwrap(), 287);
    }

    #[test]
    fn middle_k_counts_every_pilot() {
        // Q + U + KV = 17 + 16 + 15.
        assert_eq!(three_phase(257, 16, 5, 3).unwrap(), 48);
    }

    #[test]
    fn optimal_interval_anchors() {
        assert_eq!(optimal_interval(1025, 5).unwrap(), 32);
        assert_eq!(optimal_interval(257, 5).unwrap(), 16);
    }

    #[test]
    fn optimal_interval_matches_brute_force() {
        for n in [5usize, 9, 13, 17, 33, 65, 101, 129, 257, 513, 1025] {
            let limit = (1.2 * (n - 1) as f64).sqrt();
            let feasible: Vec<usize> = (1..n).filter(|u| (n - 1) % u == 0 && *u as f64 <= limit).collect();
            let best = feasible
                .iter()
                .map(|&u| objective(n, u, 5))
                .fold(f64::INFINITY, f64::min);
            let u = optimal_interval(n, 5).unwrap();
            assert!((objective(n, u, 5) - best).abs() < 1e-9, "N = {n}");
            let smallest_opt = feasible
                .iter()
                .copied()
                .find(|&u| (objective(n, u, 5) - best).abs() < 1e-9)
                .unwrap();
            assert_eq!(u, smallest_opt, "N = {n}");
        }
        // N = 5: U = 4 exceeds √4.8, so U ∈ {1, 2}; F(1) = V + 6 > F(2) = V + 5.
        assert_eq!(optimal_interval(5, 5).unwrap(), 2);
        assert!(optimal_interval(1, 5).is_err());
    }
}
