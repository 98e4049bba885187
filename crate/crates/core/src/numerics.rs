//! Fresnel integrals and the closed-form received beam pattern of a sparse
//! linear array observed by a near-field user.
//!
//! The pattern model replaces the discrete sum over active elements by an
//! integral, which turns the quadratic-phase sum into a difference of
//! complex Fresnel integrals:
//!
//! ```text
//! G(b1, b2) = [C(b1 + b2) - C(b1 - b2) + j(S(b1 + b2) - S(b1 - b2))] / (2 b2)
//! ```
//!
//! `b1` carries the angular offset between the beam and the user, `b2`
//! carries the user's distance from the array (smaller means farther).

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance of the Fresnel quadrature.
pub const FRESNEL_TOLERANCE: f64 = 1e-10;

/// Below this `beta2` the pattern is replaced by its far-field limit of 1.
pub const FAR_FIELD_BETA2: f64 = 1e-6;

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1] (non-negative half).
const GK15_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK15_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss 7-point weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 48;

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * GK15_WEIGHTS[7];
    let mut gauss = fc * G7_WEIGHTS[3];
    for i in 0..7 {
        let dx = half * GK15_NODES[i];
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * GK15_WEIGHTS[i];
        if i % 2 == 1 {
            gauss += pair * G7_WEIGHTS[i / 2];
        }
    }
    let kronrod = kronrod * half;
    let gauss = gauss * half;
    (kronrod, (kronrod - gauss).norm())
}

/// Adaptive Gauss-Kronrod integration of a complex-valued integrand.
///
/// Intervals are bisected until each piece's Kronrod/Gauss discrepancy is
/// below its length-proportional share of `tol`.
pub fn integrate_adaptive<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, tol: f64) -> Complex64 {
    if a == b {
        return Complex64::new(0.0, 0.0);
    }
    let total = (b - a).abs();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut stack = vec![(a, b, 0u32)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let (value, err) = gk15(&f, lo, hi);
        let share = tol * (hi - lo).abs() / total;
        if err <= share || depth >= MAX_DEPTH {
            sum += value;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    sum
}

/// Complex Fresnel integral `C(x) + j S(x) = ∫₀ˣ exp(jπt²/2) dt`.
pub fn fresnel(x: f64) -> Result<Complex64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("Fresnel integral of non-finite argument {x}")));
    }
    if x == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let value = integrate_adaptive(
        |t| Complex64::from_polar(1.0, FRAC_PI_2 * t * t),
        0.0,
        x.abs(),
        FRESNEL_TOLERANCE,
    );
    Ok(if x < 0.0 { -value } else { value })
}

/// Fresnel cosine integral `C(x) = ∫₀ˣ cos(πt²/2) dt`.
pub fn fresnel_c(x: f64) -> Result<f64> {
    fresnel(x).map(|z| z.re)
}

/// Fresnel sine integral `S(x) = ∫₀ˣ sin(πt²/2) dt`.
pub fn fresnel_s(x: f64) -> Result<f64> {
    fresnel(x).map(|z| z.im)
}

/// Arguments of the closed-form pattern.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaParams {
    /// Angular offset term; odd in the beam/user angle difference.
    pub beta1: f64,
    /// Distance term; shrinks as the user moves away from the array.
    pub beta2: f64,
}

/// Maps a user location and beam offset to [`BetaParams`].
///
/// `delta` is the steering angle minus the user angle, `q_count` the number
/// of active elements and `interval` the activation interval, so the
/// active aperture spans `q_count * interval` element spacings of `d0`.
pub fn beta_params(r0: f64, theta0: f64, delta: f64, q_count: usize, interval: usize, d0: f64) -> Result<BetaParams> {
    if !(r0 > 0.0) || !r0.is_finite() {
        return Err(Error::Domain(format!("range must be positive, got {r0}")));
    }
    if !(d0 > 0.0) {
        return Err(Error::Domain(format!("antenna spacing must be positive, got {d0}")));
    }
    if !(theta0.abs() < 1.0) {
        return Err(Error::Domain(format!(
            "spatial angle {theta0} is at or beyond endfire; |theta0| < 1 required"
        )));
    }
    let spread = d0 * (1.0 - theta0 * theta0);
    Ok(BetaParams {
        beta1: delta * (r0 / spread).sqrt(),
        beta2: 0.5 * (q_count * interval) as f64 * (spread / r0).sqrt(),
    })
}

/// Closed-form approximation `|G(beta1, beta2)|` of the received beam pattern.
pub fn closed_form_pattern(params: BetaParams) -> Result<f64> {
    let BetaParams { beta1, beta2 } = params;
    if !(beta2 > 0.0) || !beta1.is_finite() || !beta2.is_finite() {
        return Err(Error::Domain(format!(
            "closed-form pattern needs finite beta1 and beta2 > 0, got ({beta1}, {beta2})"
        )));
    }
    if beta2 < FAR_FIELD_BETA2 {
        return Ok(1.0);
    }
    let upper = fresnel(beta1 + beta2)?;
    let lower = fresnel(beta1 - beta2)?;
    Ok((upper - lower).norm() / (2.0 * beta2))
}
