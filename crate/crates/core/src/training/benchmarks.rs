//! Benchmark schemes: exhaustive polar search, two-phase DFT + polar,
//! far-field DFT sweep, least-squares estimation and perfect CSI.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{angular_support, argmax, PhaseRecord, PowerProfile, Sounder, TrainingContext, TrainingOutcome};
use crate::channel::{Channel, SystemConfig};
use crate::codebooks::Codeword;
use crate::error::{Error, Result};

/// Sweeps every polar codeword and keeps the strongest.
pub fn exhaustive_train(ctx: &TrainingContext, sounder: &mut Sounder<'_>) -> Result<TrainingOutcome> {
    let start = sounder.pilots_used();
    let powers = ctx
        .polar
        .entries
        .iter()
        .map(|w| sounder.measure(w))
        .collect::<Result<Vec<_>>>()?;
    let best = argmax(&powers).ok_or_else(|| Error::Domain("empty polar codebook".into()))?;
    let chosen = ctx.polar.entries[best].clone();
    Ok(TrainingOutcome {
        est_angle: Some(chosen.steer_angle),
        est_range: chosen.steer_range,
        phase_log: vec![PhaseRecord {
            phase: "exhaustive_sweep".into(),
            candidates: ctx.polar.entries.iter().map(|w| w.index as i64).collect(),
            powers,
            winner: Some(chosen.index as i64),
        }],
        chosen,
        pilots_used: sounder.pilots_used() - start,
    })
}

fn dft_sweep(ctx: &TrainingContext, sounder: &mut Sounder<'_>) -> Result<PowerProfile> {
    let powers = ctx
        .dft
        .entries
        .iter()
        .map(|w| sounder.measure(w))
        .collect::<Result<Vec<_>>>()?;
    PowerProfile::new(powers, ctx.dft.entries.iter().map(|w| w.grid_index as i64).collect())
}

/// Full-grid DFT sweep, then a polar range sweep at the `k` angles around
/// the middle of the angular support.
pub fn two_phase_train(ctx: &TrainingContext, sounder: &mut Sounder<'_>, k: usize) -> Result<TrainingOutcome> {
    if k == 0 {
        return Err(Error::Config(
            "two-phase training needs at least one candidate angle".into(),
        ));
    }
    let start = sounder.pilots_used();
    let grid = ctx.dft.grid;
    let profile = dft_sweep(ctx, sounder)?;
    let support = angular_support(&profile, &grid, ctx.params.support_db)?;
    let mut phase_log = vec![PhaseRecord {
        phase: "dft_sweep".into(),
        candidates: profile.codeword_indices.clone(),
        powers: profile.powers.clone(),
        winner: Some(support.median()),
    }];

    let mut best: Option<(f64, Codeword)> = None;
    for label in support.middle(k) {
        let sub = ctx.polar.sub_codebook(grid.wrap(label));
        let powers = sub.iter().map(|w| sounder.measure(w)).collect::<Result<Vec<_>>>()?;
        let i = argmax(&powers).expect("non-empty range sweep");
        if best.as_ref().is_none_or(|(b, _)| powers[i] > *b) {
            best = Some((powers[i], sub[i].clone()));
        }
        phase_log.push(PhaseRecord {
            phase: "range_sweep".into(),
            candidates: (1..=powers.len() as i64).collect(),
            winner: Some(i as i64 + 1),
            powers,
        });
    }
    let (_, chosen) = best.expect("k >= 1");
    Ok(TrainingOutcome {
        est_angle: Some(chosen.steer_angle),
        est_range: chosen.steer_range,
        chosen,
        pilots_used: sounder.pilots_used() - start,
        phase_log,
    })
}

/// Conventional far-field training: strongest DFT beam, no range estimate.
pub fn far_field_train(ctx: &TrainingContext, sounder: &mut Sounder<'_>) -> Result<TrainingOutcome> {
    let start = sounder.pilots_used();
    let profile = dft_sweep(ctx, sounder)?;
    let best = argmax(&profile.powers).ok_or_else(|| Error::Domain("empty DFT codebook".into()))?;
    let chosen = ctx.dft.entries[best].clone();
    Ok(TrainingOutcome {
        est_angle: Some(chosen.steer_angle),
        est_range: None,
        phase_log: vec![PhaseRecord {
            phase: "dft_sweep".into(),
            candidates: profile.codeword_indices,
            powers: profile.powers,
            winner: Some(chosen.grid_index as i64),
        }],
        chosen,
        pilots_used: sounder.pilots_used() - start,
    })
}

/// Least-squares channel estimator `ĥ = (XᴴX)⁻¹ Xᴴ y` with `N` pilots.
///
/// Pilot `t` is the unit-norm DFT row `exp(-j2π tk/N)/√N` sent at the full
/// transmit power, so `X = √P F` with `F` unitary.
#[derive(Debug, Clone)]
pub struct LsEstimator {
    pilots: Vec<Vec<Complex64>>,
    /// `(XᴴX)⁻¹ Xᴴ`.
    solver: DMatrix<Complex64>,
}

impl LsEstimator {
    pub fn new(config: &SystemConfig) -> Result<Self> {
        let n = config.n_antennas;
        let scale = 1.0 / (n as f64).sqrt();
        let pilots: Vec<Vec<Complex64>> = (0..n)
            .map(|t| {
                (0..n)
                    .map(|k| Complex64::from_polar(scale, -2.0 * PI * ((t * k) % n) as f64 / n as f64))
                    .collect()
            })
            .collect();
        let amp = config.tx_power.sqrt();
        let x = DMatrix::from_fn(n, n, |t, k| pilots[t][k] * amp);
        Self::from_pilot_matrix(pilots, x)
    }

    fn from_pilot_matrix(pilots: Vec<Vec<Complex64>>, x: DMatrix<Complex64>) -> Result<Self> {
        let xh = x.adjoint();
        let gram = &xh * &x;
        let chol = gram.cholesky().ok_or(Error::SingularPilots)?;
        // Rounding can leave a tiny positive pivot on a rank-deficient Gram
        // matrix, so check conditioning as well.
        let pivots: Vec<f64> = chol.l_dirty().diagonal().iter().map(|d| d.norm_sqr()).collect();
        let hi = pivots.iter().copied().fold(0.0, f64::max);
        let lo = pivots.iter().copied().fold(f64::INFINITY, f64::min);
        if !(lo > 1e-12 * hi) {
            return Err(Error::SingularPilots);
        }
        Ok(Self {
            pilots,
            solver: chol.solve(&xh),
        })
    }

    pub fn n_pilots(&self) -> usize {
        self.pilots.len()
    }

    /// Estimates the channel response row from `N` noisy pilots.
    pub fn estimate(&self, sounder: &mut Sounder<'_>) -> Result<Vec<Complex64>> {
        let y = self
            .pilots
            .iter()
            .map(|p| sounder.observe(p))
            .collect::<Result<Vec<_>>>()?;
        let y = DMatrix::from_column_slice(y.len(), 1, &y);
        Ok((&self.solver * y).column(0).iter().copied().collect())
    }
}

/// LS benchmark: beamform along the conjugate of the estimated channel.
pub fn ls_estimate(estimator: &LsEstimator, sounder: &mut Sounder<'_>) -> Result<TrainingOutcome> {
    let start = sounder.pilots_used();
    let h_hat = estimator.estimate(sounder)?;
    let chosen = Codeword::from_weights(h_hat.iter().map(|h| h.conj()).collect())?;
    Ok(TrainingOutcome {
        est_angle: None,
        est_range: None,
        chosen,
        pilots_used: sounder.pilots_used() - start,
        phase_log: Vec::new(),
    })
}

/// Matched filter on the true channel; the rate upper bound for any beam.
pub fn perfect_csi(ch: &Channel) -> Result<TrainingOutcome> {
    let chosen = Codeword::from_weights(ch.coeffs.iter().map(|h| h.conj()).collect())?;
    Ok(TrainingOutcome {
        est_angle: Some(ch.truth.spatial_angle),
        est_range: Some(ch.truth.range_m),
        chosen,
        pilots_used: 0,
        phase_log: Vec::new(),
    })
}
