//! Beam training: the three-phase sparse-DFT scheme and its benchmarks.

mod benchmarks;
pub mod overhead;
mod pattern;
mod support;
mod three_phase;

use num_complex::Complex64;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::channel::{complex_gaussian, Channel, SystemConfig};
use crate::codebooks::{
    dft_codebook, polar_codebook, sparse_dft_codebook, subarray_codebook, subarray_codebook_unchecked, Codebook,
    Codeword, SubarrayBounds, DEFAULT_BETA_DELTA, DEFAULT_RANGE_SAMPLES,
};
use crate::error::{Error, Result};

pub use benchmarks::{exhaustive_train, far_field_train, ls_estimate, perfect_csi, two_phase_train, LsEstimator};
pub use overhead::optimal_interval;
pub use pattern::beam_pattern;
pub use support::{angular_support, shift_profile, AngularSupport, PowerProfile};
pub use three_phase::{
    phase1_sweep, phase2_resolve, phase3_range, three_phase_train, three_phase_train_k, Phase1, Phase2, Phase3,
};

/// Support threshold used throughout: 3 dB below the peak.
pub const DEFAULT_SUPPORT_DB: f64 = 3.0;

/// Transmits pilots over one channel and counts them.
///
/// Every received-power measurement made by a training scheme goes through
/// a sounder, so [`Sounder::pilots_used`] is the scheme's true overhead.
pub struct Sounder<'a> {
    config: &'a SystemConfig,
    channel: &'a Channel,
    noise: Option<&'a mut dyn RngCore>,
    pilots: usize,
}

impl<'a> Sounder<'a> {
    pub fn noisy(config: &'a SystemConfig, channel: &'a Channel, rng: &'a mut dyn RngCore) -> Self {
        Self {
            config,
            channel,
            noise: Some(rng),
            pilots: 0,
        }
    }

    pub fn noiseless(config: &'a SystemConfig, channel: &'a Channel) -> Self {
        Self {
            config,
            channel,
            noise: None,
            pilots: 0,
        }
    }

    pub fn config(&self) -> &SystemConfig {
        self.config
    }

    /// Complex received sample `√P hᴴw + z` for unit-norm weights.
    pub fn observe(&mut self, weights: &[Complex64]) -> Result<Complex64> {
        let signal = self.channel.gain(weights)? * self.config.tx_power.sqrt();
        self.pilots += 1;
        Ok(match self.noise.as_deref_mut() {
            Some(rng) => signal + complex_gaussian(rng, self.config.noise_power),
            None => signal,
        })
    }

    /// Received power of one pilot sent with codeword `w`.
    pub fn measure(&mut self, w: &Codeword) -> Result<f64> {
        self.observe(&w.weights).map(|y| y.norm_sqr())
    }

    pub fn pilots_used(&self) -> usize {
        self.pilots
    }
}

/// Parameters shared by the training schemes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingParams {
    /// Antenna activation interval `U`.
    pub interval: usize,
    /// Central subarray size `M`.
    pub subarray_m: usize,
    /// Range samples per angle `V`.
    pub n_ranges: usize,
    /// Candidate angles carried into the range sweep (`K`).
    pub middle_k: usize,
    pub beta_delta: f64,
    /// Support threshold in dB below the peak.
    pub support_db: f64,
}

impl TrainingParams {
    /// `U` from the overhead optimiser, the largest admissible `M`, `V = 5`
    /// and a single candidate angle.
    pub fn for_config(config: &SystemConfig) -> Result<Self> {
        let interval = optimal_interval(config.n_antennas, DEFAULT_RANGE_SAMPLES)?;
        let subarray_m = SubarrayBounds::new(config.n_antennas, interval)
            .largest()
            .ok_or_else(|| {
                Error::Config(format!(
                    "no admissible central subarray for N = {}, U = {interval}",
                    config.n_antennas
                ))
            })?;
        Ok(Self {
            interval,
            subarray_m,
            n_ranges: DEFAULT_RANGE_SAMPLES,
            middle_k: 1,
            beta_delta: DEFAULT_BETA_DELTA,
            support_db: DEFAULT_SUPPORT_DB,
        })
    }

    pub fn with_middle_k(mut self, k: usize) -> Self {
        self.middle_k = k;
        self
    }
}

/// Codebooks for one system configuration, built once and shared by all
/// trials.
#[derive(Debug, Clone)]
pub struct TrainingContext {
    pub config: SystemConfig,
    pub params: TrainingParams,
    pub sparse: Codebook,
    pub subarray: Codebook,
    pub dft: Codebook,
    pub polar: Codebook,
}

impl TrainingContext {
    /// Builds every codebook, rejecting inadmissible subarray sizes.
    pub fn new(config: SystemConfig, params: TrainingParams) -> Result<Self> {
        SubarrayBounds::new(config.n_antennas, params.interval).check(params.subarray_m)?;
        Self::build(config, params, true)
    }

    /// As [`TrainingContext::new`] but accepts any subarray size in `1..=N`.
    pub fn new_unchecked(config: SystemConfig, params: TrainingParams) -> Result<Self> {
        Self::build(config, params, false)
    }

    fn build(config: SystemConfig, params: TrainingParams, checked: bool) -> Result<Self> {
        if params.middle_k == 0 {
            return Err(Error::Config("middle_k must be at least 1".into()));
        }
        let sparse = sparse_dft_codebook(&config, params.interval)?;
        let subarray = if checked {
            subarray_codebook(&config, params.interval, params.subarray_m)?
        } else {
            subarray_codebook_unchecked(&config, params.interval, params.subarray_m)?
        };
        let dft = dft_codebook(&config, params.interval)?;
        let polar = polar_codebook(&config, params.n_ranges, params.beta_delta, sparse.grid)?;
        Ok(Self {
            config,
            params,
            sparse,
            subarray,
            dft,
            polar,
        })
    }

    /// Number of active antennas of the sparse array.
    pub fn q(&self) -> usize {
        self.sparse.len()
    }
}

/// Diagnostics of one training phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseRecord {
    pub phase: String,
    /// Codebook labels probed (grid labels, or range samples in a range sweep).
    pub candidates: Vec<i64>,
    pub powers: Vec<f64>,
    pub winner: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingOutcome {
    pub est_angle: Option<f64>,
    pub est_range: Option<f64>,
    pub chosen: Codeword,
    pub pilots_used: usize,
    pub phase_log: Vec<PhaseRecord>,
}

/// Index of the largest value; ties go to the lowest index.
pub(crate) fn argmax(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        match best {
            Some(b) if v <= values[b] => {}
            _ => best = Some(i),
        }
    }
    best
}

/// Index of the smallest value; ties go to the lowest index.
pub(crate) fn argmin(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        match best {
            Some(b) if v >= values[b] => {}
            _ => best = Some(i),
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argmax_and_argmin_break_ties_low() {
        assert_eq!(argmax(&[1.0, 3.0, 3.0, 2.0]), Some(1));
        assert_eq!(argmin(&[2.0, 0.5, 0.5]), Some(1));
        assert_eq!(argmax(&[]), None);
    }

    #[test]
    fn default_params_for_reference_array() {
        let p = TrainingParams::for_config(&SystemConfig::default()).unwrap();
        assert_eq!((p.interval, p.subarray_m, p.n_ranges, p.middle_k), (16, 17, 5, 1));
    }
}
