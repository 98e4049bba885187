//! Array geometry, steering vectors and the near-field Rician channel.
//!
//! Antennas sit on a uniform linear array centred at the origin. Vectors
//! are stored by array position `k = 0..N-1`, which corresponds to the
//! signed element index `n = k - (N-1)/2`.
//!
//! Two vector roles appear throughout the crate:
//! * a *response* is a row vector seen by the user, so the noiseless
//!   received sample is `sum_k response[k] * weights[k]`;
//! * *weights* are the beamforming column vector applied at the array.
//!
//! A beam matched to a response is therefore its element-wise conjugate.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::codebooks::Codeword;
use crate::error::{Error, Result};

/// Propagation speed used to derive the wavelength.
pub const SPEED_OF_LIGHT: f64 = 3.0e8;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm - 30.0)
}

pub fn watts_to_dbm(w: f64) -> f64 {
    linear_to_db(w) + 30.0
}

/// How the Rician factor splits power between the LoS and NLoS paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NlosNormalization {
    /// All NLoS paths together carry `1/kappa` of the LoS power.
    #[default]
    Aggregate,
    /// Every NLoS path individually carries `1/kappa` of the LoS power.
    PerPath,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    /// Number of array elements; odd so the array has a centre element.
    pub n_antennas: usize,
    /// Carrier frequency in Hz.
    pub carrier_freq: f64,
    /// Element spacing in metres, half a wavelength.
    pub antenna_spacing: f64,
    /// Total transmit power in watts.
    pub tx_power: f64,
    /// Receiver noise power in watts.
    pub noise_power: f64,
    /// Channel gain at 1 m, in dB.
    pub ref_gain_db: f64,
    /// Rician factor in dB.
    pub rician_factor_db: f64,
    pub n_nlos_paths: usize,
    #[serde(default)]
    pub nlos_normalization: NlosNormalization,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self::new(257, 30e9)
    }
}

impl SystemConfig {
    /// Half-wavelength array with 30 dBm transmit power, -80 dBm noise,
    /// -62 dB reference gain, 30 dB Rician factor and two NLoS paths.
    pub fn new(n_antennas: usize, carrier_freq: f64) -> Self {
        Self {
            n_antennas,
            carrier_freq,
            antenna_spacing: SPEED_OF_LIGHT / (2.0 * carrier_freq),
            tx_power: dbm_to_watts(30.0),
            noise_power: dbm_to_watts(-80.0),
            ref_gain_db: -62.0,
            rician_factor_db: 30.0,
            n_nlos_paths: 2,
            nlos_normalization: NlosNormalization::Aggregate,
        }
    }

    /// Pure line-of-sight variant of this configuration.
    pub fn line_of_sight(mut self) -> Self {
        self.n_nlos_paths = 0;
        self
    }

    pub fn with_n_antennas(mut self, n: usize) -> Self {
        self.n_antennas = n;
        self
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_freq
    }

    /// Array aperture `D = (N - 1) d0`.
    pub fn aperture(&self) -> f64 {
        (self.n_antennas.saturating_sub(1)) as f64 * self.antenna_spacing
    }

    pub fn ref_gain(&self) -> f64 {
        db_to_linear(self.ref_gain_db)
    }

    pub fn rician_factor(&self) -> f64 {
        db_to_linear(self.rician_factor_db)
    }

    /// Offset from array position to signed element index.
    pub fn center(&self) -> usize {
        (self.n_antennas - 1) / 2
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_antennas == 0 || self.n_antennas.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "n_antennas must be odd and positive (elements n = 0, ±1, …, ±(N-1)/2), got {}",
                self.n_antennas
            )));
        }
        if !(self.carrier_freq > 0.0) {
            return Err(Error::Config(format!(
                "carrier_freq must be positive, got {}",
                self.carrier_freq
            )));
        }
        let half_wave = SPEED_OF_LIGHT / (2.0 * self.carrier_freq);
        if ((self.antenna_spacing - half_wave) / half_wave).abs() > 1e-12 {
            return Err(Error::Config(format!(
                "antenna_spacing {} must equal half a wavelength ({half_wave})",
                self.antenna_spacing
            )));
        }
        if !(self.tx_power > 0.0) || !(self.noise_power > 0.0) {
            return Err(Error::Config(format!(
                "tx_power and noise_power must be positive, got {} W and {} W",
                self.tx_power, self.noise_power
            )));
        }
        for (name, v) in [
            ("ref_gain_db", self.ref_gain_db),
            ("rician_factor_db", self.rician_factor_db),
        ] {
            if !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(())
    }
}

/// Polar position of the user relative to the array centre.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UserLocation {
    pub range_m: f64,
    /// Cosine of the angle of departure.
    pub spatial_angle: f64,
}

impl UserLocation {
    pub fn new(range_m: f64, spatial_angle: f64) -> Result<Self> {
        if !(range_m > 0.0) || !range_m.is_finite() {
            return Err(Error::Domain(format!("range must be positive, got {range_m}")));
        }
        if !(spatial_angle.abs() < 1.0) {
            return Err(Error::Domain(format!(
                "spatial angle must lie in (-1, 1), got {spatial_angle}"
            )));
        }
        Ok(Self { range_m, spatial_angle })
    }

    /// Whether the user lies between the Fresnel and Rayleigh distances.
    pub fn in_fresnel_region(&self, config: &SystemConfig) -> bool {
        (fresnel_distance(config)..=rayleigh_distance(config)).contains(&self.range_m)
    }
}

/// Rayleigh distance `2 D² / λ`.
pub fn rayleigh_distance(config: &SystemConfig) -> f64 {
    let d = config.aperture();
    2.0 * d * d / config.wavelength()
}

/// Simplified Fresnel distance `1.2 D`.
pub fn fresnel_distance(config: &SystemConfig) -> f64 {
    1.2 * config.aperture()
}

/// Element-to-user distance model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldModel {
    /// Exact spherical wavefront.
    Exact,
    /// Second-order (Fresnel) expansion of the element distance.
    Fresnel,
}

fn element_distance(loc: &UserLocation, offset: f64, model: FieldModel) -> f64 {
    let r0 = loc.range_m;
    let th = loc.spatial_angle;
    match model {
        FieldModel::Exact => (r0 * r0 + offset * offset - 2.0 * r0 * th * offset).sqrt(),
        FieldModel::Fresnel => r0 - offset * th + offset * offset * (1.0 - th * th) / (2.0 * r0),
    }
}

/// Near-field response `(1/√N) exp(-j2π r_n / λ)` of a user at `loc`.
pub fn near_steering(config: &SystemConfig, loc: &UserLocation, model: FieldModel) -> Result<Vec<Complex64>> {
    if !(loc.range_m > 0.0) {
        return Err(Error::Domain(format!("range must be positive, got {}", loc.range_m)));
    }
    let n = config.n_antennas;
    let scale = 1.0 / (n as f64).sqrt();
    let k0 = 2.0 * PI / config.wavelength();
    let c = config.center() as f64;
    Ok((0..n)
        .map(|k| {
            let offset = (k as f64 - c) * config.antenna_spacing;
            Complex64::from_polar(scale, -k0 * element_distance(loc, offset, model))
        })
        .collect())
}

/// Far-field DFT beam `(1/√N) exp(-jπ k θ)`, `k = 0..N-1`.
pub fn far_steering(config: &SystemConfig, theta: f64) -> Vec<Complex64> {
    let n = config.n_antennas;
    let scale = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|k| Complex64::from_polar(scale, -PI * k as f64 * theta))
        .collect()
}

/// Complex LoS gain including the Rician split and free-space loss.
pub fn rician_los_gain(config: &SystemConfig, loc: &UserLocation) -> Complex64 {
    let kappa = config.rician_factor();
    let magnitude = (kappa / (kappa + 1.0)).sqrt() * config.ref_gain().sqrt() / loc.range_m;
    Complex64::from_polar(magnitude, -2.0 * PI * loc.range_m / config.wavelength())
}

/// One channel realisation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Channel {
    /// Downlink response row: the noiseless sample for beam `w` is
    /// `sum_k coeffs[k] * w[k]`.
    pub coeffs: Vec<Complex64>,
    pub los_component: Vec<Complex64>,
    /// Ground truth, used only for scoring.
    pub truth: UserLocation,
}

impl Channel {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Noiseless complex gain `hᴴw` of a weight vector.
    pub fn gain(&self, weights: &[Complex64]) -> Result<Complex64> {
        if weights.len() != self.coeffs.len() {
            return Err(Error::DimensionMismatch {
                expected: self.coeffs.len(),
                actual: weights.len(),
            });
        }
        Ok(self.coeffs.iter().zip(weights).map(|(h, w)| h * w).sum())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Circularly-symmetric complex Gaussian sample with the given variance.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (0.5 * variance).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(s * re, s * im)
}

/// Draws a channel: one LoS path plus `L` scatterers.
///
/// NLoS angles are uniform on (-1, 1), ranges uniform between the Fresnel
/// and Rayleigh distances, and gains complex Gaussian with equal average
/// power per path, scaled against the LoS power by the Rician factor.
pub fn make_channel<R: Rng + ?Sized>(config: &SystemConfig, loc: &UserLocation, rng: &mut R) -> Result<Channel> {
    let n = config.n_antennas as f64;
    let beta = rician_los_gain(config, loc);
    let los_scale = n.sqrt() * beta;
    let los_component: Vec<Complex64> = near_steering(config, loc, FieldModel::Exact)?
        .into_iter()
        .map(|b| los_scale * b)
        .collect();
    let mut coeffs = los_component.clone();

    let paths = config.n_nlos_paths;
    if paths > 0 {
        let per_path_power = match config.nlos_normalization {
            NlosNormalization::Aggregate => beta.norm_sqr() / config.rician_factor(),
            NlosNormalization::PerPath => beta.norm_sqr() * paths as f64 / config.rician_factor(),
        };
        let (z_lo, z_hi) = (fresnel_distance(config), rayleigh_distance(config));
        let path_scale = (n / paths as f64).sqrt();
        for _ in 0..paths {
            let angle = loop {
                let a: f64 = rng.random_range(-1.0..1.0);
                if a.abs() < 1.0 {
                    break a;
                }
            };
            let range = if z_hi > z_lo {
                rng.random_range(z_lo..=z_hi)
            } else {
                z_hi.max(1e-3)
            };
            let gain = complex_gaussian(rng, per_path_power) * path_scale;
            let scatterer = UserLocation::new(range, angle)?;
            for (c, b) in coeffs
                .iter_mut()
                .zip(near_steering(config, &scatterer, FieldModel::Exact)?)
            {
                *c += gain * b;
            }
        }
    }
    Ok(Channel {
        coeffs,
        los_component,
        truth: *loc,
    })
}

/// Received power `|√P hᴴw x + z|²` of one pilot with unit symbol `x`.
///
/// Passing `None` for the generator gives the noiseless power.
pub fn received_power<R: Rng + ?Sized>(
    ch: &Channel,
    w: &Codeword,
    config: &SystemConfig,
    noise: Option<&mut R>,
) -> Result<f64> {
    let signal = ch.gain(&w.weights)? * config.tx_power.sqrt();
    let z = match noise {
        Some(rng) => complex_gaussian(rng, config.noise_power),
        None => Complex64::new(0.0, 0.0),
    };
    Ok((signal + z).norm_sqr())
}

/// Achievable rate in bps/Hz of beam weights on the true channel.
pub fn rate_of_weights(ch: &Channel, weights: &[Complex64], config: &SystemConfig) -> Result<f64> {
    let g = ch.gain(weights)?.norm_sqr();
    Ok((1.0 + config.tx_power * g / config.noise_power).log2())
}

/// Achievable rate `log2(1 + P |hᴴw|² / σ²)`.
pub fn achievable_rate(ch: &Channel, w: &Codeword, config: &SystemConfig) -> Result<f64> {
    rate_of_weights(ch, &w.weights, config)
}

/// Reference SNR `N P β0 / (r0² σ²)` in dB.
pub fn reference_snr(config: &SystemConfig, loc: &UserLocation) -> f64 {
    linear_to_db(
        config.n_antennas as f64 * config.tx_power * config.ref_gain()
            / (loc.range_m * loc.range_m * config.noise_power),
    )
}

/// Transmit power that yields reference SNR `snr_db` for a user at `range_m`.
pub fn tx_power_for_snr(config: &SystemConfig, range_m: f64, snr_db: f64) -> f64 {
    db_to_linear(snr_db) * range_m * range_m * config.noise_power / (config.n_antennas as f64 * config.ref_gain())
}
