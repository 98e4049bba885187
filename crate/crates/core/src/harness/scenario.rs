//! Scenario files: TOML documents describing one experiment.
//!
//! ```toml
//! [system]
//! n_antennas = 257
//! carrier_freq_hz = 30e9
//! tx_power_dbm = 30.0
//! noise_power_dbm = -80.0
//! ref_gain_db = -62.0
//! rician_factor_db = 30.0
//! n_nlos_paths = 2
//!
//! [training]          # every key optional
//! interval = 16
//! subarray_m = 17
//! n_ranges = 5
//! beta_delta = 1.2
//!
//! [user]
//! range_m = [20.0, 20.0]
//! angle = [-0.5, 0.5]
//! on_grid = false
//!
//! [sweep]
//! variable = "snr"
//! values = [20.0, 30.0, 40.0]
//!
//! [run]
//! n_trials = 1000
//! master_seed = 1
//!
//! [timing]
//! t_total_s = 2e-4
//! t_symbol_s = 1e-7
//!
//! [[schemes]]
//! kind = "three_phase"
//! k = 1
//! ```

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::{dbm_to_watts, NlosNormalization, SystemConfig};
use crate::codebooks::{active_count, SubarrayBounds, DEFAULT_BETA_DELTA, DEFAULT_RANGE_SAMPLES};
use crate::error::{Error, Result};
use crate::training::{TrainingContext, TrainingParams, DEFAULT_SUPPORT_DB};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub n_antennas: usize,
    pub carrier_freq_hz: f64,
    pub tx_power_dbm: f64,
    pub noise_power_dbm: f64,
    pub ref_gain_db: f64,
    pub rician_factor_db: f64,
    pub n_nlos_paths: usize,
    #[serde(default)]
    pub nlos_normalization: NlosNormalization,
}

impl SystemSection {
    pub fn to_config(&self) -> SystemConfig {
        let mut c = SystemConfig::new(self.n_antennas, self.carrier_freq_hz);
        c.tx_power = dbm_to_watts(self.tx_power_dbm);
        c.noise_power = dbm_to_watts(self.noise_power_dbm);
        c.ref_gain_db = self.ref_gain_db;
        c.rician_factor_db = self.rician_factor_db;
        c.n_nlos_paths = self.n_nlos_paths;
        c.nlos_normalization = self.nlos_normalization;
        c
    }
}

/// Training parameters; omitted values are derived from the array size.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainingSection {
    pub interval: Option<usize>,
    pub subarray_m: Option<usize>,
    pub n_ranges: Option<usize>,
    pub beta_delta: Option<f64>,
    pub support_db: Option<f64>,
}

impl TrainingSection {
    /// Resolves the parameters for `config`. Explicit values are kept unless
    /// `rederive` is set (array-size sweeps).
    pub fn resolve(&self, config: &SystemConfig, rederive: bool) -> Result<TrainingParams> {
        let mut p = match self.interval {
            Some(u) if !rederive => {
                active_count(config.n_antennas, u)?;
                let m = SubarrayBounds::new(config.n_antennas, u).largest().unwrap_or(1);
                TrainingParams {
                    interval: u,
                    subarray_m: m,
                    n_ranges: DEFAULT_RANGE_SAMPLES,
                    middle_k: 1,
                    beta_delta: DEFAULT_BETA_DELTA,
                    support_db: DEFAULT_SUPPORT_DB,
                }
            }
            _ => TrainingParams::for_config(config)?,
        };
        if !rederive {
            if let Some(m) = self.subarray_m {
                p.subarray_m = m;
            }
        }
        if let Some(v) = self.n_ranges {
            p.n_ranges = v;
        }
        if let Some(b) = self.beta_delta {
            p.beta_delta = b;
        }
        if let Some(s) = self.support_db {
            p.support_db = s;
        }
        Ok(p)
    }
}

/// How user locations are drawn for each trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UserPlacement {
    /// Uniform range interval in metres (equal ends fix the range).
    pub range_m: [f64; 2],
    /// Uniform spatial-angle interval.
    pub angle: [f64; 2],
    /// Snap the drawn angle to the nearest training-grid angle.
    #[serde(default)]
    pub on_grid: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// Reference SNR in dB, set through the transmit power.
    Snr,
    /// User range in metres.
    Range,
    /// Rician factor in dB.
    Rician,
    /// Central subarray size (admissibility bounds not enforced).
    SubarrayM,
    /// Array size; interval and subarray size are re-derived per value.
    NAntennas,
    None,
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Snr => "snr",
            Self::Range => "range",
            Self::Rician => "rician",
            Self::SubarrayM => "subarray_m",
            Self::NAntennas => "n_antennas",
            Self::None => "none",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub variable: SweepVariable,
    #[serde(default)]
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default = "default_trials")]
    pub n_trials: usize,
    #[serde(default)]
    pub master_seed: u64,
    /// Disable receiver noise during training.
    #[serde(default)]
    pub noiseless: bool,
}

fn default_trials() -> usize {
    1000
}

/// Frame timing used for the effective rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Timing {
    /// Total transmission time per frame in seconds.
    pub t_total_s: f64,
    /// Duration of one pilot symbol in seconds.
    pub t_symbol_s: f64,
}

impl Default for Timing {
    fn default() -> Self {
        Self {
            t_total_s: 0.2e-3,
            t_symbol_s: 0.1e-6,
        }
    }
}

impl Timing {
    /// Fraction of the frame left for data after `pilots` training symbols.
    pub fn efficiency(&self, pilots: usize) -> f64 {
        1.0 - pilots as f64 * self.t_symbol_s / self.t_total_s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Scheme {
    ThreePhase {
        #[serde(default = "one")]
        k: usize,
    },
    Exhaustive,
    TwoPhase {
        #[serde(default = "one")]
        k: usize,
    },
    FarField,
    LeastSquares,
    PerfectCsi,
}

fn one() -> usize {
    1
}

impl Scheme {
    pub fn id(&self) -> String {
        match self {
            Self::ThreePhase { k: 1 } => "three_phase".into(),
            Self::ThreePhase { k } => format!("three_phase_k{k}"),
            Self::Exhaustive => "exhaustive".into(),
            Self::TwoPhase { k: 1 } => "two_phase".into(),
            Self::TwoPhase { k } => format!("two_phase_k{k}"),
            Self::FarField => "far_field".into(),
            Self::LeastSquares => "least_squares".into(),
            Self::PerfectCsi => "perfect_csi".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub system: SystemSection,
    #[serde(default)]
    pub training: TrainingSection,
    pub user: UserPlacement,
    pub sweep: SweepSection,
    pub run: RunSection,
    #[serde(default)]
    pub timing: Timing,
    pub schemes: Vec<Scheme>,
}

impl Scenario {
    pub fn from_toml(text: &str, origin: &Path) -> Result<Self> {
        let scenario: Scenario = toml::from_str(text).map_err(|e| Error::Parse {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Serialize(e.to_string()))
    }

    /// Sweep values, or a single placeholder when nothing is swept.
    pub fn sweep_points(&self) -> Vec<f64> {
        if self.sweep.variable == SweepVariable::None {
            vec![0.0]
        } else {
            self.sweep.values.clone()
        }
    }

    /// System configuration and training parameters at one sweep value.
    pub fn setup_at(&self, value: f64) -> Result<(SystemConfig, TrainingParams)> {
        let mut config = self.system.to_config();
        let mut rederive = false;
        match self.sweep.variable {
            SweepVariable::Rician => config.rician_factor_db = value,
            SweepVariable::NAntennas => {
                config = config.with_n_antennas(as_count(value, "n_antennas")?);
                rederive = true;
            }
            _ => {}
        }
        config.validate()?;
        let mut params = self.training.resolve(&config, rederive)?;
        if self.sweep.variable == SweepVariable::SubarrayM {
            params.subarray_m = as_count(value, "subarray_m")?;
        }
        Ok((config, params))
    }

    /// Builds the codebooks for one sweep value, running every constraint check.
    pub fn context_at(&self, value: f64) -> Result<TrainingContext> {
        let (config, params) = self.setup_at(value)?;
        if self.sweep.variable == SweepVariable::SubarrayM {
            TrainingContext::new_unchecked(config, params)
        } else {
            TrainingContext::new(config, params)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.run.n_trials == 0 {
            return Err(Error::Config("run.n_trials must be at least 1".into()));
        }
        if self.schemes.is_empty() {
            return Err(Error::Config("at least one scheme is required".into()));
        }
        if self.sweep.variable != SweepVariable::None && self.sweep.values.is_empty() {
            return Err(Error::Config(format!(
                "sweep.values must be non-empty when sweeping `{}`",
                self.sweep.variable
            )));
        }
        for s in &self.schemes {
            if let Scheme::ThreePhase { k: 0 } | Scheme::TwoPhase { k: 0 } = s {
                return Err(Error::Config(format!("scheme `{}` needs k >= 1", s.id())));
            }
        }
        let [r_lo, r_hi] = self.user.range_m;
        if !(r_lo > 0.0 && r_hi >= r_lo) {
            return Err(Error::Config(format!(
                "user.range_m must satisfy 0 < lo <= hi, got [{r_lo}, {r_hi}]"
            )));
        }
        let [a_lo, a_hi] = self.user.angle;
        if !(a_lo > -1.0 && a_hi < 1.0 && a_hi >= a_lo) {
            return Err(Error::Config(format!(
                "user.angle must satisfy -1 < lo <= hi < 1, got [{a_lo}, {a_hi}]"
            )));
        }
        if !(self.timing.t_total_s > 0.0 && self.timing.t_symbol_s > 0.0) {
            return Err(Error::Config("timing values must be positive".into()));
        }
        for v in self.sweep_points() {
            if self.sweep.variable == SweepVariable::Range && !(v > 0.0) {
                return Err(Error::Config(format!("swept range must be positive, got {v}")));
            }
            self.context_at(v)?;
        }
        Ok(())
    }
}

fn as_count(value: f64, name: &str) -> Result<usize> {
    if value >= 1.0 && value.fract() == 0.0 {
        Ok(value as usize)
    } else {
        Err(Error::Config(format!(
            "swept {name} must be a positive integer, got {value}"
        )))
    }
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Scenario::from_toml(&text, path)
}
