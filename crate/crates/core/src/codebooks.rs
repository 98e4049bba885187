//! Beamforming codebooks: conventional DFT, sparse DFT, central subarray and
//! polar-domain.
//!
//! All codebooks share an [`AngularGrid`] of `QU` spatial angles
//! `θ_s = (2s - QU - 1) / QU`, `s = 1..QU`, where `U` is the antenna
//! activation interval and `Q = (N-1)/U + 1` the number of active antennas
//! of the sparse array. Grid and codeword indices are 1-based.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{near_steering, FieldModel, SystemConfig, UserLocation};
use crate::error::{Error, Result};

/// Default polar-domain range quantisation constant.
pub const DEFAULT_BETA_DELTA: f64 = 1.2;
/// Default number of range samples per angle.
pub const DEFAULT_RANGE_SAMPLES: usize = 5;

/// Uniform grid of `n_points` spatial angles in (-1, 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AngularGrid {
    pub n_points: usize,
}

impl AngularGrid {
    pub fn new(n_points: usize) -> Self {
        assert!(n_points > 0, "angular grid needs at least one point");
        Self { n_points }
    }

    pub fn spacing(&self) -> f64 {
        2.0 / self.n_points as f64
    }

    /// Angle of grid label `s`. Labels outside `1..=n_points` continue the
    /// grid periodically outside (-1, 1).
    pub fn angle(&self, s: i64) -> f64 {
        let n = self.n_points as i64;
        (2 * s - n - 1) as f64 / n as f64
    }

    pub fn angles(&self) -> Vec<f64> {
        (1..=self.n_points as i64).map(|s| self.angle(s)).collect()
    }

    /// Wraps any label into `1..=n_points` (an angle shift by a multiple of 2).
    pub fn wrap(&self, s: i64) -> usize {
        (s - 1).rem_euclid(self.n_points as i64) as usize + 1
    }

    /// Label of the grid angle closest to `theta`.
    pub fn nearest(&self, theta: f64) -> usize {
        let n = self.n_points as f64;
        let s = ((theta * n + n + 1.0) / 2.0).round() as i64;
        s.clamp(1, self.n_points as i64) as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Codeword {
    /// Unit-norm weights over all `N` antennas, zero where inactive.
    pub weights: Vec<Complex64>,
    pub active_mask: Vec<bool>,
    /// NaN for weights not steered to a grid angle; serialised as `null`.
    #[serde(with = "nan_as_null")]
    pub steer_angle: f64,
    pub steer_range: Option<f64>,
    /// 1-based position within the codebook.
    pub index: usize,
    /// 1-based grid label of `steer_angle`.
    pub grid_index: usize,
    /// 1-based range sample for polar-domain codewords.
    pub range_index: Option<usize>,
}

mod nan_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_nan() {
            s.serialize_none()
        } else {
            s.serialize_some(x)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

impl Codeword {
    /// Codeword from arbitrary weights (e.g. an estimated channel), normalised
    /// to unit norm with every non-zero weight marked active.
    pub fn from_weights(weights: Vec<Complex64>) -> Result<Self> {
        let norm = weights.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Domain("cannot normalise a zero weight vector".into()));
        }
        let weights: Vec<Complex64> = weights.into_iter().map(|w| w / norm).collect();
        let active_mask = weights.iter().map(|w| *w != Complex64::new(0.0, 0.0)).collect();
        Ok(Self {
            weights,
            active_mask,
            steer_angle: f64::NAN,
            steer_range: None,
            index: 0,
            grid_index: 0,
            range_index: None,
        })
    }

    pub fn active_count(&self) -> usize {
        self.active_mask.iter().filter(|&&a| a).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodebookKind {
    Dft,
    SparseDft,
    Subarray,
    Polar,
}

/// Construction parameters; enough to regenerate the weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodebookParams {
    pub interval: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subarray_m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_ranges: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    pub kind: CodebookKind,
    pub grid: AngularGrid,
    pub params: CodebookParams,
    pub entries: Vec<Codeword>,
    /// Soft constraint violations noticed during construction.
    pub warnings: Vec<String>,
}

impl Codebook {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Codeword steering to grid label `s` (single-range codebooks).
    pub fn by_grid_index(&self, s: usize) -> Option<&Codeword> {
        match self.kind {
            CodebookKind::Polar => None,
            CodebookKind::SparseDft => {
                let first = self.entries.first()?.grid_index;
                self.entries.get(s.checked_sub(first)?)
            }
            CodebookKind::Dft | CodebookKind::Subarray => self.entries.get(s.checked_sub(1)?),
        }
    }

    /// The `V` range samples of a polar codebook at grid label `s`.
    pub fn sub_codebook(&self, s: usize) -> &[Codeword] {
        let v = self.params.n_ranges.unwrap_or(0);
        if self.kind != CodebookKind::Polar || s == 0 || s > self.grid.n_points {
            return &[];
        }
        &self.entries[(s - 1) * v..s * v]
    }
}

/// Number of active antennas `Q = (N-1)/U + 1` of the sparse array.
pub fn active_count(n_antennas: usize, interval: usize) -> Result<usize> {
    if interval == 0 {
        return Err(Error::Config("activation interval U must be at least 1".into()));
    }
    if n_antennas == 0 || !(n_antennas - 1).is_multiple_of(interval) {
        return Err(Error::Config(format!(
            "(N-1) must be divisible by the activation interval so that Q = (N-1)/U + 1 is an \
             integer; N = {n_antennas}, U = {interval}"
        )));
    }
    Ok((n_antennas - 1) / interval + 1)
}

/// Antennas active at positions `0, U, 2U, …, N-1`.
pub fn sampling_vector(n_antennas: usize, interval: usize) -> Result<Vec<bool>> {
    active_count(n_antennas, interval)?;
    Ok((0..n_antennas).map(|k| k % interval == 0).collect())
}

/// `√(1.2 (N-1))`: largest subarray keeping users in its far field, and
/// therefore also the largest usable activation interval.
pub fn far_field_subarray_limit(n_antennas: usize) -> f64 {
    (1.2 * (n_antennas.saturating_sub(1)) as f64).sqrt()
}

fn dft_weights(n: usize, positions: impl Iterator<Item = usize>, theta: f64, count: usize) -> Vec<Complex64> {
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    let scale = 1.0 / (count as f64).sqrt();
    for k in positions {
        w[k] = Complex64::from_polar(scale, -PI * k as f64 * theta);
    }
    w
}

/// Conventional full-array DFT codebook on the `QU`-point grid.
pub fn dft_codebook(config: &SystemConfig, interval: usize) -> Result<Codebook> {
    config.validate()?;
    let q = active_count(config.n_antennas, interval)?;
    let grid = AngularGrid::new(q * interval);
    let n = config.n_antennas;
    let entries = (1..=grid.n_points)
        .map(|s| {
            let theta = grid.angle(s as i64);
            Codeword {
                weights: dft_weights(n, 0..n, theta, n),
                active_mask: vec![true; n],
                steer_angle: theta,
                steer_range: None,
                index: s,
                grid_index: s,
                range_index: None,
            }
        })
        .collect();
    Ok(Codebook {
        kind: CodebookKind::Dft,
        grid,
        params: CodebookParams {
            interval,
            subarray_m: None,
            n_ranges: None,
            beta_delta: None,
        },
        entries,
        warnings: Vec::new(),
    })
}

/// Sparse DFT codebook: `Q` sparse-array beams covering one period
/// `[-1/U, 1/U)` of the received pattern.
pub fn sparse_dft_codebook(config: &SystemConfig, interval: usize) -> Result<Codebook> {
    config.validate()?;
    let n = config.n_antennas;
    let q = active_count(n, interval)?;
    if q % 2 == 0 {
        return Err(Error::Config(format!(
            "the symmetric sweep window needs an odd number of active antennas Q = (N-1)/U + 1; \
             N = {n}, U = {interval} gives Q = {q}"
        )));
    }
    let mut warnings = Vec::new();
    if interval as f64 > far_field_subarray_limit(n) {
        warnings.push(format!(
            "activation interval U = {interval} exceeds √(1.2(N-1)) = {:.3}; no admissible \
             central subarray exists",
            far_field_subarray_limit(n)
        ));
    }
    let grid = AngularGrid::new(q * interval);
    let first = (q * interval - q + 2) / 2;
    let mask = sampling_vector(n, interval)?;
    let entries = (0..q)
        .map(|i| {
            let s = first + i;
            let theta = grid.angle(s as i64);
            Codeword {
                weights: dft_weights(n, (0..n).step_by(interval), theta, q),
                active_mask: mask.clone(),
                steer_angle: theta,
                steer_range: None,
                index: i + 1,
                grid_index: s,
                range_index: None,
            }
        })
        .collect();
    Ok(Codebook {
        kind: CodebookKind::SparseDft,
        grid,
        params: CodebookParams {
            interval,
            subarray_m: None,
            n_ranges: None,
            beta_delta: None,
        },
        entries,
        warnings,
    })
}

/// Admissible central-subarray sizes `U ≤ M ≤ √(1.2(N-1))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubarrayBounds {
    pub lower: f64,
    pub upper: f64,
}

impl SubarrayBounds {
    pub fn new(n_antennas: usize, interval: usize) -> Self {
        Self {
            lower: interval as f64,
            upper: far_field_subarray_limit(n_antennas),
        }
    }

    /// Largest admissible integer size, if any.
    pub fn largest(&self) -> Option<usize> {
        let m = self.upper.floor() as usize;
        (m as f64 >= self.lower).then_some(m)
    }

    pub fn check(&self, m: usize) -> Result<()> {
        let mf = m as f64;
        if mf < self.lower || mf > self.upper {
            return Err(Error::Config(format!(
                "central subarray size M = {m} violates U ≤ M ≤ √(1.2(N-1)), i.e. {} ≤ M ≤ {:.3} \
                 (far-field criterion 2M²d0²/λ ≤ 1.2D needs M ≤ {:.3}; beam-width criterion \
                 4/M ≤ 4/U needs M ≥ {})",
                self.lower, self.upper, self.upper, self.lower
            )));
        }
        Ok(())
    }
}

/// Central-subarray DFT codebook with `QU` beams; `M` must be admissible.
pub fn subarray_codebook(config: &SystemConfig, interval: usize, m_antennas: usize) -> Result<Codebook> {
    SubarrayBounds::new(config.n_antennas, interval).check(m_antennas)?;
    subarray_codebook_unchecked(config, interval, m_antennas)
}

/// Central-subarray codebook without the admissibility check, for sweeps
/// over deliberately undersized or oversized subarrays.
///
/// When `N - M` is odd the extra inactive antenna goes to the trailing side.
pub fn subarray_codebook_unchecked(config: &SystemConfig, interval: usize, m_antennas: usize) -> Result<Codebook> {
    config.validate()?;
    let n = config.n_antennas;
    let q = active_count(n, interval)?;
    if m_antennas == 0 || m_antennas > n {
        return Err(Error::Config(format!(
            "central subarray size must be in 1..=N ({n}), got {m_antennas}"
        )));
    }
    let grid = AngularGrid::new(q * interval);
    let start = (n - m_antennas) / 2;
    let block = start..start + m_antennas;
    let mask: Vec<bool> = (0..n).map(|k| block.contains(&k)).collect();
    let entries = (1..=grid.n_points)
        .map(|s| {
            let theta = grid.angle(s as i64);
            Codeword {
                weights: dft_weights(n, block.clone(), theta, m_antennas),
                active_mask: mask.clone(),
                steer_angle: theta,
                steer_range: None,
                index: s,
                grid_index: s,
                range_index: None,
            }
        })
        .collect();
    Ok(Codebook {
        kind: CodebookKind::Subarray,
        grid,
        params: CodebookParams {
            interval,
            subarray_m: Some(m_antennas),
            n_ranges: None,
            beta_delta: None,
        },
        entries,
        warnings: Vec::new(),
    })
}

/// Range scale `α_Δ = N² d0² / (2 λ β_Δ²)` of the polar-domain grid.
pub fn polar_alpha(config: &SystemConfig, beta_delta: f64) -> f64 {
    let n = config.n_antennas as f64;
    let d0 = config.antenna_spacing;
    n * n * d0 * d0 / (2.0 * config.wavelength() * beta_delta * beta_delta)
}

/// Sampled range `r_{s,v} = α_Δ (1 - θ_s²) / v`.
pub fn polar_range(alpha: f64, theta: f64, v: usize) -> f64 {
    alpha * (1.0 - theta * theta) / v as f64
}

/// Polar-domain codebook: for every grid angle, `V` beams focused at
/// ranges `r_{s,v}`, ordered angle-major.
pub fn polar_codebook(config: &SystemConfig, n_ranges: usize, beta_delta: f64, grid: AngularGrid) -> Result<Codebook> {
    config.validate()?;
    if n_ranges == 0 {
        return Err(Error::Config("polar codebook needs at least one range sample".into()));
    }
    if !(beta_delta > 0.0) || !beta_delta.is_finite() {
        return Err(Error::Config(format!("beta_delta must be positive, got {beta_delta}")));
    }
    let n = config.n_antennas;
    let alpha = polar_alpha(config, beta_delta);
    let mut entries = Vec::with_capacity(grid.n_points * n_ranges);
    for s in 1..=grid.n_points {
        let theta = grid.angle(s as i64);
        for v in 1..=n_ranges {
            let range = polar_range(alpha, theta, v);
            let loc = UserLocation {
                range_m: range,
                spatial_angle: theta,
            };
            let weights = near_steering(config, &loc, FieldModel::Exact)?
                .into_iter()
                .map(|b| b.conj())
                .collect();
            entries.push(Codeword {
                weights,
                active_mask: vec![true; n],
                steer_angle: theta,
                steer_range: Some(range),
                index: (s - 1) * n_ranges + v,
                grid_index: s,
                range_index: Some(v),
            });
        }
    }
    let interval = grid.n_points.saturating_sub(n - 1);
    Ok(Codebook {
        kind: CodebookKind::Polar,
        grid,
        params: CodebookParams {
            interval,
            subarray_m: None,
            n_ranges: Some(n_ranges),
            beta_delta: Some(beta_delta),
        },
        entries,
        warnings: Vec::new(),
    })
}

/// Text (JSON) form of a codebook: parameters plus per-codeword steering
/// metadata, with weights optionally inlined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodebookDescriptor {
    pub kind: CodebookKind,
    pub n_antennas: usize,
    pub carrier_freq: f64,
    pub grid_points: usize,
    pub params: CodebookParams,
    pub entries: Vec<CodewordDescriptor>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodewordDescriptor {
    pub index: usize,
    pub grid_index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range_index: Option<usize>,
    pub angle: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Complex64>>,
}

impl Codebook {
    pub fn describe(&self, config: &SystemConfig, inline_weights: bool) -> CodebookDescriptor {
        CodebookDescriptor {
            kind: self.kind,
            n_antennas: config.n_antennas,
            carrier_freq: config.carrier_freq,
            grid_points: self.grid.n_points,
            params: self.params.clone(),
            entries: self
                .entries
                .iter()
                .map(|c| CodewordDescriptor {
                    index: c.index,
                    grid_index: c.grid_index,
                    range_index: c.range_index,
                    angle: c.steer_angle,
                    range: c.steer_range,
                    weights: inline_weights.then(|| c.weights.clone()),
                })
                .collect(),
        }
    }

    pub fn to_json(&self, config: &SystemConfig, inline_weights: bool) -> Result<String> {
        serde_json::to_string_pretty(&self.describe(config, inline_weights))
            .map_err(|e| Error::Serialize(e.to_string()))
    }

    /// Rebuilds a codebook from its descriptor. Weights are regenerated
    /// from the parameters unless inlined.
    pub fn from_descriptor(desc: &CodebookDescriptor) -> Result<Self> {
        let config = SystemConfig::new(desc.n_antennas, desc.carrier_freq);
        let p = &desc.params;
        let missing = |f: &str| Error::Config(format!("{f} missing from codebook descriptor"));
        let mut cb = match desc.kind {
            CodebookKind::Dft => dft_codebook(&config, p.interval)?,
            CodebookKind::SparseDft => sparse_dft_codebook(&config, p.interval)?,
            CodebookKind::Subarray => {
                subarray_codebook_unchecked(&config, p.interval, p.subarray_m.ok_or_else(|| missing("subarray_m"))?)?
            }
            CodebookKind::Polar => polar_codebook(
                &config,
                p.n_ranges.ok_or_else(|| missing("n_ranges"))?,
                p.beta_delta.ok_or_else(|| missing("beta_delta"))?,
                AngularGrid::new(desc.grid_points),
            )?,
        };
        if cb.entries.len() != desc.entries.len() {
            return Err(Error::Config(format!(
                "descriptor lists {} codewords but its parameters generate {}",
                desc.entries.len(),
                cb.entries.len()
            )));
        }
        for (entry, d) in cb.entries.iter_mut().zip(&desc.entries) {
            if let Some(w) = &d.weights {
                if w.len() != config.n_antennas {
                    return Err(Error::DimensionMismatch {
                        expected: config.n_antennas,
                        actual: w.len(),
                    });
                }
                entry.weights = w.clone();
            }
        }
        Ok(cb)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let desc: CodebookDescriptor = serde_json::from_str(text).map_err(|e| Error::Serialize(e.to_string()))?;
        Self::from_descriptor(&desc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::far_steering;

    fn norm(v: &[Complex64]) -> f64 {
        v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    fn assert_well_formed(cb: &Codebook) {
        for c in &cb.entries {
            assert!((norm(&c.weights) - 1.0).abs() < 1e-12);
            for (w, &a) in c.weights.iter().zip(&c.active_mask) {
                if !a {
                    assert_eq!(*w, Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn sampling_vector_cases() {
        let v = sampling_vector(257, 16).unwrap();
        assert_eq!(v.iter().filter(|&&a| a).count(), 17);
        assert!(sampling_vector(257, 1).unwrap().iter().all(|&a| a));
        assert_eq!(sampling_vector(5, 2).unwrap(), vec![true, false, true, false, true]);
        let err = sampling_vector(257, 15).unwrap_err().to_string();
        assert!(err.contains("divisible"), "{err}");
    }

    #[test]
    fn grid_properties() {
        let g = AngularGrid::new(272);
        let a = g.angles();
        assert!(a.windows(2).all(|w| w[1] > w[0]));
        assert!(a.iter().all(|t| t.abs() < 1.0));
        assert!(a.windows(2).all(|w| ((w[1] - w[0]) - g.spacing()).abs() < 1e-15));
        assert_eq!(a[0], -a[271]);
        assert_eq!(g.wrap(0), 272);
        assert_eq!(g.wrap(273), 1);
        assert_eq!(g.nearest(g.angle(100)), 100);
    }

    #[test]
    fn sparse_codebook_spans_one_period() {
        let cfg = SystemConfig::default();
        let cb = sparse_dft_codebook(&cfg, 16).unwrap();
        assert_eq!(cb.len(), 17);
        assert_well_formed(&cb);
        let first = cb.entries[0].steer_angle;
        let last = cb.entries[16].steer_angle;
        assert!((first + 1.0 / 16.0).abs() < 1e-15);
        assert!(last < 1.0 / 16.0);
        assert!((last + cb.grid.spacing() - 1.0 / 16.0).abs() < 1e-15);
        assert!(cb.warnings.is_empty());
        assert_eq!(cb.entries[0].grid_index, 128);
    }

    #[test]
    fn sparse_codebook_with_unit_interval_is_dft() {
        let cfg = SystemConfig::new(33, 30e9);
        let cb = sparse_dft_codebook(&cfg, 1).unwrap();
        assert_eq!(cb.len(), 33);
        for c in &cb.entries {
            let a = far_steering(&cfg, c.steer_angle);
            assert!(c.weights.iter().zip(&a).all(|(x, y)| (x - y).norm() < 1e-12));
        }
    }

    #[test]
    fn sparse_codebook_rejects_even_q_and_warns_on_large_interval() {
        let cfg = SystemConfig::new(257, 30e9);
        assert!(sparse_dft_codebook(&cfg, 256).is_err());
        let cb = sparse_dft_codebook(&cfg, 64).unwrap();
        assert_eq!(cb.len(), 5);
        assert_eq!(cb.warnings.len(), 1);
    }

    #[test]
    fn subarray_bounds_for_reference_array() {
        let b = SubarrayBounds::new(257, 16);
        assert_eq!(b.lower, 16.0);
        assert!((b.upper - 17.527).abs() < 1e-3);
        assert_eq!(b.largest(), Some(17));
        assert!(b.check(16).is_ok() && b.check(17).is_ok());
        assert!(b.check(18).is_err());
        assert!(b.check(15).is_err());
    }

    #[test]
    fn subarray_codebook_structure() {
        let cfg = SystemConfig::default();
        let cb = subarray_codebook(&cfg, 16, 17).unwrap();
        assert_eq!(cb.len(), 272);
        assert_well_formed(&cb);
        let mask = &cb.entries[0].active_mask;
        assert!(mask[..120].iter().all(|&a| !a));
        assert!(mask[120..137].iter().all(|&a| a));
        assert!(mask[137..].iter().all(|&a| !a));
        // Far-field condition of the subarray.
        let m = 17.0;
        assert!(2.0 * m * m * cfg.antenna_spacing.powi(2) / cfg.wavelength() <= 1.2 * cfg.aperture());
        assert!(4.0 / m <= 4.0 / 16.0);
        assert!(subarray_codebook(&cfg, 16, 18).is_err());
        assert!(subarray_codebook_unchecked(&cfg, 16, 64).is_ok());
    }

    #[test]
    fn polar_codebook_ranges() {
        let cfg = SystemConfig::default();
        let grid = AngularGrid::new(272);
        let cb = polar_codebook(&cfg, 5, 1.2, grid).unwrap();
        assert_eq!(cb.len(), 272 * 5);
        assert_well_formed(&cb);
        let alpha = polar_alpha(&cfg, 1.2);
        for s in [1, 100, 136, 272] {
            let sub = cb.sub_codebook(s);
            assert_eq!(sub.len(), 5);
            let r: Vec<f64> = sub.iter().map(|c| c.steer_range.unwrap()).collect();
            assert!(r.windows(2).all(|w| w[1] < w[0]));
            let th = grid.angle(s as i64);
            assert!((r[0] - alpha * (1.0 - th * th)).abs() < 1e-12);
        }
    }

    #[test]
    fn polar_codeword_is_matched_to_near_steering() {
        let cfg = SystemConfig::default();
        let cb = polar_codebook(&cfg, 5, 1.2, AngularGrid::new(272)).unwrap();
        let c = &cb.sub_codebook(77)[2];
        let loc = UserLocation::new(c.steer_range.unwrap(), c.steer_angle).unwrap();
        let b = near_steering(&cfg, &loc, FieldModel::Exact).unwrap();
        assert!(c.weights.iter().zip(&b).all(|(w, x)| (w - x.conj()).norm() < 1e-12));
    }

    #[test]
    fn descriptor_round_trip() {
        let cfg = SystemConfig::new(65, 30e9);
        let cb = polar_codebook(&cfg, 3, 1.2, AngularGrid::new(72)).unwrap();
        let back = Codebook::from_json(&cb.to_json(&cfg, false).unwrap()).unwrap();
        assert_eq!(back, cb);
        let sub = subarray_codebook(&cfg, 8, 8).unwrap();
        let back = Codebook::from_json(&sub.to_json(&cfg, true).unwrap()).unwrap();
        assert_eq!(back.entries, sub.entries);
    }
}
