use serde::{Deserialize, Serialize};

use super::argmin;
use crate::channel::db_to_linear;
use crate::codebooks::AngularGrid;
use crate::error::{Error, Result};

/// Received powers of a sweep, labelled by grid index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerProfile {
    pub powers: Vec<f64>,
    /// Grid labels of the swept codewords. After shifting, labels may fall
    /// outside `1..=QU`; they denote the same beams one period lower.
    pub codeword_indices: Vec<i64>,
    pub shifted: bool,
}

impl PowerProfile {
    pub fn new(powers: Vec<f64>, codeword_indices: Vec<i64>) -> Result<Self> {
        if powers.len() != codeword_indices.len() {
            return Err(Error::DimensionMismatch {
                expected: codeword_indices.len(),
                actual: powers.len(),
            });
        }
        if powers.iter().any(|p| !(*p >= 0.0)) {
            return Err(Error::Domain("received powers must be finite and non-negative".into()));
        }
        Ok(Self {
            powers,
            codeword_indices,
            shifted: false,
        })
    }

    pub fn len(&self) -> usize {
        self.powers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.powers.is_empty()
    }
}

/// Re-orders a one-period sweep so that the angular support is contiguous.
///
/// The weakest codeword marks the boundary between two periods: everything
/// after it is moved one period (`Q` labels) down, giving labels
/// `ℓ-Q+1, …, ℓ` with `ℓ` the weakest codeword's label.
pub fn shift_profile(profile: &PowerProfile) -> Result<PowerProfile> {
    let q = profile.len() as i64;
    let pos = argmin(&profile.powers).ok_or(Error::NoSignal)?;
    let mut powers = Vec::with_capacity(profile.len());
    let mut labels = Vec::with_capacity(profile.len());
    for i in (pos + 1..profile.len()).chain(0..=pos) {
        powers.push(profile.powers[i]);
        let label = profile.codeword_indices[i];
        labels.push(if i > pos { label - q } else { label });
    }
    Ok(PowerProfile {
        powers,
        codeword_indices: labels,
        shifted: true,
    })
}

/// Codewords whose power exceeds `10^(-μ/10)` times the peak.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngularSupport {
    /// Member labels in ascending order.
    pub member_indices: Vec<i64>,
    pub left_angle: f64,
    pub right_angle: f64,
    pub width: f64,
}

impl AngularSupport {
    /// Middle member; the lower one for an even count.
    pub fn median(&self) -> i64 {
        self.member_indices[(self.member_indices.len() - 1) / 2]
    }

    /// `k` consecutive labels centred on the median (lower-biased for even `k`).
    pub fn middle(&self, k: usize) -> Vec<i64> {
        let start = self.median() - ((k as i64 - 1) / 2);
        (start..start + k as i64).collect()
    }
}

pub fn angular_support(profile: &PowerProfile, grid: &AngularGrid, mu_db: f64) -> Result<AngularSupport> {
    if profile.is_empty() {
        return Err(Error::Domain("angular support of an empty profile".into()));
    }
    let peak = profile.powers.iter().copied().fold(0.0, f64::max);
    if !(peak > 0.0) {
        return Err(Error::NoSignal);
    }
    let threshold = db_to_linear(-mu_db) * peak;
    let mut members: Vec<i64> = profile
        .powers
        .iter()
        .zip(&profile.codeword_indices)
        .filter(|(p, _)| **p > threshold)
        .map(|(_, &s)| s)
        .collect();
    members.sort_unstable();
    let left_angle = grid.angle(members[0]);
    let right_angle = grid.angle(*members.last().unwrap());
    Ok(AngularSupport {
        member_indices: members,
        left_angle,
        right_angle,
        width: right_angle - left_angle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(powers: &[f64], first: i64) -> PowerProfile {
        let labels = (first..first + powers.len() as i64).collect();
        PowerProfile::new(powers.to_vec(), labels).unwrap()
    }

    #[test]
    fn shift_identity_when_minimum_is_last() {
        let p = profile(&[3.0, 5.0, 2.0, 1.0], 10);
        let s = shift_profile(&p).unwrap();
        assert_eq!(s.powers, p.powers);
        assert_eq!(s.codeword_indices, p.codeword_indices);
        assert!(s.shifted);
    }

    #[test]
    fn shift_rotates_by_one_when_minimum_is_first() {
        let p = profile(&[0.1, 5.0, 2.0, 1.0], 10);
        let s = shift_profile(&p).unwrap();
        assert_eq!(s.powers, vec![5.0, 2.0, 1.0, 0.1]);
        assert_eq!(s.codeword_indices, vec![7, 8, 9, 10]);
    }

    #[test]
    fn shift_tie_uses_lowest_index() {
        let p = profile(&[4.0, 1.0, 6.0, 1.0, 5.0], 0);
        let s = shift_profile(&p).unwrap();
        assert_eq!(s.powers, vec![6.0, 1.0, 5.0, 4.0, 1.0]);
        assert_eq!(s.codeword_indices, vec![-3, -2, -1, 0, 1]);
    }

    #[test]
    fn support_of_single_peak() {
        let g = AngularGrid::new(16);
        let s = angular_support(&profile(&[0.1, 9.0, 0.2, 0.1], 3), &g, 3.0).unwrap();
        assert_eq!(s.member_indices, vec![4]);
        assert_eq!(s.width, 0.0);
        assert_eq!(s.median(), 4);
    }

    #[test]
    fn uniform_profile_is_all_support() {
        let g = AngularGrid::new(16);
        let s = angular_support(&profile(&[2.0; 5], 1), &g, 3.0).unwrap();
        assert_eq!(s.member_indices, vec![1, 2, 3, 4, 5]);
        assert_eq!(s.median(), 3);
        assert_eq!(s.middle(3), vec![2, 3, 4]);
        assert_eq!(s.middle(2), vec![3, 4]);
    }

    #[test]
    fn even_support_uses_lower_median() {
        let g = AngularGrid::new(16);
        let s = angular_support(&profile(&[0.0, 1.0, 1.0, 1.0, 1.0, 0.0], 1), &g, 3.0).unwrap();
        assert_eq!(s.median(), 3);
    }

    #[test]
    fn zero_profile_is_no_signal() {
        let g = AngularGrid::new(16);
        assert!(matches!(
            angular_support(&profile(&[0.0; 4], 1), &g, 3.0),
            Err(Error::NoSignal)
        ));
    }
}
