use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{Result, SpinalError};

pub const DEFAULT_QUADRATURE_POINTS: usize = 64;

/// Partition `0 = theta_0 < ... < theta_N = pi/2` with weights
/// `b_t = (theta_t - theta_{t-1}) / pi`, which sum to one half.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadratureScheme {
    angles: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureScheme {
    /// Equal spacing: `theta_t = t pi / (2N)`, every weight `1 / (2N)`.
    pub fn uniform(points: usize) -> Result<Self> {
        if points == 0 {
            return Err(SpinalError::param("quadrature_N", "need at least one angle"));
        }
        let mut angles: Vec<f64> = (0..=points).map(|t| t as f64 * FRAC_PI_2 / points as f64).collect();
        angles[points] = FRAC_PI_2;
        Ok(QuadratureScheme {
            angles,
            weights: vec![0.5 / points as f64; points],
        })
    }

    /// Arbitrary partition. The endpoints must be exactly `0` and `pi/2`.
    pub fn from_angles(angles: Vec<f64>) -> Result<Self> {
        if angles.len() < 2 || angles[0] != 0.0 || *angles.last().unwrap() != FRAC_PI_2 {
            return Err(SpinalError::param(
                "quadrature angles",
                "must start at 0 and end at pi/2",
            ));
        }
        if angles
            .windows(2)
            .any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
        {
            return Err(SpinalError::param("quadrature angles", "must be strictly increasing"));
        }
        let weights = angles
            .windows(2)
            .map(|w| (w[1] - w[0]) / std::f64::consts::PI)
            .collect();
        Ok(QuadratureScheme { angles, weights })
    }

    /// Number of weighted angles `N`.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `theta_0 ..= theta_N`.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// `b_1 ..= b_N`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Pairs `(theta_t, b_t)` for `t = 1..=N`.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.angles[1..].iter().copied().zip(self.weights.iter().copied())
    }
}

impl Default for QuadratureScheme {
    fn default() -> Self {
        QuadratureScheme::uniform(DEFAULT_QUADRATURE_POINTS).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point() {
        let q = QuadratureScheme::uniform(1).unwrap();
        assert_eq!(q.angles(), &[0.0, FRAC_PI_2]);
        assert_eq!(q.weights(), &[0.5]);
    }

    #[test]
    fn default_has_64_equal_weights() {
        let q = QuadratureScheme::default();
        assert_eq!(q.len(), 64);
        assert!(q.weights().iter().all(|&w| w == 1.0 / 128.0));
    }

    #[test]
    fn weights_sum_to_half() {
        for n in [1, 2, 3, 7, 64, 100, 256, 1000] {
            let s: f64 = QuadratureScheme::uniform(n).unwrap().weights().iter().sum();
            assert!((s - 0.5).abs() <= 1e-15, "N={n}: {s}");
        }
        let q = QuadratureScheme::from_angles(vec![0.0, 0.1, 1.0, FRAC_PI_2]).unwrap();
        assert!((q.weights().iter().sum::<f64>() - 0.5).abs() <= 1e-15);
    }

    #[test]
    fn rejects_bad_partitions() {
        assert!(QuadratureScheme::uniform(0).is_err());
        assert!(QuadratureScheme::from_angles(vec![0.0, 1.0]).is_err());
        assert!(QuadratureScheme::from_angles(vec![0.0, 1.0, 0.5, FRAC_PI_2]).is_err());
    }
}
