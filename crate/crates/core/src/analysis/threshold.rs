//! SNR at which the BLER curve settles onto its floor.
//!
//! The threshold solves `4 E_H[exp(-3 |H|^2 gamma / (2 (2^c - 1)))] = x`,
//! i.e. the nearest-neighbour contribution to `G` (about `4 * 2^c` pairs at
//! distance `d_min`) shrinks to a fraction `x / 4` of the `2^c` zero-distance
//! pairs. It depends only on the channel, `c` and `x`.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use super::bound::pairwise_expectation;
use crate::channel::{linear_to_db, ChannelModel};
use crate::codec::check_modulation;
use crate::error::{Result, SpinalError};

pub const DEFAULT_PRECISION: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThresholdResult {
    pub gamma_th_linear: f64,
    pub gamma_th_db: f64,
    pub x: f64,
    pub c: u32,
    pub model: ChannelModel,
    /// `4 E_H[...]` re-evaluated at the threshold; equals `x`.
    pub check: f64,
}

/// Closed-form threshold for each channel.
pub fn snr_threshold(model: &ChannelModel, c: u32, x: f64) -> Result<ThresholdResult> {
    check_modulation(c)?;
    model.validate()?;
    if !(x > 0.0 && x < 4.0) {
        return Err(SpinalError::param("x", format!("must satisfy 0 < x < 4, got {x}")));
    }
    let scale = 2.0 * ((1u64 << c) - 1) as f64 / 3.0;
    let ratio = 4.0 / x;
    let gamma = match *model {
        ChannelModel::Awgn => scale * ratio.ln(),
        ChannelModel::Rayleigh => scale * (ratio - 1.0),
        ChannelModel::Nakagami { m } => scale * m * (ratio.powf(1.0 / m) - 1.0),
    };
    let check = threshold_condition(model, c, gamma);
    if ((check - x) / x).abs() > 1e-9 {
        return Err(SpinalError::param(
            "x",
            format!("threshold self-check failed: 4E[..] = {check} for x = {x}"),
        ));
    }
    Ok(ThresholdResult {
        gamma_th_linear: gamma,
        gamma_th_db: linear_to_db(gamma),
        x,
        c,
        model: *model,
        check,
    })
}

/// `4 E_H[exp(-3 |H|^2 gamma / (2 (2^c - 1)))]`, evaluated as four times
/// the nearest-neighbour pairwise expectation at `theta = pi/2` with the
/// noise variance that yields SNR `gamma` for unit `d_min`.
pub fn threshold_condition(model: &ChannelModel, c: u32, gamma_linear: f64) -> f64 {
    let sigma2 = ((1u64 << c) - 1) as f64 / (6.0 * gamma_linear);
    4.0 * pairwise_expectation(model, 1.0, sigma2, FRAC_PI_2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn awgn_and_rayleigh_examples() {
        let a = snr_threshold(&ChannelModel::Awgn, 6, 0.01).unwrap();
        assert!((a.gamma_th_linear - 42.0 * 400f64.ln()).abs() < 1e-9);
        assert!((a.gamma_th_db - 24.0).abs() < 0.05, "{}", a.gamma_th_db);
        let r = snr_threshold(&ChannelModel::Rayleigh, 6, 0.01).unwrap();
        assert!((r.gamma_th_linear - 16758.0).abs() < 1e-8);
        assert!((r.gamma_th_db - 42.2).abs() < 0.05, "{}", r.gamma_th_db);
    }

    #[test]
    fn nakagami_one_is_rayleigh() {
        for c in [2, 4, 6, 8] {
            for x in [0.1, 0.01, 0.001] {
                let n = snr_threshold(&ChannelModel::Nakagami { m: 1.0 }, c, x).unwrap();
                let r = snr_threshold(&ChannelModel::Rayleigh, c, x).unwrap();
                assert_eq!(n.gamma_th_linear, r.gamma_th_linear);
            }
        }
    }

    #[test]
    fn precision_domain() {
        for x in [0.0, -1.0, 4.0, 5.0, f64::NAN] {
            assert!(snr_threshold(&ChannelModel::Awgn, 4, x).is_err(), "{x}");
        }
        assert!(snr_threshold(&ChannelModel::Awgn, 3, 0.01).is_err());
    }

    #[test]
    fn fading_needs_more_snr() {
        let a = snr_threshold(&ChannelModel::Awgn, 4, 0.01).unwrap().gamma_th_db;
        let n = snr_threshold(&ChannelModel::Nakagami { m: 1.5 }, 4, 0.01)
            .unwrap()
            .gamma_th_db;
        let r = snr_threshold(&ChannelModel::Rayleigh, 4, 0.01).unwrap().gamma_th_db;
        assert!(a < n && n < r);
    }
}
