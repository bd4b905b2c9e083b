//! Finite-blocklength BLER upper bound and the error floor it tends to.
//!
//! All segment terms are evaluated in the log2 domain: `2^{n - ak}` and
//! `F(L_a, sigma)^{...}` leave double range long before the final
//! probabilities do.

use serde::Serialize;

use super::quadrature::QuadratureScheme;
use super::spectrum::DistanceSpectrum;
use crate::channel::ChannelModel;
use crate::codec::{CodeParams, Constellation};
use crate::error::{Result, SpinalError};

/// Closed form of `E_H[exp(-|H|^2 a)]` for `a >= 0`.
#[inline]
pub fn fading_laplace(model: &ChannelModel, a: f64) -> f64 {
    match *model {
        ChannelModel::Awgn => (-a).exp(),
        ChannelModel::Rayleigh => 1.0 / (1.0 + a),
        ChannelModel::Nakagami { m } => (-m * (a / m).ln_1p()).exp(),
    }
}

/// `E_H[exp(-|H|^2 delta2 / (4 sigma2 sin^2 theta))]`.
///
/// Zero distance gives exactly 1; zero noise with a nonzero distance gives
/// the limit 0.
#[inline]
pub fn pairwise_expectation(model: &ChannelModel, delta2: f64, sigma2: f64, theta: f64) -> f64 {
    if delta2 == 0.0 {
        return 1.0;
    }
    if sigma2 == 0.0 {
        return 0.0;
    }
    let s = theta.sin();
    fading_laplace(model, delta2 / (4.0 * sigma2 * s * s))
}

/// `G(Psi, sigma2, theta)` over a precomputed spectrum:
/// `sum_d A_d * pairwise_expectation(d^2)`.
pub fn g_from_spectrum(spectrum: &DistanceSpectrum, sigma2: f64, theta: f64, model: &ChannelModel) -> f64 {
    spectrum
        .entries()
        .map(|e| e.multiplicity as f64 * pairwise_expectation(model, e.distance * e.distance, sigma2, theta))
        .sum()
}

/// `G(Psi, sigma2, theta)`: the pairwise expectation summed over all
/// ordered pairs of constellation points.
pub fn g_value(psi: &Constellation, sigma2: f64, theta: f64, model: &ChannelModel) -> f64 {
    g_from_spectrum(&DistanceSpectrum::of(psi), sigma2, theta, model)
}

/// `log2 F(L_a)` from the per-angle ratios `log2(G_t / 2^{2c})`.
fn log2_f_from_ratios(log2_ratios: &[f64], weights: &[f64], la: usize) -> f64 {
    let la = la as f64;
    let top = log2_ratios.iter().map(|&r| la * r).fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = log2_ratios
        .iter()
        .zip(weights)
        .map(|(&r, &b)| b * (la * r - top).exp2())
        .sum();
    top + sum.log2()
}

/// Per-angle `log2(G(theta_t) / 2^{2c})` for `t = 1..=N`.
fn log2_ratios(
    spectrum: &DistanceSpectrum,
    c: u32,
    sigma2: f64,
    scheme: &QuadratureScheme,
    model: &ChannelModel,
) -> Vec<f64> {
    scheme
        .nodes()
        .map(|(theta, _)| g_from_spectrum(spectrum, sigma2, theta, model).log2() - 2.0 * c as f64)
        .collect()
}

/// `log2 F(L_a, sigma)`.
pub fn f_term_log2(
    la: usize,
    sigma2: f64,
    psi: &Constellation,
    scheme: &QuadratureScheme,
    model: &ChannelModel,
) -> f64 {
    let ratios = log2_ratios(&DistanceSpectrum::of(psi), psi.c(), sigma2, scheme, model);
    log2_f_from_ratios(&ratios, scheme.weights(), la)
}

/// `F(L_a, sigma) = sum_t b_t (2^{-2c} G(theta_t))^{L_a}`.
pub fn f_term(la: usize, sigma2: f64, psi: &Constellation, scheme: &QuadratureScheme, model: &ChannelModel) -> f64 {
    f_term_log2(la, sigma2, psi, scheme, model).exp2()
}

/// `L_a = L (n/k - a + 1)` for `a = 1..=n/k`.
pub fn remaining_passes(params: &CodeParams) -> Vec<usize> {
    let segs = params.segments();
    (1..=segs).map(|a| params.passes() * (segs - a + 1)).collect()
}

/// `min(1, (2^k - 1) 2^{n - ak + log2 F})`, shared by the bound and the floor
/// so the two agree bit for bit at `sigma = 0`.
fn segment_term(n: usize, k: u32, a: usize, log2_f: f64) -> f64 {
    let branches = ((1u64 << k) - 1) as f64;
    let exponent = (n as f64 - (a * k as usize) as f64) + log2_f;
    let t = branches * exponent.exp2();
    if t >= 1.0 {
        1.0
    } else {
        t
    }
}

/// `1 - prod_a (1 - term_a)`.
fn combine(terms: &[f64]) -> f64 {
    if terms.iter().any(|&t| t >= 1.0) {
        return 1.0;
    }
    let log_survival: f64 = terms.iter().map(|&t| (-t).ln_1p()).sum();
    -log_survival.exp_m1()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundResult {
    pub p_e_upper: f64,
    /// `min(1, (2^k - 1) 2^{n-ak} F(L_a, sigma))` for `a = 1..=n/k`.
    pub per_segment_terms: Vec<f64>,
    pub remaining_passes: Vec<usize>,
    /// `log2 F(L_a, sigma)` per segment.
    pub log2_f: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FloorResult {
    pub p_ef: f64,
    pub per_segment_terms: Vec<f64>,
    pub remaining_passes: Vec<usize>,
}

/// Evaluates the union-style BLER upper bound at noise variance `sigma2`.
pub fn bler_upper_bound(
    params: &CodeParams,
    sigma2: f64,
    model: &ChannelModel,
    scheme: &QuadratureScheme,
) -> Result<BoundResult> {
    model.validate()?;
    let psi = Constellation::new(params.c(), params.d_min())?;
    let spectrum = DistanceSpectrum::of(&psi);
    let ratios = log2_ratios(&spectrum, params.c(), sigma2, scheme, model);
    let las = remaining_passes(params);
    let log2_f: Vec<f64> = las
        .iter()
        .map(|&la| log2_f_from_ratios(&ratios, scheme.weights(), la))
        .collect();
    let terms: Vec<f64> = log2_f
        .iter()
        .enumerate()
        .map(|(i, &lf)| segment_term(params.n(), params.k(), i + 1, lf))
        .collect();
    let p = combine(&terms);
    Ok(BoundResult {
        p_e_upper: p,
        per_segment_terms: terms,
        remaining_passes: las,
        log2_f,
    })
}

/// High-SNR limit of the bound: `F(L_a, 0) = 2^{-L_a c - 1}`.
pub fn error_floor(params: &CodeParams) -> FloorResult {
    floor_closed_form(params.n(), params.k(), params.c(), params.passes())
}

/// The floor as a function of `(n, k, c, L)` alone. Unlike [`CodeParams`]
/// this accepts any `c >= 1`: the floor does not depend on the grid shape.
pub fn error_floor_for(n: usize, k: u32, c: u32, passes: usize) -> Result<FloorResult> {
    if k == 0 || k > 32 {
        return Err(SpinalError::param("k", format!("must be in 1..=32, got {k}")));
    }
    if n == 0 || n % k as usize != 0 {
        return Err(SpinalError::param(
            "n",
            format!("must be a positive multiple of k = {k}, got {n}"),
        ));
    }
    if c == 0 {
        return Err(SpinalError::param("c", "must be at least 1"));
    }
    if passes == 0 {
        return Err(SpinalError::param("L", "at least one pass is required"));
    }
    Ok(floor_closed_form(n, k, c, passes))
}

fn floor_closed_form(n: usize, k: u32, c: u32, passes: usize) -> FloorResult {
    let segs = n / k as usize;
    let las: Vec<usize> = (1..=segs).map(|a| passes * (segs - a + 1)).collect();
    let terms: Vec<f64> = las
        .iter()
        .enumerate()
        .map(|(i, &la)| segment_term(n, k, i + 1, -((la * c as usize) as f64) - 1.0))
        .collect();
    let p = combine(&terms);
    FloorResult {
        p_ef: p,
        per_segment_terms: terms,
        remaining_passes: las,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn models() -> [ChannelModel; 4] {
        [
            ChannelModel::Awgn,
            ChannelModel::Rayleigh,
            ChannelModel::Nakagami { m: 0.5 },
            ChannelModel::Nakagami { m: 2.5 },
        ]
    }

    #[test]
    fn zero_distance_and_rayleigh_instance() {
        for m in models() {
            assert_eq!(pairwise_expectation(&m, 0.0, 0.3, 1.0), 1.0);
            assert_eq!(pairwise_expectation(&m, 0.0, 0.0, 1.0), 1.0);
            assert_eq!(pairwise_expectation(&m, 2.0, 0.0, 1.0), 0.0);
        }
        // delta2 / (4 sigma2) = 1 at theta = pi/2.
        let r = pairwise_expectation(&ChannelModel::Rayleigh, 4.0, 1.0, std::f64::consts::FRAC_PI_2);
        assert!((r - 0.5).abs() < 1e-15);
    }

    #[test]
    fn g_limits() {
        let psi = Constellation::new(4, 2.0).unwrap();
        for m in models() {
            assert_eq!(g_value(&psi, 0.0, 1.0, &m), 16.0);
            let big = g_value(&psi, 1e14, 1.0, &m);
            assert!((big - 256.0).abs() < 1e-6, "{m}: {big}");
        }
    }

    #[test]
    fn spectrum_g_matches_pair_loop() {
        for c in [2, 4, 6] {
            let psi = Constellation::new(c, 1.7).unwrap();
            for m in models() {
                for sigma2 in [0.05, 1.0, 30.0] {
                    let theta = 0.8;
                    let direct: f64 = psi
                        .points()
                        .iter()
                        .flat_map(|a| psi.points().iter().map(move |b| (a - b).norm_sqr()))
                        .map(|d2| pairwise_expectation(&m, d2, sigma2, theta))
                        .sum();
                    let fast = g_value(&psi, sigma2, theta, &m);
                    assert!(
                        (fast - direct).abs() <= 1e-12 * direct,
                        "c={c} {m} {sigma2}: {fast} vs {direct}"
                    );
                }
            }
        }
    }

    #[test]
    fn f_term_at_zero_noise() {
        let psi = Constellation::new(2, 2.0).unwrap();
        let q = QuadratureScheme::default();
        assert_eq!(f_term(1, 0.0, &psi, &q, &ChannelModel::Awgn), 0.125);
        assert_eq!(f_term_log2(3, 0.0, &psi, &q, &ChannelModel::Rayleigh), -7.0);
    }

    #[test]
    fn f_term_grows_with_noise() {
        let q = QuadratureScheme::uniform(16).unwrap();
        for c in [2, 4, 6, 8] {
            let psi = Constellation::new(c, 2.0).unwrap();
            for la in [1, 3, 8] {
                for m in models() {
                    let f0 = f_term(la, 0.0, &psi, &q, &m);
                    let f1 = f_term(la, 0.01, &psi, &q, &m);
                    assert!(f1 >= f0, "c={c} la={la} {m}");
                }
            }
        }
    }

    #[test]
    fn floor_examples() {
        // a = 1: 15 * 2^{8-4-2-1} = 30, clamps to 1.
        let f = error_floor_for(8, 4, 1, 1).unwrap();
        assert_eq!(f.per_segment_terms[0], 1.0);
        assert_eq!(f.p_ef, 1.0);
        assert!(error_floor_for(8, 3, 2, 1).is_err());

        let p = CodeParams::new(8, 4, 8, 1).unwrap();
        let f = error_floor(&p);
        assert_eq!(f.remaining_passes, vec![2, 1]);
        assert_eq!(f.per_segment_terms, vec![15.0 / 8192.0, 15.0 / 512.0]);
        assert!((f.p_ef - 0.031_074_285_507_202_15).abs() < 1e-15, "{}", f.p_ef);
    }

    #[test]
    fn floor_handles_tiny_terms() {
        let p = CodeParams::with_all(256, 32, 64, 6, 40, 2.0, Default::default()).unwrap();
        let f = error_floor(&p);
        // Only the last segment matters: (2^32 - 1) 2^{-40*6-1}.
        let expected = ((1u64 << 32) - 1) as f64 * (-241f64).exp2();
        assert!((f.p_ef - expected).abs() <= 1e-12 * expected, "{}", f.p_ef);
        assert!(f.per_segment_terms[0] < 1e-300);
    }

    #[test]
    fn bound_at_zero_noise_is_the_floor() {
        for (n, k, c, l) in [(8, 4, 8, 1), (12, 4, 4, 2), (32, 4, 6, 3), (256, 32, 6, 2)] {
            let p = CodeParams::new(n, k, c, l).unwrap();
            for m in models() {
                let b = bler_upper_bound(&p, 0.0, &m, &QuadratureScheme::default()).unwrap();
                assert_eq!(b.p_e_upper, error_floor(&p).p_ef);
                assert_eq!(b.per_segment_terms, error_floor(&p).per_segment_terms);
            }
        }
    }

    #[test]
    fn bound_saturates_at_zero_snr() {
        let p = CodeParams::new(12, 4, 4, 2).unwrap();
        let b = bler_upper_bound(&p, 1e30, &ChannelModel::Rayleigh, &QuadratureScheme::default()).unwrap();
        assert_eq!(b.p_e_upper, 1.0);
    }
}
