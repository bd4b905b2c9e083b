//! Fading and AWGN channel with perfect CSI at the receiver.
//!
//! Noise convention: `sigma2` is the total variance of the circular complex
//! Gaussian noise, split evenly as `sigma2 / 2` per real dimension. With that
//! convention the average SNR of square `2^c`-QAM with spacing `d_min` is
//! `gamma = (2^c - 1) d_min^2 / (6 sigma2)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma, Normal};
use serde::{Deserialize, Serialize};

use crate::codec::{check_modulation, CodedSymbolGrid, Observation, ObservationGrid};
use crate::error::{Result, SpinalError};

/// Fading law of `H`, always normalised to `E|H|^2 = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChannelModel {
    /// `H = 1` always.
    Awgn,
    /// `H ~ CN(0, 1)`.
    Rayleigh,
    /// `|H|^2 ~ Gamma(m, 1/m)` with uniform phase.
    Nakagami { m: f64 },
}

impl ChannelModel {
    pub fn nakagami(m: f64) -> Result<Self> {
        if !(m.is_finite() && m >= 0.5) {
            return Err(SpinalError::param(
                "m",
                format!("Nakagami shape must be finite and >= 0.5, got {m}"),
            ));
        }
        Ok(ChannelModel::Nakagami { m })
    }

    /// Resolves a channel name, using `m` for Nakagami.
    pub fn from_name(name: &str, m: f64) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "awgn" => Ok(ChannelModel::Awgn),
            "rayleigh" => Ok(ChannelModel::Rayleigh),
            "nakagami" => ChannelModel::nakagami(m),
            other => Err(SpinalError::param(
                "channel",
                format!("unknown channel {other:?}; expected awgn, rayleigh or nakagami"),
            )),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ChannelModel::Awgn => "awgn",
            ChannelModel::Rayleigh => "rayleigh",
            ChannelModel::Nakagami { .. } => "nakagami",
        }
    }

    /// Nakagami shape, if any.
    pub fn shape(&self) -> Option<f64> {
        match *self {
            ChannelModel::Nakagami { m } => Some(m),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let ChannelModel::Nakagami { m } = *self {
            ChannelModel::nakagami(m)?;
        }
        Ok(())
    }
}

impl fmt::Display for ChannelModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelModel::Nakagami { m } => write!(f, "nakagami-{m}"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for ChannelModel {
    type Err = SpinalError;

    /// Accepts `awgn`, `rayleigh`, and `nakagami-<m>` (the `Display` form).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.split_once('-') {
            Some((name, m)) if name.eq_ignore_ascii_case("nakagami") => {
                let m = m
                    .parse::<f64>()
                    .map_err(|e| SpinalError::param("m", format!("{m:?}: {e}")))?;
                ChannelModel::nakagami(m)
            }
            _ if s.eq_ignore_ascii_case("nakagami") => {
                Err(SpinalError::param("m", "nakagami needs a shape, e.g. nakagami-1.5"))
            }
            _ => ChannelModel::from_name(s, 1.0),
        }
    }
}

/// Noise variance and the SNR it came from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// Total complex noise variance.
    pub sigma2: f64,
    pub gamma_db: f64,
}

fn qam_energy_scale(c: u32, d_min: f64) -> Result<f64> {
    check_modulation(c)?;
    if !(d_min.is_finite() && d_min > 0.0) {
        return Err(SpinalError::param(
            "d_min",
            format!("must be finite and positive, got {d_min}"),
        ));
    }
    Ok(((1u64 << c) - 1) as f64 * d_min * d_min / 6.0)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// `sigma2 = (2^c - 1) d_min^2 / (6 gamma)`. An infinite SNR gives `sigma2 = 0`.
pub fn sigma_from_snr(gamma_db: f64, c: u32, d_min: f64) -> Result<NoiseSpec> {
    let scale = qam_energy_scale(c, d_min)?;
    if gamma_db.is_nan() || gamma_db == f64::NEG_INFINITY {
        return Err(SpinalError::param(
            "gamma_db",
            format!("must be a number above -inf, got {gamma_db}"),
        ));
    }
    Ok(NoiseSpec {
        sigma2: scale / db_to_linear(gamma_db),
        gamma_db,
    })
}

/// Linear SNR for a given total noise variance.
pub fn snr_from_sigma(sigma2: f64, c: u32, d_min: f64) -> Result<f64> {
    let scale = qam_energy_scale(c, d_min)?;
    Ok(scale / sigma2)
}

/// Draws one fading coefficient.
pub fn sample_fading<R: Rng + ?Sized>(model: &ChannelModel, rng: &mut R) -> Complex64 {
    match *model {
        ChannelModel::Awgn => Complex64::new(1.0, 0.0),
        ChannelModel::Rayleigh => {
            let n = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).unwrap();
            Complex64::new(n.sample(rng), n.sample(rng))
        }
        ChannelModel::Nakagami { m } => {
            let power = Gamma::new(m, 1.0 / m)
                .expect("Nakagami shape validated at construction")
                .sample(rng);
            let phase = rng.random::<f64>() * 2.0 * PI;
            Complex64::from_polar(power.sqrt(), phase)
        }
    }
}

/// `y_{i,j} = h_{i,j} x_{i,j} + n_{i,j}` with fresh i.i.d. fading and noise
/// per entry, drawn in row-major order (fading, then noise real, noise imag).
pub fn transmit<R: Rng + ?Sized>(
    grid: &CodedSymbolGrid,
    model: &ChannelModel,
    noise: &NoiseSpec,
    rng: &mut R,
) -> Result<ObservationGrid> {
    model.validate()?;
    if !(noise.sigma2 >= 0.0 && noise.sigma2.is_finite()) {
        return Err(SpinalError::param(
            "sigma2",
            format!("must be finite and >= 0, got {}", noise.sigma2),
        ));
    }
    let per_dim = Normal::new(0.0, (noise.sigma2 / 2.0).sqrt()).unwrap();
    Ok(grid.map(|&x| {
        let h = sample_fading(model, rng);
        let n = Complex64::new(per_dim.sample(rng), per_dim.sample(rng));
        Observation { y: h * x + n, h }
    }))
}
