//! Closed-form analysis: quadrature BLER bound, error floor, SNR thresholds
//! and the QAM distance spectrum they are built on.

mod bound;
mod quadrature;
mod spectrum;
mod threshold;

pub use bound::{
    bler_upper_bound, error_floor, error_floor_for, f_term, f_term_log2, fading_laplace, g_from_spectrum, g_value,
    pairwise_expectation, remaining_passes, BoundResult, FloorResult,
};
pub use quadrature::{QuadratureScheme, DEFAULT_QUADRATURE_POINTS};
pub use spectrum::{DistanceSpectrum, SpectrumEntry};
pub use threshold::{snr_threshold, threshold_condition, ThresholdResult, DEFAULT_PRECISION};
