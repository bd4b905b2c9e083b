//! Spinal codes under exhaustive ML decoding: encoder, fading channels,
//! the finite-blocklength BLER bound, its error floor, the SNR threshold
//! where the floor sets in, and a reproducible Monte Carlo harness to check
//! the analysis against simulation.
//!
//! ```
//! use spinal_core::analysis::error_floor;
//! use spinal_core::codec::CodeParams;
//!
//! let params = CodeParams::new(8, 4, 8, 1)?;
//! let floor = error_floor(&params);
//! assert!((floor.p_ef - 0.031074).abs() < 1e-6);
//! # Ok::<(), spinal_core::SpinalError>(())
//! ```

pub mod analysis;
pub mod channel;
pub mod codec;
pub mod config;
mod error;
pub mod montecarlo;
pub mod report;

pub use error::{Result, SpinalError};
