//! Spinal encoder and exhaustive ML decoder.

mod constellation;
mod decoder;
mod encoder;
mod grid;
mod hash;
mod message;
mod params;

pub use constellation::Constellation;
pub use decoder::{ml_decode, Decoded, MlDecoder, DEFAULT_BIT_CAP};
pub use encoder::{encode, hash_step, rng_symbol, spine_chain, SpinalCode, SpineValue};
pub use grid::{CodedSymbolGrid, Grid, Observation, ObservationGrid};
pub use hash::HashId;
pub use message::Message;
pub use params::{check_modulation, CodeParams, DEFAULT_D_MIN, DEFAULT_SPINE_WIDTH};

pub(crate) use hash::fmix64;
