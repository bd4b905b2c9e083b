//! Pluggable mixing hashes behind the spine chain and the symbol generator.
//!
//! Every hash exposes the same keyed three-word interface: `mix(tag, a, b)`.
//! The tag separates the spine chain from symbol generation so the two never
//! share outputs even when fed identical words.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::SpinalError;

/// Domain tag for `s_i = h(s_{i-1}, m_i)`.
pub(crate) const SPINE_TAG: u64 = 0x5350_494e_455f_4348; // "SPINE_CH"
/// Domain tag for counter-mode symbol generation `hash(s || j)`.
pub(crate) const SYMBOL_TAG: u64 = 0x5359_4d42_4f4c_5f52; // "SYMBOL_R"

/// Registered hash functions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum HashId {
    /// Two rounds of the SplitMix64 finalizer (Steele, Lea & Flood).
    #[default]
    SplitMix64,
    /// Bob Jenkins' one-at-a-time hash over the little-endian bytes of
    /// `(tag, a, b)`. 32-bit output, so it only supports `v <= 32`.
    OneAtATime,
}

impl HashId {
    pub const ALL: [HashId; 2] = [HashId::SplitMix64, HashId::OneAtATime];

    pub fn name(self) -> &'static str {
        match self {
            HashId::SplitMix64 => "splitmix64",
            HashId::OneAtATime => "oaat32",
        }
    }

    /// Number of meaningful output bits.
    pub fn output_bits(self) -> u32 {
        match self {
            HashId::SplitMix64 => 64,
            HashId::OneAtATime => 32,
        }
    }

    pub fn registered() -> String {
        HashId::ALL.iter().map(|h| h.name()).collect::<Vec<_>>().join(", ")
    }

    #[inline]
    pub fn mix(self, tag: u64, a: u64, b: u64) -> u64 {
        match self {
            HashId::SplitMix64 => fmix64(fmix64(a ^ tag) ^ b),
            HashId::OneAtATime => one_at_a_time(tag, a, b) as u64,
        }
    }
}

impl fmt::Display for HashId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HashId {
    type Err = SpinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        HashId::ALL
            .into_iter()
            .find(|h| h.name() == s)
            .ok_or_else(|| SpinalError::UnknownHash {
                name: s.to_string(),
                registered: HashId::registered(),
            })
    }
}

impl TryFrom<String> for HashId {
    type Error = SpinalError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<HashId> for String {
    fn from(h: HashId) -> String {
        h.name().to_string()
    }
}

/// SplitMix64 output function. A bijection on `u64` with full avalanche.
#[inline]
pub(crate) fn fmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn one_at_a_time(tag: u64, a: u64, b: u64) -> u32 {
    let mut h: u32 = 0;
    for word in [tag, a, b] {
        for byte in word.to_le_bytes() {
            h = h.wrapping_add(byte as u32);
            h = h.wrapping_add(h << 10);
            h ^= h >> 6;
        }
    }
    h = h.wrapping_add(h << 3);
    h ^= h >> 11;
    h.wrapping_add(h << 15)
}

/// Reduce a hash output to `bits` bits. Widths up to 32 xor-fold the upper
/// half in first; wider outputs are truncated.
#[inline]
pub(crate) fn fold_to(x: u64, bits: u32) -> u64 {
    if bits >= 64 {
        x
    } else if bits <= 32 {
        (x ^ (x >> 32)) & ((1u64 << bits) - 1)
    } else {
        x & ((1u64 << bits) - 1)
    }
}
