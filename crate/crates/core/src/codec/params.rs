use serde::{Deserialize, Serialize};

use super::hash::HashId;
use crate::error::{Result, SpinalError};

pub const DEFAULT_SPINE_WIDTH: u32 = 32;
pub const DEFAULT_D_MIN: f64 = 2.0;

/// One Spinal code instance: message length `n`, segment length `k`, spine
/// width `v`, bits per symbol `c`, transmitted passes `L`, the minimum
/// distance of the square QAM input set and the hash behind the spine.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct CodeParams {
    n: usize,
    k: u32,
    v: u32,
    c: u32,
    passes: usize,
    d_min: f64,
    hash: HashId,
}

impl CodeParams {
    /// Builds a code with the default spine width, `d_min = 2` and the
    /// default hash.
    pub fn new(n: usize, k: u32, c: u32, passes: usize) -> Result<Self> {
        Self::with_all(
            n,
            k,
            DEFAULT_SPINE_WIDTH.max(k),
            c,
            passes,
            DEFAULT_D_MIN,
            HashId::default(),
        )
    }

    pub fn with_all(n: usize, k: u32, v: u32, c: u32, passes: usize, d_min: f64, hash: HashId) -> Result<Self> {
        let p = CodeParams {
            n,
            k,
            v,
            c,
            passes,
            d_min,
            hash,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k > 32 {
            return Err(SpinalError::param("k", format!("must be in 1..=32, got {}", self.k)));
        }
        if self.n == 0 || self.n % self.k as usize != 0 {
            return Err(SpinalError::param(
                "n",
                format!("must be a positive multiple of k = {}, got {}", self.k, self.n),
            ));
        }
        check_modulation(self.c)?;
        if self.v < self.k || self.v > 64 {
            return Err(SpinalError::param(
                "v",
                format!("spine width must be in k..=64 (k = {}), got {}", self.k, self.v),
            ));
        }
        if self.v > self.hash.output_bits() {
            return Err(SpinalError::param(
                "v",
                format!(
                    "hash {} produces only {} bits, v = {} requested",
                    self.hash,
                    self.hash.output_bits(),
                    self.v
                ),
            ));
        }
        if self.passes == 0 {
            return Err(SpinalError::param("L", "at least one pass is required"));
        }
        if !(self.d_min.is_finite() && self.d_min > 0.0) {
            return Err(SpinalError::param(
                "d_min",
                format!("must be finite and positive, got {}", self.d_min),
            ));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn v(&self) -> u32 {
        self.v
    }
    pub fn c(&self) -> u32 {
        self.c
    }
    /// Number of transmitted passes `L`.
    pub fn passes(&self) -> usize {
        self.passes
    }
    pub fn d_min(&self) -> f64 {
        self.d_min
    }
    pub fn hash(&self) -> HashId {
        self.hash
    }

    /// Number of segments `n / k`.
    pub fn segments(&self) -> usize {
        self.n / self.k as usize
    }

    pub fn with_passes(self, passes: usize) -> Result<Self> {
        Self::with_all(self.n, self.k, self.v, self.c, passes, self.d_min, self.hash)
    }
}

/// Square QAM requires even `c`; the grid is `2^{c/2}` points per axis.
pub fn check_modulation(c: u32) -> Result<()> {
    if c % 2 != 0 || !(2..=16).contains(&c) {
        return Err(SpinalError::UnsupportedModulation(c));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    n: usize,
    k: u32,
    v: u32,
    c: u32,
    #[serde(rename = "L")]
    passes: usize,
    d_min: f64,
    hash_id: HashId,
}

impl TryFrom<RawParams> for CodeParams {
    type Error = SpinalError;

    fn try_from(r: RawParams) -> Result<Self> {
        CodeParams::with_all(r.n, r.k, r.v, r.c, r.passes, r.d_min, r.hash_id)
    }
}

impl From<CodeParams> for RawParams {
    fn from(p: CodeParams) -> Self {
        RawParams {
            n: p.n,
            k: p.k,
            v: p.v,
            c: p.c,
            passes: p.passes,
            d_min: p.d_min,
            hash_id: p.hash,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_c() {
        assert!(matches!(
            CodeParams::new(8, 4, 3, 1),
            Err(SpinalError::UnsupportedModulation(3))
        ));
        assert!(CodeParams::new(8, 4, 1, 1).is_err());
        assert!(CodeParams::new(8, 4, 18, 1).is_err());
    }

    #[test]
    fn rejects_k_not_dividing_n() {
        let err = CodeParams::new(10, 4, 2, 1).unwrap_err();
        assert!(err.to_string().contains("n"));
    }

    #[test]
    fn rejects_narrow_spine_and_bad_dmin() {
        assert!(CodeParams::with_all(8, 4, 3, 2, 1, 2.0, HashId::SplitMix64).is_err());
        assert!(CodeParams::with_all(8, 4, 40, 2, 1, 2.0, HashId::OneAtATime).is_err());
        assert!(CodeParams::with_all(8, 4, 32, 2, 1, 0.0, HashId::SplitMix64).is_err());
        assert!(CodeParams::with_all(8, 4, 32, 2, 0, 1.0, HashId::SplitMix64).is_err());
    }

    #[test]
    fn defaults() {
        let p = CodeParams::new(8, 4, 2, 1).unwrap();
        assert_eq!(p.v(), 32);
        assert_eq!(p.segments(), 2);
        assert_eq!(p.hash(), HashId::SplitMix64);
    }

    #[test]
    fn json_validates_on_load() {
        let p = CodeParams::new(12, 4, 4, 2).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"hash_id\":\"splitmix64\""), "{s}");
        assert_eq!(serde_json::from_str::<CodeParams>(&s).unwrap(), p);
        let bad = s.replace("\"c\":4", "\"c\":5");
        assert!(serde_json::from_str::<CodeParams>(&bad).is_err());
    }
}
