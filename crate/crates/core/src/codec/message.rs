use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Result, SpinalError};

/// An `n`-bit message. Ordering is lexicographic over the bit sequence,
/// which is also the order the decoder uses to break exact ties.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Message {
    bits: Vec<bool>,
}

impl Message {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        Message { bits }
    }

    /// Reassemble a message from `k`-bit segment words. Bit `(i-1)k` is the
    /// most significant bit of segment `i`.
    pub fn from_segments(words: &[u64], k: u32) -> Result<Self> {
        let mut bits = Vec::with_capacity(words.len() * k as usize);
        for &w in words {
            if k < 64 && w >> k != 0 {
                return Err(SpinalError::InvalidMessage(format!(
                    "segment word {w:#x} does not fit in {k} bits"
                )));
            }
            bits.extend((0..k).rev().map(|b| (w >> b) & 1 == 1));
        }
        Ok(Message { bits })
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Message {
            bits: (0..n).map(|_| rng.random::<bool>()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// The `n/k` consecutive `k`-bit words `m_1 .. m_{n/k}`.
    pub fn segments(&self, k: u32) -> Result<Vec<u64>> {
        let k = k as usize;
        if k == 0 || k > 64 || self.bits.len() % k != 0 {
            return Err(SpinalError::InvalidMessage(format!(
                "length {} is not a multiple of segment length {k}",
                self.bits.len()
            )));
        }
        Ok(self
            .bits
            .chunks(k)
            .map(|chunk| chunk.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64))
            .collect())
    }
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Message {
    type Err = SpinalError;

    /// Parses a string of `0`/`1` characters. `_` separators are ignored.
    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for (pos, ch) in s.trim().char_indices() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                '_' => {}
                other => {
                    return Err(SpinalError::InvalidMessage(format!(
                        "unexpected character {other:?} at offset {pos}"
                    )))
                }
            }
        }
        if bits.is_empty() {
            return Err(SpinalError::InvalidMessage("empty bit string".into()));
        }
        Ok(Message { bits })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segments_are_msb_first() {
        let m: Message = "1010_0011".parse().unwrap();
        assert_eq!(m.segments(4).unwrap(), vec![0b1010, 0b0011]);
        assert_eq!(m.segments(2).unwrap(), vec![2, 2, 0, 3]);
        assert!(m.segments(3).is_err());
    }

    #[test]
    fn from_segments_inverts_segments() {
        let m = Message::from_segments(&[0xa, 0x3], 4).unwrap();
        assert_eq!(m.to_string(), "10100011");
        assert!(Message::from_segments(&[16], 4).is_err());
    }

    #[test]
    fn rejects_garbage() {
        assert!("10x1".parse::<Message>().is_err());
        assert!("".parse::<Message>().is_err());
    }

    #[test]
    fn order_is_lexicographic_in_bits() {
        let a: Message = "0111".parse().unwrap();
        let b: Message = "1000".parse().unwrap();
        assert!(a < b);
    }
}
