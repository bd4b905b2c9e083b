use std::collections::BTreeMap;

use serde::Serialize;

use crate::codec::Constellation;

/// Ordered-pair distance multiplicities `A_d` of a square QAM grid.
///
/// Grid differences are integer offsets `(dx, dy)` in units of `d_min`, so
/// distances are keyed exactly by `dx^2 + dy^2`. The offset `(dx, dy)`
/// occurs in `(side - |dx|)(side - |dy|)` ordered pairs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceSpectrum {
    d_min: f64,
    counts: BTreeMap<u64, u64>,
}

/// One distance class of the spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectrumEntry {
    /// `d^2 / d_min^2`.
    pub squared_units: u64,
    /// `d` in absolute units.
    pub distance: f64,
    pub multiplicity: u64,
}

impl DistanceSpectrum {
    pub fn of(psi: &Constellation) -> Self {
        let side = psi.side() as i64;
        let mut counts = BTreeMap::new();
        for dx in -(side - 1)..side {
            for dy in -(side - 1)..side {
                let pairs = ((side - dx.abs()) * (side - dy.abs())) as u64;
                *counts.entry((dx * dx + dy * dy) as u64).or_insert(0) += pairs;
            }
        }
        DistanceSpectrum {
            d_min: psi.d_min(),
            counts,
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = SpectrumEntry> + '_ {
        self.counts.iter().map(|(&sq, &mult)| SpectrumEntry {
            squared_units: sq,
            distance: (sq as f64).sqrt() * self.d_min,
            multiplicity: mult,
        })
    }

    /// Multiplicity of distance `d`, matched to a grid distance with a
    /// relative tolerance of `1e-9`. Zero if `d` is not a grid distance.
    pub fn multiplicity(&self, d: f64) -> u64 {
        let units = (d / self.d_min).powi(2);
        let key = units.round();
        if key < 0.0 || (units - key).abs() > 1e-9 * key.max(1.0) {
            return 0;
        }
        self.counts.get(&(key as u64)).copied().unwrap_or(0)
    }

    pub fn total_pairs(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn d_min(&self) -> f64 {
        self.d_min
    }

    /// Number of distinct distances `|S|`.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}
