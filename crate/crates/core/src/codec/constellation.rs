use num_complex::Complex64;

use super::params::check_modulation;
use crate::error::{Result, SpinalError};

/// Square `2^c`-QAM grid centred on the origin with adjacent spacing `d_min`.
///
/// Index `idx` maps row-major onto the grid: column `idx % side` sets the
/// real part and row `idx / side` the imaginary part, both increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct Constellation {
    points: Vec<Complex64>,
    c: u32,
    d_min: f64,
}

impl Constellation {
    pub fn new(c: u32, d_min: f64) -> Result<Self> {
        check_modulation(c)?;
        if !(d_min.is_finite() && d_min > 0.0) {
            return Err(SpinalError::param(
                "d_min",
                format!("must be finite and positive, got {d_min}"),
            ));
        }
        let side = 1usize << (c / 2);
        let offset = (side - 1) as f64;
        let half = d_min / 2.0;
        let coord = |i: usize| (2.0 * i as f64 - offset) * half;
        let points = (0..side * side)
            .map(|idx| Complex64::new(coord(idx % side), coord(idx / side)))
            .collect();
        Ok(Constellation { points, c, d_min })
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    #[inline]
    pub fn point(&self, index: usize) -> Complex64 {
        self.points[index]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn d_min(&self) -> f64 {
        self.d_min
    }

    /// Points per axis, `2^{c/2}`.
    pub fn side(&self) -> usize {
        1 << (self.c / 2)
    }

    pub fn contains(&self, x: Complex64) -> bool {
        self.points.contains(&x)
    }

    /// Mean energy `E|x|^2 = (2^c - 1) d_min^2 / 6` of the uniform grid.
    pub fn average_energy(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / self.points.len() as f64
    }
}
