use num_complex::Complex64;

use crate::error::{Result, SpinalError};

/// Dense matrix indexed `[segment][pass]`, both zero-based.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Grid<T> {
    pub(crate) fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Grid { rows, cols, data }
    }

    /// Builds a grid from nested rows; every row must have the same length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != n_cols) {
            return Err(SpinalError::Shape {
                expected_rows: n_rows,
                expected_cols: n_cols,
                rows: n_rows,
                cols: bad.len(),
            });
        }
        Ok(Grid {
            rows: n_rows,
            cols: n_cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Number of segments `n/k`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of passes `L`.
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, segment: usize, pass: usize) -> &T {
        &self.data[segment * self.cols + pass]
    }

    pub fn row(&self, segment: usize) -> &[T] {
        &self.data[segment * self.cols..(segment + 1) * self.cols]
    }

    /// All symbols of one pass, in segment order.
    pub fn pass(&self, pass: usize) -> impl Iterator<Item = &T> + '_ {
        (0..self.rows).map(move |i| self.get(i, pass))
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> + '_ {
        self.data.iter()
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Grid<U> {
        Grid {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

/// Encoder output `x_{i,j}`.
pub type CodedSymbolGrid = Grid<Complex64>;

/// One received sample `y = h x + n` together with its known fading
/// coefficient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Observation {
    pub y: Complex64,
    pub h: Complex64,
}

impl Observation {
    pub fn is_finite(&self) -> bool {
        self.y.is_finite() && self.h.is_finite()
    }
}

pub type ObservationGrid = Grid<Observation>;
