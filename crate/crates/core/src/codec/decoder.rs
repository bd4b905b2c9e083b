//! Exhaustive maximum-likelihood decoding over the spine tree.
//!
//! The decoder walks the depth-`n/k` tree whose nodes are spine values and
//! whose branches are the `2^k` segment words. Each node evaluates its
//! segment metric `sum_j |y_{i,j} - h_{i,j} x_{i,j}|^2` once, so shared
//! prefixes are never recomputed. Children are visited in increasing
//! segment-word order, which makes the leaf order lexicographic in the
//! message bits.
//!
//! A subtree is skipped when its partial cost already reaches the best
//! complete cost. Segment metrics are non-negative and IEEE addition of a
//! non-negative term never decreases a sum, so every leaf below such a node
//! costs at least as much as the incumbent and, being lexicographically
//! later, could not win a tie either. The result is identical to a flat
//! argmin over all `2^n` messages.

use num_complex::Complex64;

use super::encoder::{hash_step, SpinalCode, SpineValue};
use super::grid::ObservationGrid;
use super::message::Message;
use super::params::CodeParams;
use crate::error::{Result, SpinalError};

pub const DEFAULT_BIT_CAP: usize = 24;

/// Decoder output with the cost trace of the winning path.
#[derive(Clone, Debug, PartialEq)]
pub struct Decoded {
    pub message: Message,
    /// Total metric of `message`.
    pub cost: f64,
    /// Segment metric at each depth along the winning path.
    pub segment_costs: Vec<f64>,
    /// Spine values along the winning path.
    pub spine: Vec<SpineValue>,
    /// Tree nodes whose segment metric was evaluated.
    pub nodes_visited: u64,
}

#[derive(Clone, Debug)]
pub struct MlDecoder {
    code: SpinalCode,
    bit_cap: usize,
}

struct Search<'a> {
    code: &'a SpinalCode,
    obs: &'a ObservationGrid,
    symbols: Vec<Complex64>,
    words: Vec<u64>,
    seg_costs: Vec<f64>,
    spines: Vec<SpineValue>,
    best: Option<Decoded>,
    best_words: Vec<u64>,
    nodes: u64,
}

impl MlDecoder {
    pub fn new(params: CodeParams) -> Result<Self> {
        Ok(MlDecoder {
            code: SpinalCode::new(params)?,
            bit_cap: DEFAULT_BIT_CAP,
        })
    }

    /// Changes the largest `n` the decoder will enumerate.
    pub fn with_bit_cap(mut self, cap: usize) -> Self {
        self.bit_cap = cap;
        self
    }

    pub fn code(&self) -> &SpinalCode {
        &self.code
    }

    pub fn decode(&self, obs: &ObservationGrid) -> Result<Decoded> {
        let params = self.code.params();
        if params.n() > self.bit_cap {
            return Err(SpinalError::BudgetExceeded {
                n: params.n(),
                cap: self.bit_cap,
            });
        }
        if obs.rows() != params.segments() || obs.cols() != params.passes() {
            return Err(SpinalError::Shape {
                expected_rows: params.segments(),
                expected_cols: params.passes(),
                rows: obs.rows(),
                cols: obs.cols(),
            });
        }
        if let Some(bad) = obs.iter().find(|o| !o.is_finite()) {
            return Err(SpinalError::param("observation", format!("non-finite sample {bad:?}")));
        }

        let depth = params.segments();
        let mut search = Search {
            code: &self.code,
            obs,
            symbols: vec![Complex64::default(); params.passes()],
            words: Vec::with_capacity(depth),
            seg_costs: Vec::with_capacity(depth),
            spines: Vec::with_capacity(depth),
            best: None,
            best_words: Vec::new(),
            nodes: 0,
        };
        search.descend(SpineValue::ZERO, 0.0);

        let mut best = search.best.expect("tree has at least one leaf");
        best.message = Message::from_segments(&search.best_words, params.k())?;
        best.nodes_visited = search.nodes;
        Ok(best)
    }
}

impl Search<'_> {
    fn descend(&mut self, parent: SpineValue, parent_cost: f64) {
        let params = *self.code.params();
        let depth = self.words.len();
        let last = depth + 1 == params.segments();
        let branches = 1u64 << params.k();
        let row = self.obs.row(depth);

        for word in 0..branches {
            let s = hash_step(parent, word, &params);
            self.code.fill_symbols(s, &mut self.symbols);
            self.nodes += 1;
            let mut seg = 0.0;
            for (o, &x) in row.iter().zip(&self.symbols) {
                seg += (o.y - o.h * x).norm_sqr();
            }
            let total = parent_cost + seg;
            if let Some(best) = &self.best {
                if total >= best.cost {
                    continue;
                }
            }

            self.words.push(word);
            self.seg_costs.push(seg);
            self.spines.push(s);
            if last {
                self.best_words.clone_from(&self.words);
                self.best = Some(Decoded {
                    message: Message::from_bits(Vec::new()),
                    cost: total,
                    segment_costs: self.seg_costs.clone(),
                    spine: self.spines.clone(),
                    nodes_visited: 0,
                });
            } else {
                self.descend(s, total);
            }
            self.words.pop();
            self.seg_costs.pop();
            self.spines.pop();
        }
    }
}

/// One-shot ML decode with the default bit cap.
pub fn ml_decode(obs: &ObservationGrid, params: &CodeParams) -> Result<Message> {
    Ok(MlDecoder::new(*params)?.decode(obs)?.message)
}
