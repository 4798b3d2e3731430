//! 0/1 knapsack over real-valued weights.
//!
//! Weights are mapped onto an integer grid of `resolution` cells spanning the
//! budget, rounding each weight *up*. Any selection that fits the grid
//! therefore fits the real budget, at the price of occasionally rejecting a
//! selection that would have fit exactly.

use bitvec::prelude::*;

use crate::error::{Error, Result};

pub const DEFAULT_RESOLUTION: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct KnapsackInstance {
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
    pub budget: f64,
    /// Number of grid cells the budget is divided into.
    pub resolution: usize,
}

impl KnapsackInstance {
    pub fn new(values: Vec<f64>, weights: Vec<f64>, budget: f64) -> Self {
        Self {
            values,
            weights,
            budget,
            resolution: DEFAULT_RESOLUTION,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.values.len() != self.weights.len() {
            return Err(Error::LengthMismatch {
                expected: self.values.len(),
                got: self.weights.len(),
            });
        }
        if self.resolution == 0 {
            return Err(Error::invalid("resolution", "must be at least 1"));
        }
        if !(self.budget.is_finite() && self.budget >= 0.0) {
            return Err(Error::invalid(
                "budget",
                format!("{} must be >= 0", self.budget),
            ));
        }
        if let Some(v) = self.values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::invalid("values", format!("{v} must be >= 0")));
        }
        if let Some(w) = self.weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::invalid("weights", format!("{w} must be > 0")));
        }
        Ok(())
    }

    /// Weight of item `i` in grid cells, or `None` if it can never fit.
    fn grid_weight(&self, i: usize) -> Option<usize> {
        if self.budget <= 0.0 {
            return None;
        }
        let cells = (self.weights[i] * self.resolution as f64 / self.budget).ceil();
        (cells <= self.resolution as f64).then_some(cells as usize)
    }
}

/// Maximizes total value subject to the (grid-rounded) weight budget.
///
/// Returns the selection and its value. Zero-value items are never
/// selected.
pub fn knapsack_max(inst: &KnapsackInstance) -> Result<(Vec<bool>, f64)> {
    inst.validate()?;
    let n = inst.values.len();
    let cap = inst.resolution;
    let items: Vec<(usize, usize)> = (0..n)
        .filter(|&i| inst.values[i] > 0.0)
        .filter_map(|i| inst.grid_weight(i).map(|w| (i, w)))
        .collect();

    let width = cap + 1;
    let mut best = vec![0.0f64; width];
    let mut take = bitvec![0; items.len() * width];
    for (k, &(i, w)) in items.iter().enumerate() {
        let v = inst.values[i];
        for c in (w..=cap).rev() {
            let cand = best[c - w] + v;
            if cand > best[c] {
                best[c] = cand;
                take.set(k * width + c, true);
            }
        }
    }

    let mut selection = vec![false; n];
    let mut c = cap;
    for (k, &(i, w)) in items.iter().enumerate().rev() {
        if take[k * width + c] {
            selection[i] = true;
            c -= w;
        }
    }
    let value = (0..n)
        .filter(|&i| selection[i])
        .map(|i| inst.values[i])
        .sum();
    Ok((selection, value))
}
