//! Multinomial cell probabilities.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::summation::compensated_sum;

/// Largest deviation of `sum(p)` from 1 that is silently corrected.
pub const RENORMALIZE_TOLERANCE: f64 = 1e-9;

/// Slack allowed when checking that a CDF grid is nondecreasing and pinned to
/// 0 and 1 at the ends.
const GRID_TOLERANCE: f64 = 1e-12;

/// The probability vector `p_M = (p_M1, ..., p_MM)` of a multinomial model.
///
/// Entries are nonnegative and sum to one. Construction renormalizes when
/// the sum drifts from one by at most [`RENORMALIZE_TOLERANCE`] and rejects
/// anything further off.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellProbabilities {
    probs: Vec<f64>,
}

impl CellProbabilities {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidArgument("at least one cell is required".into()));
        }
        if let Some((i, p)) = probs.iter().enumerate().find(|(_, p)| !p.is_finite() || **p < 0.0) {
            return Err(Error::Model(format!("cell {} has invalid probability {p}", i + 1)));
        }
        let mut sorted = probs.clone();
        sorted.sort_by(f64::total_cmp);
        let total = compensated_sum(sorted);
        if (total - 1.0).abs() > RENORMALIZE_TOLERANCE {
            return Err(Error::Model(format!(
                "cell probabilities sum to {total}, which is not within {RENORMALIZE_TOLERANCE} of 1"
            )));
        }
        let probs = if total == 1.0 { probs } else { probs.into_iter().map(|p| p / total).collect() };
        Ok(CellProbabilities { probs })
    }

    /// Equal probabilities `1/M` in every cell.
    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("at least one cell is required".into()));
        }
        Ok(CellProbabilities { probs: vec![1.0 / m as f64; m] })
    }

    /// Number of cells `M`.
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.probs.iter().copied()
    }

    /// Scaled values `M * p_i`, the parent-density heights.
    pub fn scaled(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        let m = self.len() as f64;
        self.probs.iter().map(move |p| m * p)
    }
}

/// Cell probabilities `p_i = G(i/M) - G((i-1)/M)` from a distribution function
/// `G` on `[0, 1]`.
pub fn make_cell_probs_from_cdf<G>(cdf: G, m: usize) -> Result<CellProbabilities>
where
    G: Fn(f64) -> f64,
{
    if m == 0 {
        return Err(Error::InvalidArgument("M must be positive".into()));
    }
    let grid: Vec<f64> = (0..=m).map(|i| cdf(i as f64 / m as f64)).collect();
    if let Some(bad) = grid.iter().position(|v| !v.is_finite()) {
        return Err(Error::Model(format!("G({bad}/{m}) is not finite")));
    }
    if grid[0].abs() > RENORMALIZE_TOLERANCE || (grid[m] - 1.0).abs() > RENORMALIZE_TOLERANCE {
        return Err(Error::Model(format!(
            "G must satisfy G(0) = 0 and G(1) = 1, got G(0) = {} and G(1) = {}",
            grid[0], grid[m]
        )));
    }
    let mut probs = Vec::with_capacity(m);
    for i in 1..=m {
        let step = grid[i] - grid[i - 1];
        if step < -GRID_TOLERANCE {
            return Err(Error::Model(format!(
                "G decreases between {}/{m} and {i}/{m} ({} -> {})",
                i - 1,
                grid[i - 1],
                grid[i]
            )));
        }
        probs.push(step.max(0.0));
    }
    CellProbabilities::new(probs)
}
