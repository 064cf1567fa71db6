//! Coupling of a multinomial sample `X ~ mult(n, p)` with a Poissonized
//! sample `Y` (independent `Y_i ~ Poisson(n p_i)`, total `N ~ Poisson(n)`).
//!
//! Given `N`, both vectors share a base draw `B ~ mult(min(n, N), p)`; the
//! larger one adds an independent increment `E ~ mult(|N - n|, p)`. So either
//! `X <= Y` or `X >= Y` coordinatewise and `sum |X_i - Y_i| = |N - n|`.

use super::{sample_multinomial, sample_poisson, SeededRng};
use crate::cells::CellProbabilities;
use crate::distance::{l1_distance, sup_distance};
use crate::estimators::poissonized_estimator;

/// A coupled multinomial / Poissonized pair of count vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountsPair {
    /// Multinomial counts, summing to `n`.
    pub x: Vec<u64>,
    /// Poissonized counts, summing to `capital_n`.
    pub y: Vec<u64>,
    pub n: u64,
    /// Realized Poisson(n) total `N`.
    pub capital_n: u64,
}

impl CountsPair {
    /// `x_i - y_i` has the same sign (or is zero) for every cell.
    pub fn sign_consistent(&self) -> bool {
        let all_le = self.x.iter().zip(&self.y).all(|(a, b)| a <= b);
        let all_ge = self.x.iter().zip(&self.y).all(|(a, b)| a >= b);
        all_le || all_ge
    }

    /// `sum_i |x_i - y_i|`.
    pub fn total_gap(&self) -> u64 {
        self.x.iter().zip(&self.y).map(|(&a, &b)| a.abs_diff(b)).sum()
    }

    /// Number of cells with `x_i != y_i`.
    pub fn mismatched_cells(&self) -> usize {
        self.x.iter().zip(&self.y).filter(|(a, b)| a != b).count()
    }

    /// Checks both structural invariants of the coupling.
    pub fn invariants_hold(&self) -> bool {
        self.x.iter().sum::<u64>() == self.n
            && self.y.iter().sum::<u64>() == self.capital_n
            && self.sign_consistent()
            && self.total_gap() == self.n.abs_diff(self.capital_n)
    }
}

/// Draws a coupled pair. Requires `n >= 1`.
pub fn sample_coupled(p: &CellProbabilities, n: u64, rng: &mut SeededRng) -> CountsPair {
    assert!(n >= 1, "coupling needs n >= 1");
    let capital_n = sample_poisson(n as f64, rng);
    let base = sample_multinomial(p, n.min(capital_n), rng);
    let extra = sample_multinomial(p, n.abs_diff(capital_n), rng);
    let topped: Vec<u64> = base.iter().zip(&extra).map(|(b, e)| b + e).collect();
    let (x, y) = if capital_n <= n { (topped, base) } else { (base, topped) };
    CountsPair { x, y, n, capital_n }
}

/// How far the natural estimator moves when the sample is Poissonized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingReport {
    /// `|N - n| / M`.
    pub bound: f64,
    /// `#{i : x_i != y_i} / M`.
    pub mismatch_fraction: f64,
    /// `sup_x |F̂(x) - F̃(x)|` between the natural estimator of `x` and its
    /// Poissonized analogue built from `y` with denominator `n`.
    pub sup_distance: f64,
    /// `∫ |F̂ - F̃|`.
    pub l1_distance: f64,
    /// `|N - n| / n`, which equals `l1_distance` whenever the pair is
    /// sign-consistent.
    pub l1_identity: f64,
}

/// Slack for comparing levels that are integer multiples of `1/M`.
const LEVEL_SLACK: f64 = 1e-12;

impl CouplingReport {
    /// `sup |F̂ - F̃| <= #{x_i != y_i}/M <= |N - n|/M` and the L1 identity.
    pub fn chain_holds(&self) -> bool {
        self.sup_distance <= self.mismatch_fraction + LEVEL_SLACK
            && self.mismatch_fraction <= self.bound
            && (self.l1_distance - self.l1_identity).abs() <= LEVEL_SLACK * (1.0 + self.l1_identity)
    }
}

pub fn coupling_l1_bound(pair: &CountsPair) -> CouplingReport {
    let m = pair.x.len() as f64;
    let natural = poissonized_estimator(&pair.x, pair.n).expect("pair has cells and n >= 1");
    let poissonized = poissonized_estimator(&pair.y, pair.n).expect("pair has cells and n >= 1");
    let gap = pair.n.abs_diff(pair.capital_n) as f64;
    CouplingReport {
        bound: gap / m,
        mismatch_fraction: pair.mismatched_cells() as f64 / m,
        sup_distance: sup_distance(&natural, &poissonized),
        l1_distance: l1_distance(&natural, &poissonized),
        l1_identity: gap / pair.n as f64,
    }
}
