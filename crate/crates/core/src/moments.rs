//! Moments and exact expectations of the natural estimator.

use statrs::distribution::{Binomial, DiscreteCDF, Poisson};

use crate::cells::CellProbabilities;
use crate::estimators::scaled_value;
use crate::grouping::GroupingScheme;
use crate::population::group_probabilities;
use crate::step::StepCdf;
use crate::summation::compensated_sum;

/// `∫ x^2 dF` for a step distribution function.
pub fn second_moment(f: &StepCdf) -> f64 {
    compensated_sum(f.jumps().map(|(x, mass)| mass * x * x))
}

/// Largest count `c >= 0` with `M c / denominator <= x`, using the same
/// arithmetic the estimators use to place their jumps. `None` when no count
/// qualifies (`x < 0`); `u64::MAX` when every count does.
pub(crate) fn count_threshold(m: usize, denominator: u64, x: f64) -> Option<u64> {
    if x.is_nan() || x < 0.0 {
        return None;
    }
    let approx = (x * denominator as f64 / m as f64).floor();
    if !approx.is_finite() || approx >= 9.0e15 {
        return Some(u64::MAX);
    }
    let mut c = approx as u64;
    while scaled_value(m, (c + 1) as f64, denominator) <= x {
        c += 1;
    }
    while scaled_value(m, c as f64, denominator) > x {
        // c = 0 always satisfies 0 <= x here
        c -= 1;
    }
    Some(c)
}

fn poisson_cdf(mean: f64, c: u64) -> f64 {
    if mean == 0.0 || c == u64::MAX {
        return 1.0;
    }
    Poisson::new(mean).expect("positive finite mean").cdf(c)
}

fn binomial_cdf(trials: u64, p: f64, c: u64) -> f64 {
    if c >= trials {
        return 1.0;
    }
    if p <= 0.0 {
        return 1.0;
    }
    if p >= 1.0 {
        return 0.0;
    }
    Binomial::new(p, trials).expect("p in (0, 1)").cdf(c)
}

/// Expectation of the Poissonized natural estimator at `x`:
/// `(1/M) sum_i P((M/n) Y_i <= x)` with independent `Y_i ~ Poisson(n p_i)`.
pub fn poisson_mixture_expectation(p: &CellProbabilities, n: u64, x: f64) -> f64 {
    let m = p.len();
    let Some(c) = count_threshold(m, n, x) else {
        return 0.0;
    };
    compensated_sum(p.iter().map(|pi| poisson_cdf(n as f64 * pi, c))) / m as f64
}

/// Expectation of the natural estimator at `x` under the multinomial model:
/// `(1/M) sum_i P((M/n) X_i <= x)` with `X_i ~ Binomial(n, p_i)`.
pub fn binomial_mixture_expectation(p: &CellProbabilities, n: u64, x: f64) -> f64 {
    let m = p.len();
    let Some(c) = count_threshold(m, n, x) else {
        return 0.0;
    };
    compensated_sum(p.iter().map(|pi| binomial_cdf(n, pi, c))) / m as f64
}

/// Expectation of the grouped-cells estimator at `x`. Group totals are
/// `Binomial(n, q_mj)`, so this is exact.
pub fn grouped_expectation(p: &CellProbabilities, n: u64, scheme: &GroupingScheme, x: f64) -> crate::Result<f64> {
    let m = p.len();
    let q = group_probabilities(p, scheme)?;
    let terms = q.iter().zip(scheme.sizes()).map(|(&qj, size)| {
        match count_threshold(m, n * size as u64, x) {
            None => 0.0,
            Some(c) => size as f64 * binomial_cdf(n, qj, c),
        }
    });
    Ok(compensated_sum(terms) / m as f64)
}
