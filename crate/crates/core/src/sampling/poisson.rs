//! Poisson variates.
//!
//! * `mean < 10`: inversion by sequential search from 0.
//! * `mean >= 10`: PTRS, the transformed rejection method with squeeze of
//!   W. Hörmann, "The transformed rejection method for generating Poisson
//!   random variables", Insurance: Mathematics and Economics 12 (1993).

use statrs::function::gamma::ln_gamma;

use super::SeededRng;

const INVERSION_LIMIT: f64 = 10.0;

/// Draws from Poisson(`mean`).
///
/// # Panics
///
/// If `mean` is negative or not finite.
pub fn sample_poisson(mean: f64, rng: &mut SeededRng) -> u64 {
    assert!(mean.is_finite() && mean >= 0.0, "Poisson mean must be finite and >= 0, got {mean}");
    if mean == 0.0 {
        0
    } else if mean < INVERSION_LIMIT {
        inversion(mean, rng)
    } else {
        ptrs(mean, rng)
    }
}

fn inversion(mean: f64, rng: &mut SeededRng) -> u64 {
    let start = (-mean).exp();
    'draw: loop {
        let u = rng.uniform();
        let mut k = 0u64;
        let mut pmf = start;
        let mut cdf = start;
        while u > cdf {
            k += 1;
            pmf *= mean / k as f64;
            if pmf == 0.0 {
                // u fell in the rounding gap just below 1
                continue 'draw;
            }
            cdf += pmf;
        }
        return k;
    }
}

fn ptrs(mean: f64, rng: &mut SeededRng) -> u64 {
    let log_mean = mean.ln();
    let b = 0.931 + 2.53 * mean.sqrt();
    let a = -0.059 + 0.02483 * b;
    let inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    let v_r = 0.9277 - 3.6224 / (b - 2.0);
    loop {
        let u = rng.uniform() - 0.5;
        let v = rng.uniform();
        let us = 0.5 - u.abs();
        let k = ((2.0 * a / us + b) * u + mean + 0.43).floor();
        if us >= 0.07 && v <= v_r {
            return k as u64;
        }
        if k < 0.0 || (us < 0.013 && v > us) {
            continue;
        }
        let lhs = v.ln() + inv_alpha.ln() - (a / (us * us) + b).ln();
        let rhs = -mean + k * log_mean - ln_gamma(k + 1.0);
        if lhs <= rhs {
            return k as u64;
        }
    }
}
