//! Binomial variates.
//!
//! After reflecting to `p <= 1/2`:
//! * `n p <= 30`: inversion by sequential search from 0,
//! * `n p > 30`: BTRS, the transformed rejection method with squeeze of
//!   W. Hörmann, "The generation of binomial random variates", J. Statist.
//!   Comput. Simul. 46 (1993).
//!
//! Results always lie in `0..=trials`.

use statrs::function::gamma::ln_gamma;

use super::SeededRng;

const INVERSION_LIMIT: f64 = 30.0;

/// Draws from Binomial(`trials`, `p`). `p` is clamped to `[0, 1]`; NaN counts as 0.
pub fn sample_binomial(trials: u64, p: f64, rng: &mut SeededRng) -> u64 {
    if trials == 0 || p.is_nan() || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return trials;
    }
    if p > 0.5 {
        return trials - sample_binomial(trials, 1.0 - p, rng);
    }
    if trials as f64 * p <= INVERSION_LIMIT {
        inversion(trials, p, rng)
    } else {
        btrs(trials, p, rng)
    }
}

fn inversion(trials: u64, p: f64, rng: &mut SeededRng) -> u64 {
    let q = 1.0 - p;
    let n = trials as f64;
    let start = (n * q.ln()).exp();
    let ratio = p / q;
    'draw: loop {
        let mut u = rng.uniform();
        let mut k = 0u64;
        let mut pmf = start;
        while u > pmf {
            u -= pmf;
            k += 1;
            if k > trials {
                continue 'draw;
            }
            pmf *= ratio * (trials - k + 1) as f64 / k as f64;
            if pmf == 0.0 {
                continue 'draw;
            }
        }
        return k;
    }
}

fn btrs(trials: u64, p: f64, rng: &mut SeededRng) -> u64 {
    let n = trials as f64;
    let q = 1.0 - p;
    let spq = (n * p * q).sqrt();
    let b = 1.15 + 2.53 * spq;
    let a = -0.0873 + 0.0248 * b + 0.01 * p;
    let c = n * p + 0.5;
    let v_r = 0.92 - 4.2 / b;
    let alpha = (2.83 + 5.1 / b) * spq;
    let log_ratio = (p / q).ln();
    let mode = ((n + 1.0) * p).floor();
    let h = ln_gamma(mode + 1.0) + ln_gamma(n - mode + 1.0);
    loop {
        let u = rng.uniform() - 0.5;
        let v = rng.uniform();
        let us = 0.5 - u.abs();
        let k = ((2.0 * a / us + b) * u + c).floor();
        if !(0.0..=n).contains(&k) {
            continue;
        }
        if us >= 0.07 && v <= v_r {
            return k as u64;
        }
        let lhs = (v * alpha / (a / (us * us) + b)).ln();
        let rhs = h - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0) + (k - mode) * log_ratio;
        if lhs <= rhs {
            return k as u64;
        }
    }
}
