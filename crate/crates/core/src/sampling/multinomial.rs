use super::{sample_binomial, SeededRng};
use crate::cells::CellProbabilities;

/// Draws from mult(`n`, `p`) by the conditional-binomial method: cell `i`
/// receives Binomial(remaining trials, `p_i / (p_i + ... + p_M)`) and the last
/// cell takes whatever is left.
pub fn sample_multinomial(p: &CellProbabilities, n: u64, rng: &mut SeededRng) -> Vec<u64> {
    let probs = p.as_slice();
    let m = probs.len();
    let mut tail_mass = vec![0.0; m];
    let mut acc = 0.0;
    for i in (0..m).rev() {
        acc += probs[i];
        tail_mass[i] = acc;
    }

    let mut counts = vec![0u64; m];
    let mut remaining = n;
    for i in 0..m - 1 {
        if remaining == 0 {
            break;
        }
        let share = if tail_mass[i] > 0.0 { (probs[i] / tail_mass[i]).min(1.0) } else { 0.0 };
        let x = sample_binomial(remaining, share, rng);
        counts[i] = x;
        remaining -= x;
    }
    counts[m - 1] += remaining;
    counts
}
