//! Shared inputs for the criterion benchmarks.

use sdf_core::experiments::Parent;
use sdf_core::sampling::sample_multinomial;
use sdf_core::{CellProbabilities, SeededRng};

/// Cell probabilities of the quintic parent and one multinomial sample.
pub fn paper_sample(m: usize, n: u64, seed: u64) -> (CellProbabilities, Vec<u64>) {
    let p = Parent::PaperQuintic.cell_probabilities(m).expect("quintic cells");
    let counts = sample_multinomial(&p, n, &mut SeededRng::new(seed));
    (p, counts)
}
