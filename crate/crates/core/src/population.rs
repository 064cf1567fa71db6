//! Noise-free targets of the smoothed estimators: the same smoothing applied
//! to the true cell probabilities instead of the observed frequencies.

use crate::cells::CellProbabilities;
use crate::error::Result;
use crate::estimators::kernel_smooth;
use crate::grouping::GroupingScheme;
use crate::kernel::KernelSpec;
use crate::step::StepCdf;
use crate::summation::compensated_sum;

/// Group probabilities `q_mj = sum of p_i over group j`, compensated.
pub fn group_probabilities(p: &CellProbabilities, scheme: &GroupingScheme) -> Result<Vec<f64>> {
    scheme.check_cells(p.len())?;
    let probs = p.as_slice();
    Ok(scheme.ranges().map(|r| compensated_sum(probs[r].iter().copied())).collect())
}

/// Grouped SDF of the true probabilities: mass `(k_j - k_{j-1})/M` at
/// `M q_mj / (k_j - k_{j-1})`.
pub fn grouped_population_sdf(p: &CellProbabilities, scheme: &GroupingScheme) -> Result<StepCdf> {
    let m = p.len() as f64;
    let q = group_probabilities(p, scheme)?;
    StepCdf::from_weighted_values(
        q.into_iter().zip(scheme.sizes()).map(|(q, size)| (m * q / size as f64, size as u64)),
    )
}

/// Kernel-smoothed SDF of the true probabilities: mass `1/M` at
/// `(1/k) sum_i w((j - i)/k) M p_i` for every cell `j`.
pub fn kernel_population_sdf(p: &CellProbabilities, spec: &KernelSpec) -> StepCdf {
    let m = p.len() as f64;
    let k = spec.bandwidth() as f64;
    let smoothed = kernel_smooth(p.as_slice(), spec);
    StepCdf::from_weighted_values(smoothed.into_iter().map(|s| (m * s / k, 1)))
        .expect("smoothed probabilities are finite")
}
