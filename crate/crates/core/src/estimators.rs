//! The structural distribution function, its parent density, and the three
//! estimators built from observed cell counts.
//!
//! Every estimator here is the distribution function of a value picked from a
//! piecewise-constant density on `(0, 1]` with probability equal to the width
//! of its interval. The CDF routes and the density routes share the same
//! arithmetic, so `sdf_of_density(x_parent_estimate(..)) == x_estimator(..)`
//! holds bit-for-bit.

use crate::cells::CellProbabilities;
use crate::error::{Error, Result};
use crate::grouping::GroupingScheme;
use crate::kernel::KernelSpec;
use crate::step::{StepCdf, StepDensity};

/// `M * numerator / denominator`, evaluated in one fixed order so that
/// estimators which coincide mathematically also coincide in floating point.
#[inline]
pub(crate) fn scaled_value(m: usize, numerator: f64, denominator: u64) -> f64 {
    m as f64 * numerator / denominator as f64
}

fn check_counts(counts: &[u64], n: u64) -> Result<()> {
    if counts.is_empty() {
        return Err(Error::InvalidArgument("counts must cover at least one cell".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("sample size n must be positive".into()));
    }
    let total: u64 = counts.iter().sum();
    if total != n {
        return Err(Error::InvalidArgument(format!("counts sum to {total} but n = {n}")));
    }
    Ok(())
}

/// `F_M(x) = (1/M) #{i : M p_i <= x}`.
pub fn structural_df(p: &CellProbabilities) -> StepCdf {
    StepCdf::from_weighted_values(p.scaled().map(|v| (v, 1)))
        .expect("cell probabilities always yield finite values")
}

/// `g_M(u) = M p_i` for `u` in `((i-1)/M, i/M]`.
pub fn parent_density(p: &CellProbabilities) -> StepDensity {
    StepDensity::on_cell_grid(p.scaled().collect()).expect("scaled probabilities are nonnegative")
}

/// Distribution function of `d(U)` for `U` uniform on `(0, 1]`.
pub fn sdf_of_density(d: &StepDensity) -> StepCdf {
    StepCdf::from_weighted_values(
        d.heights().iter().zip(d.lattice_widths()).map(|(&h, w)| (h, w as u64)),
    )
    .expect("densities have finite heights and positive total width")
}

/// Natural estimator: the empirical distribution function of `(M/n) X_i`.
pub fn natural_estimator(counts: &[u64], n: u64) -> Result<StepCdf> {
    check_counts(counts, n)?;
    Ok(scaled_counts_sdf(counts, n))
}

/// Parent-density analogue of [`natural_estimator`]: height `(M/n) X_i` on
/// cell `i`.
pub fn natural_parent_estimate(counts: &[u64], n: u64) -> Result<StepDensity> {
    check_counts(counts, n)?;
    let m = counts.len();
    StepDensity::on_cell_grid(counts.iter().map(|&x| scaled_value(m, x as f64, n)).collect())
}

/// Empirical distribution function of `(M/n) Y_i` where the counts need not
/// sum to `n`. Applied to Poisson counts `Y` this is the Poissonized version
/// of the natural estimator.
pub fn poissonized_estimator(counts: &[u64], n: u64) -> Result<StepCdf> {
    if counts.is_empty() || n == 0 {
        return Err(Error::InvalidArgument("need at least one cell and n > 0".into()));
    }
    Ok(scaled_counts_sdf(counts, n))
}

fn scaled_counts_sdf(counts: &[u64], n: u64) -> StepCdf {
    let m = counts.len();
    StepCdf::from_weighted_values(counts.iter().map(|&x| (scaled_value(m, x as f64, n), 1)))
        .expect("counts yield finite values")
}

fn group_heights(counts: &[u64], n: u64, scheme: &GroupingScheme) -> Vec<f64> {
    let m = counts.len();
    scheme
        .ranges()
        .map(|range| {
            let size = range.len() as u64;
            let total: u64 = counts[range].iter().sum();
            scaled_value(m, total as f64, n * size)
        })
        .collect()
}

/// Grouped-cells estimator: mass `(k_j - k_{j-1})/M` at
/// `M * Xbar_j / (n (k_j - k_{j-1}))` where `Xbar_j` is the total count of
/// group `j`.
pub fn grouped_estimator(counts: &[u64], n: u64, scheme: &GroupingScheme) -> Result<StepCdf> {
    check_counts(counts, n)?;
    scheme.check_cells(counts.len())?;
    let heights = group_heights(counts, n, scheme);
    StepCdf::from_weighted_values(heights.into_iter().zip(scheme.sizes().map(|s| s as u64)))
}

/// Histogram estimate of the parent density underlying [`grouped_estimator`].
pub fn grouped_parent_estimate(counts: &[u64], n: u64, scheme: &GroupingScheme) -> Result<StepDensity> {
    check_counts(counts, n)?;
    scheme.check_cells(counts.len())?;
    StepDensity::new(scheme.breaks().to_vec(), counts.len(), group_heights(counts, n, scheme))
}

/// `sum_i w((j - i)/k) values[i]` for every cell `j`, with `i` restricted to
/// the cells `1..=M`. Nothing is reflected or wrapped at the boundary.
pub(crate) fn kernel_smooth(values: &[f64], spec: &KernelSpec) -> Vec<f64> {
    let m = values.len();
    let reach = spec.reach();
    let weights = spec.offset_weights();
    (0..m)
        .map(|j| {
            let lo = j.saturating_sub(reach);
            let hi = (j + reach).min(m - 1);
            let mut acc = 0.0;
            for (i, &v) in values.iter().enumerate().take(hi + 1).skip(lo) {
                // offset j - i shifted into 0..=2*reach
                let w = weights[j + reach - i];
                if w != 0.0 {
                    acc += w * v;
                }
            }
            acc
        })
        .collect()
}

fn kernel_heights(counts: &[u64], n: u64, spec: &KernelSpec) -> Vec<f64> {
    let m = counts.len();
    let as_float: Vec<f64> = counts.iter().map(|&x| x as f64).collect();
    let denominator = n * spec.bandwidth() as u64;
    kernel_smooth(&as_float, spec)
        .into_iter()
        .map(|s| scaled_value(m, s, denominator))
        .collect()
}

/// Kernel estimate of the parent density:
/// height `(M/(n k)) sum_i w((j - i)/k) X_i` on cell `j`.
pub fn kernel_parent_estimate(counts: &[u64], n: u64, spec: &KernelSpec) -> Result<StepDensity> {
    check_counts(counts, n)?;
    StepDensity::on_cell_grid(kernel_heights(counts, n, spec))
}

/// Kernel-type estimator: mass `1/M` at each cell height of
/// [`kernel_parent_estimate`].
pub fn kernel_estimator(counts: &[u64], n: u64, spec: &KernelSpec) -> Result<StepCdf> {
    check_counts(counts, n)?;
    StepCdf::from_weighted_values(kernel_heights(counts, n, spec).into_iter().map(|h| (h, 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Kernel;

    fn probs(v: &[f64]) -> CellProbabilities {
        CellProbabilities::new(v.to_vec()).unwrap()
    }

    #[test]
    fn structural_df_examples() {
        assert_eq!(structural_df(&probs(&[0.5, 0.5])), StepCdf::point_mass(1.0).unwrap());
        let f = structural_df(&probs(&[0.2, 0.8]));
        assert_eq!(f.knots(), &[0.4, 1.6]);
        assert_eq!(f.levels(), &[0.5, 1.0]);
    }

    #[test]
    fn parent_density_examples() {
        let d = parent_density(&probs(&[0.25; 4]));
        assert!(d.heights().iter().all(|&h| h == 1.0));
        assert_eq!(d.integral(), 1.0);
        let d = parent_density(&probs(&[0.2, 0.8]));
        assert_eq!(d.heights(), &[0.4, 1.6]);
        assert_eq!(d.breakpoints(), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn sdf_of_density_examples() {
        let flat = StepDensity::on_cell_grid(vec![1.0; 7]).unwrap();
        assert_eq!(sdf_of_density(&flat), StepCdf::point_mass(1.0).unwrap());
        let d = StepDensity::on_cell_grid(vec![0.4, 1.6]).unwrap();
        let f = sdf_of_density(&d);
        assert_eq!(f.knots(), &[0.4, 1.6]);
        assert_eq!(f.levels(), &[0.5, 1.0]);
    }

    #[test]
    fn natural_estimator_examples() {
        let f = natural_estimator(&[2, 0], 2).unwrap();
        assert_eq!(f.knots(), &[0.0, 2.0]);
        assert_eq!(f.levels(), &[0.5, 1.0]);
        assert_eq!(natural_estimator(&[1, 1], 2).unwrap(), StepCdf::point_mass(1.0).unwrap());
    }

    #[test]
    fn natural_estimator_rejects_sum_mismatch() {
        assert!(matches!(natural_estimator(&[1, 1], 3), Err(Error::InvalidArgument(_))));
        assert!(natural_estimator(&[], 0).is_err());
    }

    #[test]
    fn poissonized_estimator_accepts_any_total() {
        let f = poissonized_estimator(&[3, 0], 2).unwrap();
        assert_eq!(f.knots(), &[0.0, 3.0]);
    }

    #[test]
    fn grouped_estimator_examples() {
        let counts = [2, 0, 1, 1];
        let unit = GroupingScheme::unit(4).unwrap();
        assert_eq!(grouped_estimator(&counts, 4, &unit).unwrap(), natural_estimator(&counts, 4).unwrap());

        let one = GroupingScheme::single(4).unwrap();
        assert_eq!(grouped_estimator(&counts, 4, &one).unwrap(), StepCdf::point_mass(1.0).unwrap());

        // 4 * 2 / (4 * 2) = 1 for both halves
        let halves = GroupingScheme::new(vec![0, 2, 4]).unwrap();
        assert_eq!(grouped_estimator(&counts, 4, &halves).unwrap(), StepCdf::point_mass(1.0).unwrap());
    }

    #[test]
    fn grouped_estimator_uneven_groups() {
        // M = 5, n = 10, groups {1,2}, {3,4,5}: totals 6 and 4
        // heights 5*6/(10*2) = 1.5 with mass 2/5, 5*4/(10*3) = 2/3 with mass 3/5
        let counts = [5, 1, 0, 4, 0];
        let scheme = GroupingScheme::new(vec![0, 2, 5]).unwrap();
        let f = grouped_estimator(&counts, 10, &scheme).unwrap();
        assert_eq!(f.knots(), &[20.0 / 30.0, 1.5]);
        assert_eq!(f.levels(), &[0.6, 1.0]);
        let d = grouped_parent_estimate(&counts, 10, &scheme).unwrap();
        assert_eq!(sdf_of_density(&d), f);
        assert!((d.integral() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn grouped_scheme_must_match_cells() {
        let scheme = GroupingScheme::new(vec![0, 2, 5]).unwrap();
        assert!(grouped_estimator(&[1, 1, 1, 1], 4, &scheme).is_err());
        assert!(grouped_parent_estimate(&[1, 1, 1, 1], 4, &scheme).is_err());
    }

    #[test]
    fn grouped_parent_estimate_examples() {
        let counts = [3, 0, 1, 0, 2, 2];
        let unit = GroupingScheme::unit(6).unwrap();
        let d = grouped_parent_estimate(&counts, 8, &unit).unwrap();
        let expected: Vec<f64> = counts.iter().map(|&x| 6.0 * x as f64 / 8.0).collect();
        assert_eq!(d.heights(), expected.as_slice());
        let one = GroupingScheme::single(6).unwrap();
        let d = grouped_parent_estimate(&counts, 8, &one).unwrap();
        assert_eq!(d.heights(), &[1.0]);
    }

    #[test]
    fn box_kernel_unit_bandwidth_is_natural() {
        let counts = [4, 0, 1, 3, 2];
        let spec = KernelSpec::new(Kernel::Box, 1).unwrap();
        let d = kernel_parent_estimate(&counts, 10, &spec).unwrap();
        let natural = natural_parent_estimate(&counts, 10).unwrap();
        assert_eq!(d, natural);
        assert_eq!(kernel_estimator(&counts, 10, &spec).unwrap(), natural_estimator(&counts, 10).unwrap());
    }

    #[test]
    fn box_kernel_left_boundary_loses_mass() {
        // X_1 = n, k = 3: w((j-1)/3) = 1 for j - 1 in {-1, 0, 1}, so cells 1 and 2
        // get height M/3 and cell 0 falls outside the grid
        let m = 9;
        let n = 6;
        let mut counts = vec![0u64; m];
        counts[0] = n;
        let spec = KernelSpec::new(Kernel::Box, 3).unwrap();
        let d = kernel_parent_estimate(&counts, n, &spec).unwrap();
        let third = m as f64 / 3.0;
        assert_eq!(&d.heights()[..3], &[third, third, 0.0]);
        assert!(d.heights()[2..].iter().all(|&h| h == 0.0));
        assert!((d.integral() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn triangular_kernel_direct_sum() {
        // M = 5, n = 5, X = (0, 0, 5, 0, 0), k = 2:
        // height_j = (5/(5*2)) * w((j-3)/2) * 5 = 2.5 * (1 - |j-3|/2)
        let counts = [0, 0, 5, 0, 0];
        let spec = KernelSpec::new(Kernel::Triangular, 2).unwrap();
        let d = kernel_parent_estimate(&counts, 5, &spec).unwrap();
        assert_eq!(d.heights(), &[0.0, 1.25, 2.5, 1.25, 0.0]);
        let f = kernel_estimator(&counts, 5, &spec).unwrap();
        assert_eq!(f.knots(), &[0.0, 1.25, 2.5]);
        assert_eq!(f.levels(), &[0.4, 0.8, 1.0]);
    }

    #[test]
    fn uniform_counts_interior_heights_match_riemann_mass() {
        let m = 60;
        let per_cell = 3u64;
        let counts = vec![per_cell; m];
        let n = per_cell * m as u64;
        for kernel in Kernel::ALL {
            for k in [1usize, 4, 7] {
                let spec = KernelSpec::new(kernel, k).unwrap();
                let d = kernel_parent_estimate(&counts, n, &spec).unwrap();
                let reach = spec.reach();
                let target = spec.riemann_mass();
                for j in reach..m - reach {
                    assert!((d.heights()[j] - target).abs() < 1e-9, "{kernel} k={k} j={j}");
                }
            }
        }
    }

    #[test]
    fn single_cell_is_point_mass_everywhere() {
        let one = [7u64];
        let point = StepCdf::point_mass(1.0).unwrap();
        assert_eq!(natural_estimator(&one, 7).unwrap(), point);
        assert_eq!(grouped_estimator(&one, 7, &GroupingScheme::single(1).unwrap()).unwrap(), point);
        let spec = KernelSpec::new(Kernel::Box, 1).unwrap();
        assert_eq!(kernel_estimator(&one, 7, &spec).unwrap(), point);
        assert_eq!(structural_df(&probs(&[1.0])), point);
    }
}
