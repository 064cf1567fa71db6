//! Estimation of the structural distribution function of multinomial cell
//! probabilities.
//!
//! The structural distribution function (SDF) of a probability vector
//! `p = (p_1, ..., p_M)` is the empirical distribution function of the scaled
//! values `M * p_i`. This crate provides:
//!
//! * exact step-function arithmetic ([`StepCdf`], [`StepDensity`]) and the
//!   L1 / sup distances between step CDFs,
//! * the natural, grouped-cells and kernel-type estimators together with the
//!   noise-free population curves they converge to,
//! * reproducible multinomial / Poisson sampling and the coupling between a
//!   multinomial sample and its Poissonized version ([`sampling`]),
//! * a Monte Carlo experiment harness with CSV output ([`experiments`]).

pub mod cells;
pub mod distance;
pub mod error;
pub mod estimators;
pub mod experiments;
pub mod grouping;
pub mod kernel;
pub mod moments;
pub mod population;
pub mod sampling;
pub mod step;
mod summation;

pub use cells::{make_cell_probs_from_cdf, CellProbabilities};
pub use distance::{l1_distance, sup_distance};
pub use error::{Error, Result};
pub use estimators::{
    grouped_estimator, grouped_parent_estimate, kernel_estimator, kernel_parent_estimate,
    natural_estimator, natural_parent_estimate, parent_density, poissonized_estimator,
    sdf_of_density, structural_df,
};
pub use grouping::GroupingScheme;
pub use kernel::{Kernel, KernelSpec};
pub use moments::{binomial_mixture_expectation, poisson_mixture_expectation, second_moment};
pub use population::{grouped_population_sdf, kernel_population_sdf};
pub use sampling::{CountsPair, SeededRng};
pub use step::{StepCdf, StepDensity};
