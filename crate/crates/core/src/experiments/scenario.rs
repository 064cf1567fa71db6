//! Monte Carlo runs of one scenario.

use rayon::prelude::*;
use serde::Serialize;

use super::config::{Estimator, Method, ScenarioConfig};
use super::diagnostics::{diagnostics_for, DiagnosticRow};
use super::reference::LimitCurve;
use crate::cells::CellProbabilities;
use crate::distance::l1_distance;
use crate::error::Result;
use crate::estimators::{
    grouped_estimator, grouped_parent_estimate, kernel_estimator, kernel_parent_estimate, natural_estimator,
    natural_parent_estimate, parent_density, structural_df,
};
use crate::moments::{binomial_mixture_expectation, grouped_expectation, second_moment};
use crate::population::{grouped_population_sdf, kernel_population_sdf};
use crate::sampling::{sample_multinomial, SeededRng};
use crate::step::{StepCdf, StepDensity};
use crate::summation::compensated_sum;

/// Label of the target `F_M` in step-function dumps.
pub const TARGET_LABEL: &str = "F_M";

/// Distances and moments of one estimator on one replicate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicateRecord {
    pub replicate: usize,
    pub estimator: String,
    pub l1_to_fm: f64,
    /// `None` when the parent has no closed-form limit.
    pub l1_to_f: Option<f64>,
    pub sup_to_f: Option<f64>,
    pub second_moment: f64,
}

impl ReplicateRecord {
    /// L1 distance to `F` when known, otherwise to `F_M`.
    pub fn headline_l1(&self) -> f64 {
        self.l1_to_f.unwrap_or(self.l1_to_fm)
    }
}

/// Median, mean and standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub median: f64,
    pub mean: f64,
    pub stderr: f64,
}

impl Summary {
    /// Summary of a nonempty sample; the standard error of a single value is 0.
    pub fn of(values: &[f64]) -> Summary {
        assert!(!values.is_empty(), "cannot summarize an empty sample");
        let count = values.len() as f64;
        let mean = compensated_sum(values.iter().copied()) / count;
        let stderr = if values.len() > 1 {
            let ss = compensated_sum(values.iter().map(|v| (v - mean) * (v - mean)));
            (ss / (count - 1.0) / count).sqrt()
        } else {
            0.0
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mid = sorted.len() / 2;
        let median = if sorted.len() % 2 == 1 { sorted[mid] } else { 0.5 * (sorted[mid - 1] + sorted[mid]) };
        Summary { median, mean, stderr }
    }
}

/// Aggregate over replicates for one estimator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimatorSummary {
    pub estimator: String,
    /// `"F"` when distances are to the closed-form limit, `"F_M"` otherwise.
    pub target: &'static str,
    pub l1: Summary,
    pub second_moment: Summary,
    /// L1 distance from the estimator's noise-free population curve to the
    /// same target.
    pub population_l1: f64,
}

/// Monte Carlo mean of an estimator at one grid point, with the exact
/// expectation when one is available.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridRecord {
    pub estimator: String,
    pub x: f64,
    pub mean: f64,
    pub stderr: f64,
    pub exact: Option<f64>,
}

/// Step functions of one curve on the designated replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct StepDump {
    pub label: String,
    pub cdf: StepCdf,
    pub density: StepDensity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioResult {
    pub m: usize,
    pub n: u64,
    pub parent: String,
    pub seed: u64,
    pub replicates: usize,
    /// Sorted by replicate, then by estimator in configuration order.
    pub records: Vec<ReplicateRecord>,
    pub summaries: Vec<EstimatorSummary>,
    /// The target `F_M` first, then each estimator.
    pub dumps: Vec<StepDump>,
    pub grid: Vec<GridRecord>,
    pub diagnostics: Vec<DiagnosticRow>,
}

impl ScenarioResult {
    pub fn records_for<'a>(&'a self, estimator: &'a str) -> impl Iterator<Item = &'a ReplicateRecord> + 'a {
        self.records.iter().filter(move |r| r.estimator == estimator)
    }

    pub fn summary(&self, estimator: &str) -> Option<&EstimatorSummary> {
        self.summaries.iter().find(|s| s.estimator == estimator)
    }
}

/// Runs every replicate of `cfg` and aggregates the results. Configuration
/// errors surface before any sampling.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioResult> {
    run_experiment(cfg, 0)
}

/// Counts of replicate `r` in experiment `e` come from stream `(seed, 2e, r)`;
/// the diagnostics use `(seed, 2e + 1, r)`.
pub(crate) fn sample_stream(seed: u64, experiment: u32, replicate: usize) -> SeededRng {
    SeededRng::for_stream(seed, 2 * experiment, replicate as u32)
}

pub(crate) fn diagnostics_stream(seed: u64, experiment: u32, replicate: usize) -> SeededRng {
    SeededRng::for_stream(seed, 2 * experiment + 1, replicate as u32)
}

struct ReplicateOutput {
    records: Vec<ReplicateRecord>,
    /// `grid_values[e][g]` is estimator `e` evaluated at grid point `g`.
    grid_values: Vec<Vec<f64>>,
    dumps: Option<Vec<StepDump>>,
}

pub(crate) fn run_experiment(cfg: &ScenarioConfig, experiment: u32) -> Result<ScenarioResult> {
    let estimators = cfg.validate()?;
    let p = cfg.parent.cell_probabilities(cfg.m)?;
    let limit = cfg.parent.limit_curve();
    let fm = structural_df(&p);

    let outputs = (0..cfg.replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = sample_stream(cfg.seed, experiment, r);
            let counts = sample_multinomial(&p, cfg.n, &mut rng);
            replicate(cfg, &estimators, &counts, r, &fm, limit.as_ref())
        })
        .collect::<Result<Vec<_>>>()?;

    let summaries = estimators
        .iter()
        .enumerate()
        .map(|(e, est)| {
            let rows: Vec<&ReplicateRecord> = outputs.iter().map(|o| &o.records[e]).collect();
            let l1: Vec<f64> = rows.iter().map(|r| r.headline_l1()).collect();
            let moments: Vec<f64> = rows.iter().map(|r| r.second_moment).collect();
            let population = population_sdf(&p, &est.method)?;
            let population_l1 = match &limit {
                Some(curve) => curve.l1_distance(&population),
                None => l1_distance(&population, &fm),
            };
            Ok(EstimatorSummary {
                estimator: est.label.clone(),
                target: if limit.is_some() { "F" } else { "F_M" },
                l1: Summary::of(&l1),
                second_moment: Summary::of(&moments),
                population_l1,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut grid = Vec::with_capacity(estimators.len() * cfg.eval_grid.len());
    for (e, est) in estimators.iter().enumerate() {
        for (g, &x) in cfg.eval_grid.iter().enumerate() {
            let values: Vec<f64> = outputs.iter().map(|o| o.grid_values[e][g]).collect();
            let stats = Summary::of(&values);
            let exact = match &est.method {
                Method::Natural => Some(binomial_mixture_expectation(&p, cfg.n, x)),
                Method::Grouped(scheme) => Some(grouped_expectation(&p, cfg.n, scheme, x)?),
                Method::Kernel(_) => None,
            };
            grid.push(GridRecord { estimator: est.label.clone(), x, mean: stats.mean, stderr: stats.stderr, exact });
        }
    }

    let mut dumps = vec![StepDump { label: TARGET_LABEL.into(), cdf: fm.clone(), density: parent_density(&p) }];
    let mut records = Vec::with_capacity(cfg.replicates * estimators.len());
    for output in outputs {
        records.extend(output.records);
        if let Some(d) = output.dumps {
            dumps.extend(d);
        }
    }

    let diagnostics = if cfg.diagnostics { diagnostics_for(cfg, &p, experiment)? } else { Vec::new() };

    Ok(ScenarioResult {
        m: cfg.m,
        n: cfg.n,
        parent: cfg.parent.name(),
        seed: cfg.seed,
        replicates: cfg.replicates,
        records,
        summaries,
        dumps,
        grid,
        diagnostics,
    })
}

fn replicate(
    cfg: &ScenarioConfig,
    estimators: &[Estimator],
    counts: &[u64],
    r: usize,
    fm: &StepCdf,
    limit: Option<&LimitCurve>,
) -> Result<ReplicateOutput> {
    let dump = r == cfg.dump_replicate;
    let mut records = Vec::with_capacity(estimators.len());
    let mut grid_values = Vec::with_capacity(estimators.len());
    let mut dumps = Vec::new();
    for est in estimators {
        let cdf = estimate(&est.method, counts, cfg.n)?;
        records.push(ReplicateRecord {
            replicate: r,
            estimator: est.label.clone(),
            l1_to_fm: l1_distance(&cdf, fm),
            l1_to_f: limit.map(|c| c.l1_distance(&cdf)),
            sup_to_f: limit.map(|c| c.sup_distance(&cdf)),
            second_moment: second_moment(&cdf),
        });
        grid_values.push(cfg.eval_grid.iter().map(|&x| cdf.eval(x)).collect());
        if dump {
            let density = estimate_density(&est.method, counts, cfg.n)?;
            dumps.push(StepDump { label: est.label.clone(), cdf, density });
        }
    }
    Ok(ReplicateOutput { records, grid_values, dumps: dump.then_some(dumps) })
}

pub(crate) fn estimate(method: &Method, counts: &[u64], n: u64) -> Result<StepCdf> {
    match method {
        Method::Natural => natural_estimator(counts, n),
        Method::Grouped(scheme) => grouped_estimator(counts, n, scheme),
        Method::Kernel(spec) => kernel_estimator(counts, n, spec),
    }
}

fn estimate_density(method: &Method, counts: &[u64], n: u64) -> Result<StepDensity> {
    match method {
        Method::Natural => natural_parent_estimate(counts, n),
        Method::Grouped(scheme) => grouped_parent_estimate(counts, n, scheme),
        Method::Kernel(spec) => kernel_parent_estimate(counts, n, spec),
    }
}

fn population_sdf(p: &CellProbabilities, method: &Method) -> Result<StepCdf> {
    Ok(match method {
        Method::Natural => structural_df(p),
        Method::Grouped(scheme) => grouped_population_sdf(p, scheme)?,
        Method::Kernel(spec) => kernel_population_sdf(p, spec),
    })
}
