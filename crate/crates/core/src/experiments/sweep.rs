//! Consistency sweeps: the same scenario at growing `(M, n)`.

use serde::Serialize;

use super::config::{Method, ScenarioConfig};
use super::scenario::{run_experiment, ScenarioResult};
use crate::error::{Error, Result};

/// One line of `sweep.csv`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub scale: u32,
    pub m: usize,
    pub n: u64,
    pub estimator: String,
    pub median_l1: f64,
    pub mean_l1: f64,
    pub stderr_l1: f64,
}

impl SweepRow {
    /// Rows for every estimator of `result`, tagged with `scale`.
    pub fn from_result(result: &ScenarioResult, scale: u32) -> Vec<SweepRow> {
        result
            .summaries
            .iter()
            .map(|s| SweepRow {
                scale,
                m: result.m,
                n: result.n,
                estimator: s.estimator.clone(),
                median_l1: s.l1.median,
                mean_l1: s.l1.mean,
                stderr_l1: s.l1.stderr,
            })
            .collect()
    }
}

/// Runs `base` with `M` and `n` multiplied by each scale. Scales must be
/// strictly increasing, and every smoothed estimator must move its
/// consistency conditions in the right direction from one scale to the next:
/// grouped estimators need `m/n` strictly decreasing and the largest group
/// fraction not increasing, kernel estimators need `k` strictly increasing,
/// `M/(nk)` strictly decreasing and `k/M` not increasing.
pub fn consistency_sweep(base: &ScenarioConfig, scales: &[u32]) -> Result<Vec<SweepRow>> {
    let configs = scaled_configs(base, scales)?;
    let mut rows = Vec::new();
    for (idx, (&scale, cfg)) in scales.iter().zip(&configs).enumerate() {
        let result = run_experiment(cfg, idx as u32)?;
        rows.extend(SweepRow::from_result(&result, scale));
    }
    Ok(rows)
}

fn scaled_configs(base: &ScenarioConfig, scales: &[u32]) -> Result<Vec<ScenarioConfig>> {
    if scales.is_empty() {
        return Err(Error::Config("at least one scale is required".into()));
    }
    if scales[0] == 0 || scales.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config(format!("scales must be positive and strictly increasing, got {scales:?}")));
    }
    let mut configs = Vec::with_capacity(scales.len());
    for &s in scales {
        let m = base.m.checked_mul(s as usize);
        let n = base.n.checked_mul(s as u64);
        let (Some(m), Some(n)) = (m, n) else {
            return Err(Error::Config(format!("scale {s} overflows M or n")));
        };
        configs.push(ScenarioConfig { m, n, ..base.clone() });
    }
    let resolved = configs.iter().map(ScenarioConfig::validate).collect::<Result<Vec<_>>>()?;
    for pair in configs.windows(2).zip(resolved.windows(2)) {
        let ([a, b], [ea, eb]) = pair else { unreachable!() };
        for (x, y) in ea.iter().zip(eb) {
            check_direction(&x.method, &y.method, (a.m, a.n), (b.m, b.n))
                .map_err(|msg| Error::Config(format!("{} from M = {} to M = {}: {msg}", x.label, a.m, b.m)))?;
        }
    }
    Ok(configs)
}

fn check_direction(
    from: &Method,
    to: &Method,
    (m0, n0): (usize, u64),
    (m1, n1): (usize, u64),
) -> std::result::Result<(), String> {
    let (m0, n0, m1, n1) = (m0 as u128, n0 as u128, m1 as u128, n1 as u128);
    match (from, to) {
        (Method::Grouped(a), Method::Grouped(b)) => {
            let (g0, g1) = (a.group_count() as u128, b.group_count() as u128);
            if g1 * n0 >= g0 * n1 {
                return Err(format!("group count over n does not decrease ({g0}/{n0} -> {g1}/{n1})"));
            }
            let (s0, s1) = (a.max_size() as u128, b.max_size() as u128);
            if s1 * m0 > s0 * m1 {
                return Err(format!("largest group fraction grows ({s0}/{m0} -> {s1}/{m1})"));
            }
            Ok(())
        }
        (Method::Kernel(a), Method::Kernel(b)) => {
            let (k0, k1) = (a.bandwidth() as u128, b.bandwidth() as u128);
            if k1 <= k0 {
                return Err(format!("bandwidth does not grow ({k0} -> {k1})"));
            }
            if m1 * n0 * k0 >= m0 * n1 * k1 {
                return Err("M/(nk) does not decrease".into());
            }
            if k1 * m0 > k0 * m1 {
                return Err(format!("k/M grows ({k0}/{m0} -> {k1}/{m1})"));
            }
            Ok(())
        }
        _ => Ok(()),
    }
}
