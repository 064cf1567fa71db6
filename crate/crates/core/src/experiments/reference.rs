//! Closed-form parent distributions and limit curves, and distances from a
//! step CDF to a continuous limit.

use std::path::{Path, PathBuf};

use crate::cells::{make_cell_probs_from_cdf, CellProbabilities};
use crate::distance::{l1_distance, sup_distance};
use crate::error::{Error, Result};
use crate::step::StepCdf;

/// Right end of the support of the quintic limit SDF, `max g = g(1/2) = 15/8`.
pub const QUINTIC_SUPPORT_END: f64 = 15.0 / 8.0;

/// `G(u) = 10u^3 - 15u^4 + 6u^5` clamped to `[0, 1]`.
pub fn quintic_cdf(u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    u * u * u * (10.0 + u * (-15.0 + 6.0 * u))
}

/// Limit parent density `g(u) = 30 u^2 (1 - u)^2` on `[0, 1]`, zero outside.
pub fn limit_g_eval(u: f64) -> f64 {
    if !(0.0..=1.0).contains(&u) {
        return 0.0;
    }
    let v = u * (1.0 - u);
    30.0 * v * v
}

/// Limit SDF `F(x) = 1 - sqrt(1 - sqrt(8x/15))` on `[0, 15/8]`; 0 below and 1
/// above.
pub fn limit_f_eval(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 {
        return 0.0;
    }
    if x >= QUINTIC_SUPPORT_END {
        return 1.0;
    }
    let s = (8.0 * x / 15.0).sqrt();
    1.0 - (1.0 - s).sqrt()
}

/// Inverse of [`limit_f_eval`] on `[0, 1]`: `x = (15/8) (1 - (1 - c)^2)^2`.
fn limit_f_quantile(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    let t = 1.0 - (1.0 - c) * (1.0 - c);
    QUINTIC_SUPPORT_END * t * t
}

/// `∫_{-inf}^x F`.
fn limit_f_antiderivative(x: f64) -> f64 {
    // with s = sqrt(8x/15): d/ds [s^2/2 + (2/3)(1-s)^(3/2) - (2/5)(1-s)^(5/2)] = s (1 - sqrt(1-s))
    let primitive = |s: f64| {
        let r = 1.0 - s;
        3.75 * (0.5 * s * s + (2.0 / 3.0) * r * r.sqrt() - 0.4 * r * r * r.sqrt())
    };
    let origin = primitive(0.0);
    if x <= 0.0 {
        0.0
    } else if x >= QUINTIC_SUPPORT_END {
        primitive(1.0) - origin + (x - QUINTIC_SUPPORT_END)
    } else {
        primitive((8.0 * x / 15.0).sqrt()) - origin
    }
}

fn limit_f_integral(a: f64, b: f64) -> f64 {
    limit_f_antiderivative(b) - limit_f_antiderivative(a)
}

/// `∫ |f - F|` for the continuous quintic limit `F`.
///
/// `f` is constant on each gap between its knots and `F` is nondecreasing, so
/// on every gap the integrand changes sign at most once, at `F^{-1}(level)`.
pub fn l1_to_quintic_limit(f: &StepCdf) -> f64 {
    let mut points: Vec<f64> = f.knots().to_vec();
    points.push(0.0);
    points.push(QUINTIC_SUPPORT_END);
    points.sort_by(f64::total_cmp);
    points.dedup();

    let mut total = 0.0;
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        let level = f.eval(a);
        let cross = limit_f_quantile(level).clamp(a, b);
        total += level * (cross - a) - limit_f_integral(a, cross);
        total += limit_f_integral(cross, b) - level * (b - cross);
    }
    total
}

/// `sup_x |f(x) - F(x)|` for the continuous quintic limit `F`.
pub fn sup_to_quintic_limit(f: &StepCdf) -> f64 {
    f.knots()
        .iter()
        .map(|&t| {
            let target = limit_f_eval(t);
            (f.eval(t) - target).abs().max((f.left_limit(t) - target).abs())
        })
        .fold(0.0, f64::max)
}

/// Known weak limit of the structural distribution function.
#[derive(Debug, Clone, PartialEq)]
pub enum LimitCurve {
    /// The continuous limit of the quintic parent.
    Quintic,
    /// A step-function limit (e.g. the point mass at 1 for equal cells).
    Step(StepCdf),
}

impl LimitCurve {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            LimitCurve::Quintic => limit_f_eval(x),
            LimitCurve::Step(f) => f.eval(x),
        }
    }

    pub fn l1_distance(&self, f: &StepCdf) -> f64 {
        match self {
            LimitCurve::Quintic => l1_to_quintic_limit(f),
            LimitCurve::Step(g) => l1_distance(f, g),
        }
    }

    pub fn sup_distance(&self, f: &StepCdf) -> f64 {
        match self {
            LimitCurve::Quintic => sup_to_quintic_limit(f),
            LimitCurve::Step(g) => sup_distance(f, g),
        }
    }
}

/// A distribution function `G` tabulated at increasing points of `[0, 1]` and
/// interpolated linearly.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedCdf {
    source: PathBuf,
    xs: Vec<f64>,
    values: Vec<f64>,
}

impl TabulatedCdf {
    /// Reads a CSV with header `x,G` whose first row is `0,0` and last row `1,1`.
    pub fn from_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut reader = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
        let mut xs = Vec::new();
        let mut values = Vec::new();
        for (row, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::csv(path, e))?;
            let parse = |idx: usize| -> Result<f64> {
                record
                    .get(idx)
                    .and_then(|s| s.trim().parse::<f64>().ok())
                    .ok_or_else(|| Error::Config(format!("{}: row {} is not two numbers", path.display(), row + 2)))
            };
            xs.push(parse(0)?);
            values.push(parse(1)?);
        }
        Self::new(path.to_path_buf(), xs, values)
    }

    pub fn new(source: PathBuf, xs: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let err = |msg: &str| Error::Config(format!("{}: {msg}", source.display()));
        if xs.len() < 2 || xs.len() != values.len() {
            return Err(err("need at least two (x, G) rows"));
        }
        if xs[0] != 0.0 || *xs.last().unwrap() != 1.0 {
            return Err(err("x must run from 0 to 1"));
        }
        if xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(err("x must be strictly increasing"));
        }
        if values.iter().any(|v| !v.is_finite()) || values.windows(2).any(|w| w[0] > w[1]) {
            return Err(err("G must be finite and nondecreasing"));
        }
        Ok(TabulatedCdf { source, xs, values })
    }

    pub fn source(&self) -> &Path {
        &self.source
    }

    pub fn eval(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return self.values[0];
        }
        if u >= 1.0 {
            return *self.values.last().unwrap();
        }
        let idx = self.xs.partition_point(|&x| x <= u);
        let (x0, x1) = (self.xs[idx - 1], self.xs[idx]);
        let (g0, g1) = (self.values[idx - 1], self.values[idx]);
        g0 + (g1 - g0) * (u - x0) / (x1 - x0)
    }
}

/// Built-in or user-supplied parent distribution `G` of the cell
/// probabilities.
#[derive(Debug, Clone, PartialEq)]
pub enum Parent {
    PaperQuintic,
    Uniform,
    Tabulated(TabulatedCdf),
}

impl Parent {
    pub fn cell_probabilities(&self, m: usize) -> Result<CellProbabilities> {
        match self {
            Parent::PaperQuintic => make_cell_probs_from_cdf(quintic_cdf, m),
            Parent::Uniform => CellProbabilities::uniform(m),
            Parent::Tabulated(t) => make_cell_probs_from_cdf(|u| t.eval(u), m),
        }
    }

    /// The limit SDF when it is known in closed form.
    pub fn limit_curve(&self) -> Option<LimitCurve> {
        match self {
            Parent::PaperQuintic => Some(LimitCurve::Quintic),
            Parent::Uniform => Some(LimitCurve::Step(StepCdf::point_mass(1.0).expect("finite"))),
            Parent::Tabulated(_) => None,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Parent::PaperQuintic => "paper-quintic".into(),
            Parent::Uniform => "uniform".into(),
            Parent::Tabulated(t) => format!("tabulated:{}", t.source().display()),
        }
    }
}
