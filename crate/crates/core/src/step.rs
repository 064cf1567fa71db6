//! Right-continuous step distribution functions and piecewise-constant
//! densities on `(0, 1]`.

use crate::error::{Error, Result};
use crate::summation::compensated_sum;

/// A right-continuous step distribution function.
///
/// Stored as strictly increasing jump locations (`knots`) together with the
/// value of the function at and to the right of each knot (`levels`). Levels
/// are strictly increasing and the final level is exactly 1. The function is
/// 0 to the left of the first knot.
#[derive(Debug, Clone, PartialEq)]
pub struct StepCdf {
    knots: Vec<f64>,
    levels: Vec<f64>,
}

impl StepCdf {
    /// Builds the distribution placing mass `weight / total_weight` on each
    /// value. Equal values are merged. Zero weights are dropped.
    ///
    /// Masses are kept as integer weights until the final division so that
    /// different routes to the same distribution produce bit-identical levels.
    pub fn from_weighted_values<I>(values: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, u64)>,
    {
        let mut points: Vec<(f64, u64)> = Vec::new();
        for (value, weight) in values {
            if !value.is_finite() {
                return Err(Error::InvalidArgument(format!("non-finite jump location {value}")));
            }
            if weight > 0 {
                // fold -0.0 into +0.0 so sorting and merging agree
                points.push((value + 0.0, weight));
            }
        }
        if points.is_empty() {
            return Err(Error::InvalidArgument("a step CDF needs positive total mass".into()));
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));

        let total: u64 = points.iter().map(|p| p.1).sum();
        let mut knots = Vec::with_capacity(points.len());
        let mut cumulative = Vec::with_capacity(points.len());
        let mut running = 0u64;
        for (value, weight) in points {
            running += weight;
            if knots.last() == Some(&value) {
                *cumulative.last_mut().unwrap() = running;
            } else {
                knots.push(value);
                cumulative.push(running);
            }
        }
        let levels = cumulative.into_iter().map(|c| c as f64 / total as f64).collect();
        Ok(StepCdf { knots, levels })
    }

    /// Empirical distribution function of `values`, each with mass `1/len`.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        Self::from_weighted_values(values.iter().map(|&v| (v, 1)))
    }

    /// Distribution function of the point mass at `at`, i.e. `1[at <= x]`.
    pub fn point_mass(at: f64) -> Result<Self> {
        Self::from_weighted_values([(at, 1)])
    }

    /// Rebuilds a step CDF from explicit knots and levels, validating every
    /// invariant.
    pub fn from_parts(knots: Vec<f64>, levels: Vec<f64>) -> Result<Self> {
        if knots.is_empty() || knots.len() != levels.len() {
            return Err(Error::InvalidArgument(format!(
                "need matching nonempty knots and levels, got {} and {}",
                knots.len(),
                levels.len()
            )));
        }
        if knots.iter().any(|k| !k.is_finite()) {
            return Err(Error::InvalidArgument("knots must be finite".into()));
        }
        if knots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("knots must be strictly increasing".into()));
        }
        if levels[0] <= 0.0 || levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("levels must be positive and strictly increasing".into()));
        }
        if *levels.last().unwrap() != 1.0 {
            return Err(Error::InvalidArgument("final level must be exactly 1".into()));
        }
        Ok(StepCdf { knots, levels })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// Number of jumps.
    pub fn len(&self) -> usize {
        self.knots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.knots.is_empty()
    }

    /// `F(x)`: level of the largest knot `<= x`, or 0 before the first knot.
    pub fn eval(&self, x: f64) -> f64 {
        let idx = self.knots.partition_point(|&k| k <= x);
        if idx == 0 {
            0.0
        } else {
            self.levels[idx - 1]
        }
    }

    /// `F(x-)`: limit from the left.
    pub fn left_limit(&self, x: f64) -> f64 {
        let idx = self.knots.partition_point(|&k| k < x);
        if idx == 0 {
            0.0
        } else {
            self.levels[idx - 1]
        }
    }

    /// `(knot, jump size)` pairs.
    pub fn jumps(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.knots.iter().zip(&self.levels).scan(0.0, |prev, (&k, &level)| {
            let mass = level - *prev;
            *prev = level;
            Some((k, mass))
        })
    }
}

/// A piecewise-constant density on `(0, 1]` whose breakpoints lie on the
/// lattice `{0, 1/R, 2/R, ..., 1}`.
///
/// Interval `j` is the left-open interval `(breaks[j-1]/R, breaks[j]/R]`.
/// Breakpoints are stored as lattice indices so interval widths are exact
/// integers over `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepDensity {
    resolution: usize,
    breaks: Vec<usize>,
    heights: Vec<f64>,
}

impl StepDensity {
    pub fn new(breaks: Vec<usize>, resolution: usize, heights: Vec<f64>) -> Result<Self> {
        if resolution == 0 {
            return Err(Error::InvalidArgument("lattice resolution must be positive".into()));
        }
        if breaks.len() < 2 || breaks[0] != 0 || *breaks.last().unwrap() != resolution {
            return Err(Error::InvalidArgument(format!(
                "breaks must run from 0 to the resolution {resolution}"
            )));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("breaks must be strictly increasing".into()));
        }
        if heights.len() + 1 != breaks.len() {
            return Err(Error::InvalidArgument(format!(
                "{} intervals but {} heights",
                breaks.len() - 1,
                heights.len()
            )));
        }
        if heights.iter().any(|h| !h.is_finite() || *h < 0.0) {
            return Err(Error::InvalidArgument("heights must be finite and nonnegative".into()));
        }
        Ok(StepDensity { resolution, breaks, heights })
    }

    /// Density with one height per cell of the regular grid `((j-1)/M, j/M]`.
    pub fn on_cell_grid(heights: Vec<f64>) -> Result<Self> {
        let m = heights.len();
        Self::new((0..=m).collect(), m, heights)
    }

    /// Lattice resolution `R`.
    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Breakpoints as lattice indices.
    pub fn lattice_breaks(&self) -> &[usize] {
        &self.breaks
    }

    /// Breakpoints in `[0, 1]`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let r = self.resolution as f64;
        self.breaks.iter().map(|&b| b as f64 / r).collect()
    }

    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    /// Interval widths as lattice counts.
    pub fn lattice_widths(&self) -> impl Iterator<Item = usize> + '_ {
        self.breaks.windows(2).map(|w| w[1] - w[0])
    }

    /// `(lo, hi, height)` for each interval `(lo, hi]`.
    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let r = self.resolution as f64;
        self.breaks
            .windows(2)
            .zip(&self.heights)
            .map(move |(w, &h)| (w[0] as f64 / r, w[1] as f64 / r, h))
    }

    /// Value at `u`; zero outside `(0, 1]`.
    pub fn eval(&self, u: f64) -> f64 {
        if !(u > 0.0 && u <= 1.0) {
            return 0.0;
        }
        let r = self.resolution as f64;
        // first interval whose right end is >= u
        let idx = self.breaks[1..].partition_point(|&b| (b as f64 / r) < u);
        self.heights[idx.min(self.heights.len() - 1)]
    }

    /// Total mass `sum(height * width)`.
    pub fn integral(&self) -> f64 {
        let r = self.resolution as f64;
        compensated_sum(self.lattice_widths().zip(&self.heights).map(|(w, &h)| h * w as f64 / r))
    }
}
