//! CSV output of scenario results and the matching readers.
//!
//! Floats are written in their shortest round-trip form, switching to
//! exponent notation outside `[1e-5, 1e16)`, so re-reading a file recovers
//! every value bit-for-bit.

use std::path::{Path, PathBuf};

use super::scenario::{ReplicateRecord, ScenarioResult};
use super::sweep::SweepRow;
use crate::error::{Error, Result};

pub const REPLICATES_FILE: &str = "replicates.csv";
pub const SDF_KNOTS_FILE: &str = "sdf_knots.csv";
pub const DENSITY_KNOTS_FILE: &str = "density_knots.csv";
pub const SWEEP_FILE: &str = "sweep.csv";
pub const GRID_FILE: &str = "grid.csv";
pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";

/// Shortest decimal string that parses back to exactly `x`.
pub fn format_float(x: f64) -> String {
    let magnitude = x.abs();
    if x.is_finite() && x != 0.0 && !(1e-5..1e16).contains(&magnitude) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn format_opt(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

struct Table {
    path: PathBuf,
    writer: csv::Writer<std::fs::File>,
}

impl Table {
    fn create(dir: &Path, name: &str, header: &[&str]) -> Result<Table> {
        let path = dir.join(name);
        let mut writer = csv::Writer::from_path(&path).map_err(|e| Error::csv(&path, e))?;
        writer.write_record(header).map_err(|e| Error::csv(&path, e))?;
        Ok(Table { path, writer })
    }

    fn row<I, S>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).map_err(|e| Error::csv(&self.path, e))
    }

    fn finish(mut self) -> Result<PathBuf> {
        self.writer.flush().map_err(|e| Error::io(&self.path, e))?;
        Ok(self.path)
    }
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Writes the CSV files of `result` into `dir` and returns their paths.
/// `grid.csv` and `diagnostics.csv` are only written when there is something
/// to put in them.
pub fn emit_csv(result: &ScenarioResult, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    ensure_dir(dir)?;
    let mut written = Vec::new();

    let mut t = Table::create(
        dir,
        REPLICATES_FILE,
        &["replicate", "estimator", "l1_to_FM", "l1_to_F", "sup_to_F", "second_moment"],
    )?;
    for r in &result.records {
        t.row([
            r.replicate.to_string(),
            r.estimator.clone(),
            format_float(r.l1_to_fm),
            format_opt(r.l1_to_f),
            format_opt(r.sup_to_f),
            format_float(r.second_moment),
        ])?;
    }
    written.push(t.finish()?);

    let mut t = Table::create(dir, SDF_KNOTS_FILE, &["estimator", "knot", "level"])?;
    for dump in &result.dumps {
        for (knot, level) in dump.cdf.knots().iter().zip(dump.cdf.levels()) {
            t.row([dump.label.as_str(), &format_float(*knot), &format_float(*level)])?;
        }
    }
    written.push(t.finish()?);

    let mut t = Table::create(dir, DENSITY_KNOTS_FILE, &["estimator", "break_lo", "break_hi", "height"])?;
    for dump in &result.dumps {
        for (lo, hi, height) in dump.density.intervals() {
            t.row([dump.label.as_str(), &format_float(lo), &format_float(hi), &format_float(height)])?;
        }
    }
    written.push(t.finish()?);

    written.push(write_sweep(&super::sweep::SweepRow::from_result(result, 1), dir)?);

    if !result.grid.is_empty() {
        let mut t = Table::create(dir, GRID_FILE, &["estimator", "x", "monte_carlo_mean", "stderr", "exact_value"])?;
        for g in &result.grid {
            t.row([
                g.estimator.clone(),
                format_float(g.x),
                format_float(g.mean),
                format_float(g.stderr),
                format_opt(g.exact),
            ])?;
        }
        written.push(t.finish()?);
    }

    if !result.diagnostics.is_empty() {
        let mut t = Table::create(
            dir,
            DIAGNOSTICS_FILE,
            &["check", "x_or_label", "monte_carlo_value", "exact_value", "stderr"],
        )?;
        for d in &result.diagnostics {
            t.row([
                d.check.clone(),
                d.label.clone(),
                format_float(d.monte_carlo),
                format_opt(d.exact),
                format_opt(d.stderr),
            ])?;
        }
        written.push(t.finish()?);
    }
    Ok(written)
}

/// Writes `sweep.csv` into `dir`.
pub fn emit_sweep_csv(rows: &[SweepRow], dir: impl AsRef<Path>) -> Result<PathBuf> {
    let dir = dir.as_ref();
    ensure_dir(dir)?;
    write_sweep(rows, dir)
}

fn write_sweep(rows: &[SweepRow], dir: &Path) -> Result<PathBuf> {
    let mut t = Table::create(
        dir,
        SWEEP_FILE,
        &["scale", "M", "n", "estimator", "median_l1", "mean_l1", "stderr_l1"],
    )?;
    for r in rows {
        t.row([
            r.scale.to_string(),
            r.m.to_string(),
            r.n.to_string(),
            r.estimator.clone(),
            format_float(r.median_l1),
            format_float(r.mean_l1),
            format_float(r.stderr_l1),
        ])?;
    }
    t.finish()
}

fn read_rows(path: &Path) -> Result<Vec<csv::StringRecord>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    reader.records().map(|r| r.map_err(|e| Error::csv(path, e))).collect()
}

fn field<T: std::str::FromStr>(path: &Path, record: &csv::StringRecord, idx: usize) -> Result<T> {
    record
        .get(idx)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Config(format!("{}: bad field {idx} in row {record:?}", path.display())))
}

fn opt_field(path: &Path, record: &csv::StringRecord, idx: usize) -> Result<Option<f64>> {
    match record.get(idx) {
        Some("") => Ok(None),
        _ => field(path, record, idx).map(Some),
    }
}

/// Parses a `replicates.csv` file.
pub fn read_replicates(path: impl AsRef<Path>) -> Result<Vec<ReplicateRecord>> {
    let path = path.as_ref();
    read_rows(path)?
        .iter()
        .map(|rec| {
            Ok(ReplicateRecord {
                replicate: field(path, rec, 0)?,
                estimator: field(path, rec, 1)?,
                l1_to_fm: field(path, rec, 2)?,
                l1_to_f: opt_field(path, rec, 3)?,
                sup_to_f: opt_field(path, rec, 4)?,
                second_moment: field(path, rec, 5)?,
            })
        })
        .collect()
}

/// Parses a `sweep.csv` file.
pub fn read_sweep(path: impl AsRef<Path>) -> Result<Vec<SweepRow>> {
    let path = path.as_ref();
    read_rows(path)?
        .iter()
        .map(|rec| {
            Ok(SweepRow {
                scale: field(path, rec, 0)?,
                m: field(path, rec, 1)?,
                n: field(path, rec, 2)?,
                estimator: field(path, rec, 3)?,
                median_l1: field(path, rec, 4)?,
                mean_l1: field(path, rec, 5)?,
                stderr_l1: field(path, rec, 6)?,
            })
        })
        .collect()
}
