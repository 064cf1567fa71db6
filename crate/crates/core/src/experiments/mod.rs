//! Monte Carlo experiments: scenarios, consistency sweeps, inconsistency
//! diagnostics and CSV output.

pub mod config;
pub mod csv_io;
pub mod diagnostics;
pub mod reference;
pub mod scenario;
pub mod sweep;

pub use config::{ConfigDocument, Estimator, EstimatorSpec, Method, ParentSpec, ScenarioConfig, SizeRule};
pub use csv_io::{emit_csv, emit_sweep_csv, format_float, read_replicates, read_sweep};
pub use diagnostics::{inconsistency_diagnostics, DiagnosticRow};
pub use reference::{limit_f_eval, limit_g_eval, quintic_cdf, LimitCurve, Parent, TabulatedCdf};
pub use scenario::{run_scenario, EstimatorSummary, GridRecord, ReplicateRecord, ScenarioResult, StepDump, Summary};
pub use sweep::{consistency_sweep, SweepRow};
