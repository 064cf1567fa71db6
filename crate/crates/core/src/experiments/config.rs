//! Experiment configuration: the JSON document read by the CLI and the
//! validated [`ScenarioConfig`] the runners consume.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::reference::{Parent, TabulatedCdf};
use crate::error::{Error, Result};
use crate::grouping::GroupingScheme;
use crate::kernel::{Kernel, KernelSpec};

/// Current version of the configuration schema.
pub const SCHEMA_VERSION: u32 = 1;

/// How a group size or bandwidth is chosen from the cell count `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RuleRepr", into = "RuleRepr")]
pub enum SizeRule {
    /// A fixed integer.
    Fixed(usize),
    /// `ceil(sqrt(M))`, written `"sqrt"`.
    Sqrt,
    /// `ceil(M / d)`, written `"M/d"`.
    Fraction(usize),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RuleRepr {
    Fixed(usize),
    Text(String),
}

impl TryFrom<RuleRepr> for SizeRule {
    type Error = String;

    fn try_from(repr: RuleRepr) -> std::result::Result<Self, String> {
        match repr {
            RuleRepr::Fixed(0) => Err("size must be at least 1".into()),
            RuleRepr::Fixed(k) => Ok(SizeRule::Fixed(k)),
            RuleRepr::Text(text) => text.parse(),
        }
    }
}

impl From<SizeRule> for RuleRepr {
    fn from(rule: SizeRule) -> Self {
        match rule {
            SizeRule::Fixed(k) => RuleRepr::Fixed(k),
            other => RuleRepr::Text(other.to_string()),
        }
    }
}

impl std::str::FromStr for SizeRule {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if s == "sqrt" {
            return Ok(SizeRule::Sqrt);
        }
        if let Some(d) = s.strip_prefix("M/") {
            return match d.parse::<usize>() {
                Ok(d) if d > 0 => Ok(SizeRule::Fraction(d)),
                _ => Err(format!("bad divisor in size rule {s:?}")),
            };
        }
        match s.parse::<usize>() {
            Ok(k) if k > 0 => Ok(SizeRule::Fixed(k)),
            _ => Err(format!("size rule must be a positive integer, \"sqrt\" or \"M/<d>\", got {s:?}")),
        }
    }
}

impl fmt::Display for SizeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SizeRule::Fixed(k) => write!(f, "{k}"),
            SizeRule::Sqrt => f.write_str("sqrt"),
            SizeRule::Fraction(d) => write!(f, "M/{d}"),
        }
    }
}

impl SizeRule {
    pub fn resolve(self, m: usize) -> usize {
        match self {
            SizeRule::Fixed(k) => k,
            SizeRule::Sqrt => {
                let mut k = (m as f64).sqrt().ceil() as usize;
                while k > 1 && (k - 1) * (k - 1) >= m {
                    k -= 1;
                }
                while k * k < m {
                    k += 1;
                }
                k.max(1)
            }
            SizeRule::Fraction(d) => m.div_ceil(d).max(1),
        }
    }

    fn label(self) -> String {
        match self {
            SizeRule::Sqrt => "sqrtM".into(),
            other => other.to_string(),
        }
    }
}

/// One estimator in an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", try_from = "RawEstimator")]
pub enum EstimatorSpec {
    Natural,
    /// Grouped cells, either of a common `size` or with explicit `breaks`.
    Grouped {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        size: Option<SizeRule>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        breaks: Option<Vec<usize>>,
    },
    Kernel { kernel: Kernel, bandwidth: SizeRule },
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase")]
enum EstimatorKind {
    Natural,
    Grouped,
    Kernel,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEstimator {
    #[serde(rename = "type")]
    kind: EstimatorKind,
    size: Option<SizeRule>,
    breaks: Option<Vec<usize>>,
    kernel: Option<Kernel>,
    bandwidth: Option<SizeRule>,
}

impl TryFrom<RawEstimator> for EstimatorSpec {
    type Error = String;

    fn try_from(raw: RawEstimator) -> std::result::Result<Self, String> {
        let RawEstimator { kind, size, breaks, kernel, bandwidth } = raw;
        let present = |name: &'static str, set: bool| set.then_some(name);
        match kind {
            EstimatorKind::Natural => {
                let extra = [
                    present("size", size.is_some()),
                    present("breaks", breaks.is_some()),
                    present("kernel", kernel.is_some()),
                    present("bandwidth", bandwidth.is_some()),
                ];
                match extra.into_iter().flatten().next() {
                    Some(key) => Err(format!("the natural estimator takes no `{key}`")),
                    None => Ok(EstimatorSpec::Natural),
                }
            }
            EstimatorKind::Grouped => {
                if let Some(key) = present("kernel", kernel.is_some()).or(present("bandwidth", bandwidth.is_some())) {
                    return Err(format!("a grouped estimator takes no `{key}`"));
                }
                Ok(EstimatorSpec::Grouped { size, breaks })
            }
            EstimatorKind::Kernel => {
                if let Some(key) = present("size", size.is_some()).or(present("breaks", breaks.is_some())) {
                    return Err(format!("a kernel estimator takes no `{key}`"));
                }
                match (kernel, bandwidth) {
                    (Some(kernel), Some(bandwidth)) => Ok(EstimatorSpec::Kernel { kernel, bandwidth }),
                    _ => Err("a kernel estimator needs `kernel` and `bandwidth`".into()),
                }
            }
        }
    }
}

impl EstimatorSpec {
    /// Stable name used in output files; independent of `M`.
    pub fn label(&self) -> String {
        match self {
            EstimatorSpec::Natural => "natural".into(),
            EstimatorSpec::Grouped { size: Some(rule), .. } => format!("grouped_k={}", rule.label()),
            EstimatorSpec::Grouped { .. } => "grouped_breaks".into(),
            EstimatorSpec::Kernel { kernel, bandwidth } => format!("kernel_{kernel}_k={}", bandwidth.label()),
        }
    }

    /// Fixes the group sizes or bandwidth for `m` cells.
    pub fn resolve(&self, m: usize) -> Result<Estimator> {
        let label = self.label();
        let method = match self {
            EstimatorSpec::Natural => Method::Natural,
            EstimatorSpec::Grouped { size, breaks } => {
                let scheme = match (size, breaks) {
                    (Some(rule), None) => {
                        let k = rule.resolve(m);
                        if k > m {
                            return Err(Error::Config(format!("{label}: group size {k} exceeds M = {m}")));
                        }
                        GroupingScheme::equal_size(m, k)
                    }
                    (None, Some(breaks)) => GroupingScheme::new(breaks.clone()).and_then(|s| {
                        s.check_cells(m)?;
                        Ok(s)
                    }),
                    _ => {
                        return Err(Error::Config(
                            "a grouped estimator needs exactly one of `size` or `breaks`".into(),
                        ))
                    }
                }
                .map_err(|e| Error::Config(format!("{label}: {e}")))?;
                Method::Grouped(scheme)
            }
            EstimatorSpec::Kernel { kernel, bandwidth } => {
                let spec = KernelSpec::new(*kernel, bandwidth.resolve(m))
                    .map_err(|e| Error::Config(format!("{label}: {e}")))?;
                Method::Kernel(spec)
            }
        };
        Ok(Estimator { label, method })
    }
}

/// An estimator with its smoothing parameters fixed for a given `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimator {
    pub label: String,
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    Natural,
    Grouped(GroupingScheme),
    Kernel(KernelSpec),
}

/// Parent distribution as written in a config file.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum ParentSpec {
    #[default]
    PaperQuintic,
    Uniform,
    /// CSV file with header `x,G`, relative paths resolved against the config
    /// file's directory.
    Tabulated(PathBuf),
}

impl ParentSpec {
    pub fn load(&self, base_dir: Option<&Path>) -> Result<Parent> {
        Ok(match self {
            ParentSpec::PaperQuintic => Parent::PaperQuintic,
            ParentSpec::Uniform => Parent::Uniform,
            ParentSpec::Tabulated(path) => {
                let path = match base_dir {
                    Some(dir) if path.is_relative() => dir.join(path),
                    _ => path.clone(),
                };
                Parent::Tabulated(TabulatedCdf::from_csv(path)?)
            }
        })
    }
}

/// Validated inputs of one Monte Carlo scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    /// Cell count `M`.
    pub m: usize,
    /// Sample size `n`.
    pub n: u64,
    pub parent: Parent,
    pub estimators: Vec<EstimatorSpec>,
    pub replicates: usize,
    pub seed: u64,
    pub eval_grid: Vec<f64>,
    /// Run the Poissonization diagnostics alongside the estimators.
    pub diagnostics: bool,
    /// Replicate whose step functions are dumped for plotting.
    pub dump_replicate: usize,
}

impl ScenarioConfig {
    /// Scenario with the natural estimator only and no extras.
    pub fn new(m: usize, n: u64, parent: Parent) -> Self {
        ScenarioConfig {
            m,
            n,
            parent,
            estimators: vec![EstimatorSpec::Natural],
            replicates: 1,
            seed: 0,
            eval_grid: Vec::new(),
            diagnostics: false,
            dump_replicate: 0,
        }
    }

    /// Checks the config and resolves estimators for its own `M`. Fails
    /// before any sampling happens.
    pub fn validate(&self) -> Result<Vec<Estimator>> {
        if self.m == 0 {
            return Err(Error::Config("M must be at least 1".into()));
        }
        if self.n == 0 {
            return Err(Error::Config("n must be at least 1".into()));
        }
        if self.replicates == 0 || self.replicates > u32::MAX as usize {
            return Err(Error::Config(format!("replicates must be in 1..={}", u32::MAX)));
        }
        if self.dump_replicate >= self.replicates {
            return Err(Error::Config(format!(
                "dump_replicate {} is out of range for {} replicates",
                self.dump_replicate, self.replicates
            )));
        }
        if let Some(x) = self.eval_grid.iter().find(|x| !x.is_finite()) {
            return Err(Error::Config(format!("eval_grid contains non-finite value {x}")));
        }
        if self.estimators.is_empty() {
            return Err(Error::Config("at least one estimator is required".into()));
        }
        let resolved = self
            .estimators
            .iter()
            .map(|e| e.resolve(self.m))
            .collect::<Result<Vec<_>>>()?;
        for (i, e) in resolved.iter().enumerate() {
            if resolved[..i].iter().any(|other| other.label == e.label) {
                return Err(Error::Config(format!("estimator {} is listed twice", e.label)));
            }
        }
        Ok(resolved)
    }
}

fn default_estimators() -> Vec<EstimatorSpec> {
    vec![EstimatorSpec::Natural]
}

fn default_replicates() -> usize {
    1
}

fn default_scales() -> Vec<u32> {
    vec![1]
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

/// The JSON configuration document shared by the `simulate` and `sweep`
/// subcommands. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub schema_version: u32,
    #[serde(rename = "M")]
    pub m: usize,
    pub n: u64,
    #[serde(default)]
    pub parent: ParentSpec,
    #[serde(default = "default_estimators")]
    pub estimators: Vec<EstimatorSpec>,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub eval_grid: Vec<f64>,
    #[serde(default)]
    pub diagnostics: bool,
    #[serde(default)]
    pub dump_replicate: usize,
    /// Multipliers applied to `M` and `n` by `sweep`; ignored by `simulate`.
    #[serde(default = "default_scales")]
    pub scales: Vec<u32>,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    #[serde(default)]
    pub quiet: bool,
    /// Directory of the file this document came from; used to resolve
    /// relative paths.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

impl ConfigDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ConfigDocument = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                doc.schema_version
            )));
        }
        Ok(doc)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut doc = Self::from_json(&text)
            .map_err(|e| Error::Config(format!("{}: {}", path.display(), strip_prefix(&e))))?;
        doc.base_dir = path.parent().map(Path::to_path_buf);
        Ok(doc)
    }

    /// The scenario described by this document, with its parent loaded.
    pub fn scenario(&self) -> Result<ScenarioConfig> {
        Ok(ScenarioConfig {
            m: self.m,
            n: self.n,
            parent: self.parent.load(self.base_dir.as_deref())?,
            estimators: self.estimators.clone(),
            replicates: self.replicates,
            seed: self.seed,
            eval_grid: self.eval_grid.clone(),
            diagnostics: self.diagnostics,
            dump_replicate: self.dump_replicate,
        })
    }

    /// The defaults applied to every optional key, as a JSON document.
    pub fn defaults_json() -> String {
        let doc = ConfigDocument {
            schema_version: SCHEMA_VERSION,
            m: 1000,
            n: 2000,
            parent: ParentSpec::default(),
            estimators: default_estimators(),
            replicates: default_replicates(),
            seed: 0,
            eval_grid: Vec::new(),
            diagnostics: false,
            dump_replicate: 0,
            scales: default_scales(),
            out_dir: default_out_dir(),
            quiet: false,
            base_dir: None,
        };
        serde_json::to_string_pretty(&doc).expect("config serializes")
    }
}

fn strip_prefix(e: &Error) -> String {
    match e {
        Error::Config(msg) => msg.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_rules() {
        assert_eq!(SizeRule::Sqrt.resolve(250), 16);
        assert_eq!(SizeRule::Sqrt.resolve(256), 16);
        assert_eq!(SizeRule::Sqrt.resolve(257), 17);
        assert_eq!(SizeRule::Sqrt.resolve(1), 1);
        assert_eq!(SizeRule::Fraction(20).resolve(250), 13);
        assert_eq!(SizeRule::Fraction(20).resolve(1000), 50);
        assert_eq!(SizeRule::Fraction(20).resolve(3), 1);
        assert_eq!(SizeRule::Fixed(7).resolve(3), 7);
        assert_eq!("M/20".parse::<SizeRule>(), Ok(SizeRule::Fraction(20)));
        assert!("M/0".parse::<SizeRule>().is_err());
        assert!("cube".parse::<SizeRule>().is_err());
    }

    #[test]
    fn parses_full_document() {
        let doc = ConfigDocument::from_json(
            r#"{
                "schema_version": 1, "M": 1000, "n": 2000,
                "parent": "paper-quintic",
                "estimators": [
                    {"type": "natural"},
                    {"type": "grouped", "size": 50},
                    {"type": "grouped", "size": "sqrt"},
                    {"type": "grouped", "breaks": [0, 500, 1000]},
                    {"type": "kernel", "kernel": "box", "bandwidth": "M/20"}
                ],
                "replicates": 20, "seed": 7, "eval_grid": [0.5, 1.0],
                "scales": [1, 4], "out_dir": "results", "quiet": true
            }"#,
        )
        .unwrap();
        assert_eq!(doc.m, 1000);
        let labels: Vec<String> = doc.estimators.iter().map(|e| e.label()).collect();
        assert_eq!(
            labels,
            ["natural", "grouped_k=50", "grouped_k=sqrtM", "grouped_breaks", "kernel_box_k=M/20"]
        );
        let resolved = doc.scenario().unwrap().validate().unwrap();
        assert_eq!(resolved[4].method, Method::Kernel(KernelSpec::new(Kernel::Box, 50).unwrap()));
    }

    #[test]
    fn rejects_unknown_keys() {
        let top = r#"{"schema_version": 1, "M": 10, "n": 20, "replicate": 3}"#;
        assert!(ConfigDocument::from_json(top).is_err());
        let nested = r#"{"schema_version": 1, "M": 10, "n": 20,
            "estimators": [{"type": "kernel", "kernel": "box", "bandwith": 3}]}"#;
        assert!(ConfigDocument::from_json(nested).is_err());
        let extra = r#"{"schema_version": 1, "M": 10, "n": 20,
            "estimators": [{"type": "natural", "size": 3}]}"#;
        assert!(ConfigDocument::from_json(extra).is_err());
    }

    #[test]
    fn rejects_wrong_schema_version() {
        let err = ConfigDocument::from_json(r#"{"schema_version": 2, "M": 10, "n": 20}"#).unwrap_err();
        assert!(err.to_string().contains("schema_version"));
    }

    #[test]
    fn json_errors_carry_position() {
        let err = ConfigDocument::from_json("{\n  \"schema_version\": 1,\n  \"M\": \"ten\"\n}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn defaults_round_trip() {
        let doc = ConfigDocument::from_json(&ConfigDocument::defaults_json()).unwrap();
        let minimal = ConfigDocument::from_json(r#"{"schema_version": 1, "M": 1000, "n": 2000}"#).unwrap();
        assert_eq!(doc, minimal);
    }

    #[test]
    fn validation_errors() {
        let base = ScenarioConfig::new(10, 20, Parent::Uniform);
        assert!(base.validate().is_ok());

        let mut cfg = base.clone();
        cfg.replicates = 0;
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));

        let mut cfg = base.clone();
        cfg.estimators = vec![EstimatorSpec::Grouped { size: None, breaks: Some(vec![0, 5, 9]) }];
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));

        let mut cfg = base.clone();
        cfg.estimators = vec![EstimatorSpec::Grouped { size: Some(SizeRule::Fixed(11)), breaks: None }];
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));

        let mut cfg = base.clone();
        cfg.estimators = vec![EstimatorSpec::Grouped { size: None, breaks: None }];
        assert!(cfg.validate().is_err());

        let mut cfg = base.clone();
        cfg.estimators = vec![EstimatorSpec::Natural, EstimatorSpec::Natural];
        assert!(cfg.validate().is_err());

        let mut cfg = base.clone();
        cfg.dump_replicate = 1;
        assert!(cfg.validate().is_err());

        let mut cfg = base;
        cfg.m = 0;
        assert!(cfg.validate().is_err());
    }
}
