//! `sdf`: run structural distribution function experiments from JSON configs
//! and evaluate the closed-form reference curves.
//!
//! Exit codes: 0 on success, 1 on runtime or I/O failure, 2 on usage or
//! configuration errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sdf_core::experiments::{
    consistency_sweep, emit_csv, emit_sweep_csv, format_float, limit_f_eval, limit_g_eval, run_scenario,
    ConfigDocument, Parent, ScenarioConfig, SweepRow,
};
use sdf_core::sampling::{coupling_l1_bound, sample_coupled};
use sdf_core::{poisson_mixture_expectation, Error, SeededRng};

const CONFIG_HELP: &str = "\
Config keys and their defaults (see docs/config.md and defaults.json):
  schema_version  required, must be 1
  M, n            required positive integers
  parent          \"paper-quintic\" | \"uniform\" | {\"tabulated\": \"path.csv\"}   [paper-quintic]
  estimators      list of {\"type\": \"natural\"}, {\"type\": \"grouped\", \"size\"|\"breaks\": ..},
                  {\"type\": \"kernel\", \"kernel\": \"box\"|\"triangular\"|\"epanechnikov\", \"bandwidth\": ..}
                  [natural only]
  replicates      [1]        seed        [0]
  eval_grid       [[]]       diagnostics [false]
  dump_replicate  [0]        scales      [[1]] (sweep only)
  out_dir         [\"out\"]    quiet       [false]";

#[derive(Parser)]
#[command(name = "sdf", version, about = "Structural distribution function experiments", after_help = CONFIG_HELP)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// JSON experiment config.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory; overrides `out_dir` from the config.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Seed; overrides `seed` from the config.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Print nothing but errors.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its CSV files.
    Simulate,
    /// Run the scenario at every scale in `scales` and write sweep.csv.
    Sweep,
    /// Evaluate a reference curve or the Poisson-mixture expectation.
    Eval(EvalArgs),
    /// Draw coupled multinomial and Poisson samples and check the coupling
    /// invariants.
    CoupleCheck(CoupleArgs),
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    expression: Expression,
    /// Parent for --mixture: paper-quintic or uniform.
    #[arg(long, default_value = "paper-quintic", requires = "mixture")]
    parent: String,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Expression {
    /// Closed-form limit F(x) of the quintic parent.
    #[arg(long = "limit-F", value_name = "X", allow_negative_numbers = true)]
    limit_f: Option<String>,
    /// Closed-form parent density g(u) = 30 u^2 (1 - u)^2.
    #[arg(long = "limit-g", value_name = "U", allow_negative_numbers = true)]
    limit_g: Option<String>,
    /// Expectation of the Poissonized natural estimator at x.
    #[arg(long, num_args = 3, value_names = ["M", "N", "X"], allow_negative_numbers = true)]
    mixture: Option<Vec<String>>,
}

#[derive(Args)]
struct CoupleArgs {
    /// Number of cells.
    #[arg(long = "M", default_value_t = 1000)]
    m: usize,
    /// Sample size.
    #[arg(long = "n", default_value_t = 2000)]
    n: u64,
    /// Number of coupled draws.
    #[arg(long, default_value_t = 200)]
    draws: u32,
    /// Parent: paper-quintic or uniform.
    #[arg(long, default_value = "paper-quintic")]
    parent: String,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    /// Configuration-class errors exit 2, I/O and CSV errors exit 1.
    fn runtime(e: Error) -> Self {
        let code = match e {
            Error::Io { .. } | Error::Csv { .. } => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate => simulate(&cli.global),
        Command::Sweep => sweep(&cli.global),
        Command::Eval(args) => eval(args),
        Command::CoupleCheck(args) => couple_check(&cli.global, args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

struct Loaded {
    doc: ConfigDocument,
    scenario: ScenarioConfig,
    out_dir: PathBuf,
    quiet: bool,
}

/// Reads, overrides and validates the config. Every failure here, including
/// an unreadable file, is a configuration error.
fn load(global: &Global) -> Result<Loaded, Failure> {
    let path = global.config.as_deref().ok_or_else(|| Failure::usage("--config PATH is required"))?;
    let mut doc = ConfigDocument::from_path(path).map_err(|e| Failure::usage(e.to_string()))?;
    if let Some(seed) = global.seed {
        doc.seed = seed;
    }
    let scenario = doc.scenario().map_err(|e| Failure::usage(e.to_string()))?;
    scenario.validate().map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let out_dir = global.out.clone().unwrap_or_else(|| doc.out_dir.clone());
    let quiet = global.quiet || doc.quiet;
    Ok(Loaded { doc, scenario, out_dir, quiet })
}

fn simulate(global: &Global) -> Outcome {
    let loaded = load(global)?;
    let result = run_scenario(&loaded.scenario).map_err(Failure::runtime)?;
    let written = emit_csv(&result, &loaded.out_dir).map_err(Failure::runtime)?;
    if !loaded.quiet {
        print_table(&SweepRow::from_result(&result, 1), false);
        report_written(&written);
    }
    Ok(())
}

fn sweep(global: &Global) -> Outcome {
    let loaded = load(global)?;
    let rows = consistency_sweep(&loaded.scenario, &loaded.doc.scales).map_err(Failure::runtime)?;
    let written = emit_sweep_csv(&rows, &loaded.out_dir).map_err(Failure::runtime)?;
    if !loaded.quiet {
        print_table(&rows, true);
        report_written(&[written]);
    }
    Ok(())
}

fn print_table(rows: &[SweepRow], with_scale: bool) {
    let width = rows.iter().map(|r| r.estimator.len()).max().unwrap_or(0).max("estimator".len());
    if with_scale {
        print!("{:>5} {:>8} {:>9} ", "scale", "M", "n");
    }
    println!("{:<width$} {:>22} {:>22} {:>22}", "estimator", "median_l1", "mean_l1", "stderr_l1");
    for r in rows {
        if with_scale {
            print!("{:>5} {:>8} {:>9} ", r.scale, r.m, r.n);
        }
        println!(
            "{:<width$} {:>22} {:>22} {:>22}",
            r.estimator,
            format_float(r.median_l1),
            format_float(r.mean_l1),
            format_float(r.stderr_l1)
        );
    }
}

fn report_written(paths: &[PathBuf]) {
    for p in paths {
        eprintln!("wrote {}", p.display());
    }
}

fn parse_number<T: std::str::FromStr>(name: &str, text: &str) -> Result<T, Failure> {
    text.trim().parse().map_err(|_| Failure::usage(format!("invalid value {text:?} for {name}")))
}

fn parse_parent(name: &str) -> Result<Parent, Failure> {
    match name {
        "paper-quintic" => Ok(Parent::PaperQuintic),
        "uniform" => Ok(Parent::Uniform),
        other => Err(Failure::usage(format!("unknown parent {other:?} (expected paper-quintic or uniform)"))),
    }
}

fn finite(name: &str, text: &str) -> Result<f64, Failure> {
    let x: f64 = parse_number(name, text)?;
    if x.is_nan() {
        return Err(Failure::usage(format!("{name} must be a number")));
    }
    Ok(x)
}

fn eval(args: &EvalArgs) -> Outcome {
    let expr = &args.expression;
    let value = if let Some(x) = &expr.limit_f {
        limit_f_eval(finite("--limit-F", x)?)
    } else if let Some(u) = &expr.limit_g {
        limit_g_eval(finite("--limit-g", u)?)
    } else if let Some([m, n, x]) = expr.mixture.as_deref() {
        let m: usize = parse_number("M", m)?;
        let n: u64 = parse_number("n", n)?;
        let x = finite("x", x)?;
        if m == 0 || n == 0 {
            return Err(Failure::usage("M and n must be positive"));
        }
        let p = parse_parent(&args.parent)?.cell_probabilities(m).map_err(Failure::runtime)?;
        poisson_mixture_expectation(&p, n, x)
    } else {
        return Err(Failure::usage("one of --limit-F, --limit-g or --mixture is required"));
    };
    println!("{}", format_float(value));
    Ok(())
}

fn couple_check(global: &Global, args: &CoupleArgs) -> Outcome {
    if args.m == 0 || args.n == 0 {
        return Err(Failure::usage("--M and --n must be positive"));
    }
    let seed = global.seed.unwrap_or(0);
    let p = parse_parent(&args.parent)?.cell_probabilities(args.m).map_err(Failure::runtime)?;
    let mut invariant_violations = 0u32;
    let mut chain_violations = 0u32;
    let mut bounds = Vec::with_capacity(args.draws as usize);
    for draw in 0..args.draws {
        let pair = sample_coupled(&p, args.n, &mut SeededRng::for_stream(seed, 0, draw));
        let report = coupling_l1_bound(&pair);
        invariant_violations += !pair.invariants_hold() as u32;
        chain_violations += !report.chain_holds() as u32;
        bounds.push(report.bound);
    }
    if !global.quiet {
        println!("draws {}", args.draws);
        println!("invariant_violations {invariant_violations}");
        println!("chain_violations {chain_violations}");
        if !bounds.is_empty() {
            let s = sdf_core::experiments::Summary::of(&bounds);
            println!("median_bound {}", format_float(s.median));
            println!("mean_bound {}", format_float(s.mean));
        }
    }
    if invariant_violations + chain_violations > 0 {
        return Err(Failure { code: 1, message: "coupling invariants violated".into() });
    }
    Ok(())
}
