use std::path::PathBuf;

use sdf_core::experiments::reference::{l1_to_quintic_limit, sup_to_quintic_limit};
use sdf_core::experiments::{
    emit_csv, read_replicates, read_sweep, run_scenario, ConfigDocument, EstimatorSpec, Parent, ScenarioConfig,
    SizeRule, Summary,
};
use sdf_core::sampling::{coupling_l1_bound, sample_coupled};
use sdf_core::{grouped_population_sdf, l1_distance, structural_df, GroupingScheme, Kernel, SeededRng};
use serde_json::Value;
use sha2::{Digest, Sha256};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixtures() -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/regression.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn reference_scenario() -> ScenarioConfig {
    ConfigDocument::from_path(root().join("configs/paper_m1000_n2000.json")).unwrap().scenario().unwrap()
}

#[test]
fn golden_csv_hashes() {
    let fx = &fixtures()["shipped_config_csv_sha256"];
    let scenario = reference_scenario();
    assert_eq!(scenario.seed, fx["seed"].as_u64().unwrap());
    let dir = tempfile::tempdir().unwrap();
    emit_csv(&run_scenario(&scenario).unwrap(), dir.path()).unwrap();
    for (name, digest) in fx["files"].as_object().unwrap() {
        let bytes = std::fs::read(dir.path().join(name)).unwrap();
        let actual: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
        assert_eq!(&actual, digest.as_str().unwrap(), "{name}");
    }
}

#[test]
fn csv_round_trip_reproduces_records_and_aggregates() {
    let result = run_scenario(&reference_scenario()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    emit_csv(&result, dir.path()).unwrap();

    let records = read_replicates(dir.path().join("replicates.csv")).unwrap();
    assert_eq!(records, result.records);

    for row in read_sweep(dir.path().join("sweep.csv")).unwrap() {
        let l1: Vec<f64> = records.iter().filter(|r| r.estimator == row.estimator).map(|r| r.headline_l1()).collect();
        let s = Summary::of(&l1);
        assert!((s.median - row.median_l1).abs() <= 1e-9);
        assert!((s.mean - row.mean_l1).abs() <= 1e-9);
        assert!((s.stderr - row.stderr_l1).abs() <= 1e-9);
    }

    let mut reader = csv::Reader::from_path(dir.path().join("sdf_knots.csv")).unwrap();
    let rows: Vec<(String, f64, f64)> = reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].to_string(), r[1].parse().unwrap(), r[2].parse().unwrap())
        })
        .collect();
    for dump in &result.dumps {
        let (knots, levels): (Vec<f64>, Vec<f64>) =
            rows.iter().filter(|r| r.0 == dump.label).map(|r| (r.1, r.2)).unzip();
        assert_eq!(knots, dump.cdf.knots(), "{}", dump.label);
        assert_eq!(levels, dump.cdf.levels(), "{}", dump.label);
    }
}

#[test]
fn empty_grid_skips_grid_file_only() {
    let mut cfg = ScenarioConfig::new(20, 30, Parent::PaperQuintic);
    cfg.replicates = 2;
    let dir = tempfile::tempdir().unwrap();
    let written = emit_csv(&run_scenario(&cfg).unwrap(), dir.path()).unwrap();
    let names: Vec<String> = written.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect();
    assert_eq!(names, ["replicates.csv", "sdf_knots.csv", "density_knots.csv", "sweep.csv"]);
}

#[test]
fn aggregates_do_not_depend_on_replicate_order() {
    let mut cfg = ScenarioConfig::new(80, 100, Parent::PaperQuintic);
    cfg.replicates = 12;
    cfg.seed = 8;
    let result = run_scenario(&cfg).unwrap();
    let mut natural: Vec<f64> = result.records_for("natural").map(|r| r.headline_l1()).collect();
    let forward = Summary::of(&natural);
    natural.reverse();
    natural.swap(2, 7);
    let shuffled = Summary::of(&natural);
    assert_eq!(forward.median, shuffled.median);
    assert!((forward.mean - shuffled.mean).abs() <= 1e-15);
    assert_eq!(forward.mean, result.summary("natural").unwrap().l1.mean);
}

#[test]
fn grouped_distance_obeys_triangle_inequality_through_population_curve() {
    let mut cfg = ScenarioConfig::new(200, 300, Parent::PaperQuintic);
    cfg.replicates = 10;
    cfg.seed = 99;
    cfg.estimators = vec![EstimatorSpec::Grouped { size: Some(SizeRule::Fixed(10)), breaks: None }];
    let result = run_scenario(&cfg).unwrap();
    let p = Parent::PaperQuintic.cell_probabilities(200).unwrap();
    let population = grouped_population_sdf(&p, &GroupingScheme::equal_size(200, 10).unwrap()).unwrap();
    let population_to_f = l1_to_quintic_limit(&population);
    assert_eq!(result.summaries[0].population_l1, population_to_f);
    for dump in result.dumps.iter().filter(|d| d.label == "grouped_k=10") {
        let to_f = l1_to_quintic_limit(&dump.cdf);
        assert!(to_f <= l1_distance(&dump.cdf, &population) + population_to_f + 1e-12);
    }
}

#[test]
fn natural_estimator_mean_matches_binomial_mixture() {
    let mut cfg = ScenarioConfig::new(50, 80, Parent::PaperQuintic);
    cfg.replicates = 3000;
    cfg.seed = 17;
    cfg.eval_grid = vec![0.0, 0.625, 1.25, 1.875, 2.5];
    cfg.estimators = vec![
        EstimatorSpec::Natural,
        EstimatorSpec::Grouped { size: Some(SizeRule::Fixed(5)), breaks: None },
        EstimatorSpec::Kernel { kernel: Kernel::Triangular, bandwidth: SizeRule::Fixed(3) },
    ];
    let result = run_scenario(&cfg).unwrap();
    let bound = 4.0 / (cfg.replicates as f64).sqrt();
    let mut checked = 0;
    for g in &result.grid {
        if let Some(exact) = g.exact {
            assert!((g.mean - exact).abs() <= bound, "{g:?}");
            assert!((g.mean - exact).abs() <= 4.0 * g.stderr + 1e-12, "{g:?}");
            checked += 1;
        } else {
            assert!(g.estimator.starts_with("kernel"));
        }
    }
    assert_eq!(checked, 10);
}

#[test]
fn limit_sup_distance_at_m_1000() {
    let bound = fixtures()["limit_sup_bound_m1000"].as_f64().unwrap();
    let f = structural_df(&Parent::PaperQuintic.cell_probabilities(1000).unwrap());
    assert!(sup_to_quintic_limit(&f) <= bound);
}

#[test]
fn coupling_bound_median_in_frozen_interval() {
    let fx = &fixtures()["coupling_bound_median"];
    let m = fx["M"].as_u64().unwrap() as usize;
    let n = fx["n"].as_u64().unwrap();
    let p = Parent::PaperQuintic.cell_probabilities(m).unwrap();
    let bounds: Vec<f64> = (0..fx["draws"].as_u64().unwrap() as u32)
        .map(|r| {
            let pair = sample_coupled(&p, n, &mut SeededRng::for_stream(fx["seed"].as_u64().unwrap(), 0, r));
            let report = coupling_l1_bound(&pair);
            assert!(report.chain_holds());
            report.bound
        })
        .collect();
    let median = Summary::of(&bounds).median;
    let (lo, hi) = (fx["interval"][0].as_f64().unwrap(), fx["interval"][1].as_f64().unwrap());
    assert!(lo < median && median < hi, "median {median}");
}

#[test]
fn tabulated_parent_resolves_relative_to_config() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("g.csv"), "x,G\n0,0\n0.5,0.2\n1,1\n").unwrap();
    std::fs::write(
        dir.path().join("cfg.json"),
        r#"{"schema_version": 1, "M": 4, "n": 10, "parent": {"tabulated": "g.csv"}, "replicates": 2}"#,
    )
    .unwrap();
    let scenario = ConfigDocument::from_path(dir.path().join("cfg.json")).unwrap().scenario().unwrap();
    let result = run_scenario(&scenario).unwrap();
    assert!(result.records.iter().all(|r| r.l1_to_f.is_none()));
    assert_eq!(result.summaries[0].target, "F_M");
}
