use std::collections::HashMap;

use sdf_core::sampling::{sample_binomial, sample_coupled, sample_multinomial, sample_poisson};
use sdf_core::{CellProbabilities, SeededRng};
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[test]
fn coupled_draws_are_reproducible() {
    let p = CellProbabilities::new(vec![0.1, 0.6, 0.3]).unwrap();
    for r in 0..50 {
        let a = sample_coupled(&p, 40, &mut SeededRng::for_stream(5, 1, r));
        let b = sample_coupled(&p, 40, &mut SeededRng::for_stream(5, 1, r));
        assert_eq!(a, b);
        assert_eq!(a.x.iter().sum::<u64>(), 40);
        assert_eq!(a.y.iter().sum::<u64>(), a.capital_n);
    }
}

#[test]
fn streams_differ_by_index() {
    let first = |e, r| SeededRng::for_stream(9, e, r).uniform();
    assert_ne!(first(0, 0), first(0, 1));
    assert_ne!(first(0, 0), first(1, 0));
    assert_ne!(SeededRng::new(1).uniform(), SeededRng::new(2).uniform());
}

#[test]
fn poisson_side_given_total_is_multinomial() {
    // conditioned on N = k, y must follow mult(k, p)
    let p = [0.2, 0.3, 0.5];
    let probs = CellProbabilities::new(p.to_vec()).unwrap();
    let k = 6u64;
    let mut table: HashMap<Vec<u64>, u64> = HashMap::new();
    let mut kept = 0u64;
    for r in 0..60_000u32 {
        let pair = sample_coupled(&probs, 5, &mut SeededRng::for_stream(31, 0, r));
        if pair.capital_n == k {
            *table.entry(pair.y).or_default() += 1;
            kept += 1;
        }
    }
    assert!(kept > 5000, "only {kept} draws with N = {k}");
    let factorial = |v: u64| (1..=v).map(|i| i as f64).product::<f64>();
    let mut chi2 = 0.0;
    let mut cells = 0;
    for a in 0..=k {
        for b in 0..=k - a {
            let c = k - a - b;
            let pmf = factorial(k) / (factorial(a) * factorial(b) * factorial(c))
                * p[0].powi(a as i32)
                * p[1].powi(b as i32)
                * p[2].powi(c as i32);
            let expected = pmf * kept as f64;
            let observed = *table.get(&vec![a, b, c]).unwrap_or(&0) as f64;
            chi2 += (observed - expected).powi(2) / expected;
            cells += 1;
        }
    }
    let p_value = 1.0 - ChiSquared::new((cells - 1) as f64).unwrap().cdf(chi2);
    assert!(p_value > 0.001, "chi2 {chi2} on {} df, p = {p_value}", cells - 1);
}

#[test]
fn sampler_support_boundaries() {
    let mut rng = SeededRng::new(4);
    for trials in [0u64, 1, 7, 40, 1000] {
        for p in [0.0, 1e-9, 0.03, 0.5, 0.97, 1.0] {
            let x = sample_binomial(trials, p, &mut rng);
            assert!(x <= trials);
            if p == 0.0 {
                assert_eq!(x, 0);
            }
            if p == 1.0 {
                assert_eq!(x, trials);
            }
        }
    }
    assert_eq!(sample_poisson(0.0, &mut rng), 0);
    let degenerate = CellProbabilities::new(vec![1.0, 0.0, 0.0]).unwrap();
    assert_eq!(sample_multinomial(&degenerate, 12, &mut rng), vec![12, 0, 0]);
    assert_eq!(sample_multinomial(&degenerate, 0, &mut rng), vec![0, 0, 0]);
}
