//! Checks against independently computed expectations: direct recounts,
//! quadrature, analytic sampling moments and chi-square goodness of fit.

use std::collections::BTreeMap;

use freqlaw::asymptote::{converges, AsymptoteSpec};
use freqlaw::estimation::{fit_theta, good_turing_smooth, FitModel, RankFrequencySeries};
use freqlaw::histogram::build_histogram;
use freqlaw::quadrature::{integrate, integrate_log};
use freqlaw::{PopulationModel, SpeciesCounts, ThetaParam};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal};
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[test]
fn histogram_of_uniform_counts_matches_recount() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let pairs: Vec<(String, u64)> = (0..1000)
        .map(|i| (format!("w{i}"), rng.random_range(1..=10)))
        .collect();
    let counts = SpeciesCounts::from_pairs(pairs.clone()).unwrap();
    let hist = build_histogram(&counts);

    let mut recount = BTreeMap::new();
    for (_, c) in &pairs {
        *recount.entry(*c).or_insert(0u64) += 1;
    }
    let tokens: u64 = pairs.iter().map(|(_, c)| c).sum();
    for (x, n) in &recount {
        assert_eq!(hist.get(*x), *n as f64);
    }
    assert_eq!(hist.species_count(), 1000.0);
    assert_eq!(hist.total_population(), tokens as f64);
}

#[test]
fn good_turing_on_ideal_turing_population() {
    // N_x = 2520 / x for x = 1..10, realised with integer species counts
    let mut pairs = Vec::new();
    for x in 1..=10u64 {
        for i in 0..2520 / x {
            pairs.push((format!("c{x}_{i}"), x));
        }
    }
    let counts = SpeciesCounts::from_pairs(pairs).unwrap();
    let n = counts.total() as f64;
    assert_eq!(n, 25200.0);
    let d = good_turing_smooth(&counts).unwrap();
    let unseen = 2520.0 / n;
    assert_eq!(d.unseen_mass, unseen);
    for s in &d.species {
        let expect = s.count as f64 / n * (1.0 - unseen);
        assert!((s.probability - expect).abs() <= 1e-12 * expect);
    }
    assert!((d.total() - 1.0).abs() < 1e-12);
}

fn power_series(theta: f64, len: usize, noise: Option<(f64, u64)>) -> RankFrequencySeries {
    let beta = 1.0 / (theta - 1.0);
    let mut f: Vec<f64> = (1..=len).map(|r| (r as f64).powf(-beta)).collect();
    if let Some((sigma, seed)) = noise {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ln = LogNormal::new(0.0, sigma).unwrap();
        for v in &mut f {
            *v *= ln.sample(&mut rng);
        }
        f.sort_by(|a, b| b.total_cmp(a));
    }
    let z: f64 = f.iter().rev().sum();
    RankFrequencySeries::from_frequencies(f.into_iter().map(|v| v / z).collect()).unwrap()
}

fn exponential_series(rate: f64, len: usize) -> RankFrequencySeries {
    let head = -(-rate).exp_m1();
    RankFrequencySeries::from_frequencies(
        (1..=len)
            .map(|r| head * (-rate * (r as f64 - 1.0)).exp())
            .collect(),
    )
    .unwrap()
}

#[test]
fn theta_recovery_noiseless_and_noisy() {
    for theta in [1.2, 1.5, 1.8] {
        let fit = fit_theta(&power_series(theta, 100_000, None), None).unwrap();
        assert_eq!(fit.model, FitModel::Power);
        assert!((fit.theta_hat - theta).abs() <= 0.01, "{theta}: {fit:?}");

        let fit = fit_theta(&power_series(theta, 100_000, Some((0.01, 7))), None).unwrap();
        assert_eq!(fit.model, FitModel::Power);
        assert!(
            (fit.theta_hat - theta).abs() <= 0.05,
            "{theta} noisy: {fit:?}"
        );
    }
}

#[test]
fn model_selection_separates_families() {
    for len in [100, 1000, 10_000] {
        for theta in [1.2, 1.5, 2.0, 3.0] {
            let fit = fit_theta(&power_series(theta, len, None), Some(2)).unwrap();
            assert_eq!(fit.model, FitModel::Power, "len={len} theta={theta}");
            assert!(fit.goodness - fit.rival_goodness > 0.01);
        }
        for rate in [0.01, 0.05, 0.2] {
            let series = exponential_series(rate, len.min(2000));
            let fit = fit_theta(&series, Some(2)).unwrap();
            assert_eq!(fit.model, FitModel::Exponential, "len={len} rate={rate}");
            assert!(fit.goodness - fit.rival_goodness > 0.01);
            assert!((fit.lambda_hat.unwrap() - rate).abs() < 1e-6);
        }
    }
}

#[test]
fn turing_law_normalises_under_quadrature() {
    for n1 in [1.0, 5.0, 50.0] {
        let law = AsymptoteSpec::turing(n1).unwrap();
        let total = integrate(|r| law.frequency_at(r).unwrap(), 1.0, 50.0 * n1, 2000);
        assert!((total - 1.0).abs() < 1e-6, "n1={n1}: {total}");
        assert_eq!(law.frequency_at(1.0).unwrap(), 1.0 / n1);
    }
}

/// Increments of `∫_1^R f` over successive decades must shrink geometrically
/// for a convergent tail.
fn decade_increments(law: &AsymptoteSpec) -> Vec<f64> {
    let f = |r: f64| law.frequency_at(r).unwrap();
    (1..=6)
        .map(|d| integrate_log(f, 10f64.powi(d - 1), 10f64.powi(d), 400))
        .collect()
}

#[test]
fn classifier_agrees_with_numeric_tail() {
    for i in 1..=15 {
        let theta = 1.0 + i as f64 / 10.0;
        let law = AsymptoteSpec::power(theta, 1.0).unwrap();
        let inc = decade_increments(&law);
        let shrinking = inc.windows(2).all(|w| w[1] < 0.99 * w[0]);
        assert_eq!(shrinking, converges(theta), "theta = {theta}: {inc:?}");

        // Cauchy criterion between R = 1e5 and 1e6; only decisive where the
        // tail exponent is far enough from the boundary
        let f = |r: f64| law.frequency_at(r).unwrap();
        let f5 = integrate_log(f, 1.0, 1e5, 2000);
        let f6 = integrate_log(f, 1.0, 1e6, 2400);
        let cauchy = (f6 - f5).abs() < 1e-4 * f5;
        if theta <= 1.5 + 1e-9 || theta >= 2.0 - 1e-9 {
            assert_eq!(cauchy, converges(theta), "theta = {theta}");
        }
    }
    let turing = AsymptoteSpec::turing(3.0).unwrap();
    let f = |r: f64| turing.frequency_at(r).unwrap();
    let f5 = integrate(f, 1.0, 1e3, 4000);
    assert!((f5 - 1.0).abs() < 1e-12);
    assert!(converges(1.0));
}

#[test]
fn geometric_two_species_binomial() {
    let m = PopulationModel::new(AsymptoteSpec::geometric(0.5).unwrap(), 2, 2024).unwrap();
    let n = 1_000_000u64;
    let c = m.sample_tokens(n).unwrap();
    let share = c.get("s1").unwrap() as f64 / n as f64;
    let p = 2.0 / 3.0;
    let sigma = (p * (1.0 - p) / n as f64).sqrt();
    assert!((share - p).abs() < 3.0 * sigma, "share = {share}");
}

#[test]
fn sampler_passes_chi_square() {
    let n = 1_000_000u64;
    let specs = [
        AsymptoteSpec::geometric(0.05).unwrap(),
        AsymptoteSpec::power(1.5, 1.0).unwrap(),
        AsymptoteSpec::zipf(1.0, 0.0).unwrap(),
    ];
    for (spec, seed) in specs.into_iter().zip([1u64, 2, 3]) {
        let m = PopulationModel::new(spec, 100, seed).unwrap();
        let c = m.sample_tokens(n).unwrap();
        assert_eq!(c.total(), n);
        let mut stat = 0.0;
        for (i, p) in m.probabilities().iter().enumerate() {
            let expected = p * n as f64;
            let observed = c.get(&format!("s{}", i + 1)).unwrap_or(0) as f64;
            stat += (observed - expected).powi(2) / expected;
        }
        let critical = ChiSquared::new(99.0).unwrap().inverse_cdf(0.999);
        assert!(stat < critical, "{spec:?}: chi2 = {stat} >= {critical}");
    }
}

#[test]
fn power_population_reestimates_to_poisson_expectation() {
    // Sampling a power law with exponent β = 1/(θ-1) gives
    // E[N_{x+1}]/E[N_x] = (x + 1 - θ)/(x + 1), so x* tends to
    // (x + θ)(x + 1 - θ)/(x + 1), which approaches x only for large x.
    let theta = 1.5;
    let m = PopulationModel::new(AsymptoteSpec::power(theta, 1.0).unwrap(), 100_000, 0).unwrap();
    let seeds: Vec<u64> = (100..120).collect();
    // x = 1..3 keeps every cell above the 30-species reporting cutoff
    let rows = m
        .reestimation_over_seeds(1_000_000, ThetaParam::new(theta).unwrap(), &seeds, 3)
        .unwrap();
    for row in rows {
        let x = row.x as f64;
        let expect = (x + theta) * (x + 1.0 - theta) / (x + 1.0);
        let mean = row.mean_x_star.unwrap();
        assert!(
            (mean - expect).abs() / expect < 0.10,
            "x={x}: {mean} vs {expect}"
        );
    }
}

#[test]
fn sample_sum_is_conserved_and_seeded() {
    let m = PopulationModel::new(AsymptoteSpec::turing(20.0).unwrap(), 300, 5).unwrap();
    let a = m.sample_tokens(77_777).unwrap();
    assert_eq!(a.total(), 77_777);
    assert_eq!(a, m.sample_tokens(77_777).unwrap());
}
