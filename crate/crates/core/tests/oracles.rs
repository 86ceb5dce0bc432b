//! Cross-checks between independent routes to the same distribution: the
//! full channel pipeline, the two-branch SNR sampler, and the exact density.

use irsim::analytics::{exact_cdf_sorted, exact_density, snr_law_params};
use irsim::channel::{sample_gamma_decomposed, SystemConfig};
use irsim::covariance::sinc_covariance;
use irsim::geometry::optimal_phase_shifts;
use irsim::harness::experiments::TrialSampler;
use irsim::harness::rng::{trial_rng, STREAM_DECOMPOSED};
use irsim::harness::stats::{skewness_kurtosis, RunningStats};

const SEED: u64 = 1618033988;

fn baseline_with(bs: (usize, usize), irs_nx: usize) -> SystemConfig {
    SystemConfig::baseline(bs.0, bs.1, irs_nx, irs_nx).unwrap()
}

fn law_at_beta_star(sys: &SystemConfig) -> irsim::analytics::SnrLawParams {
    let cov = sinc_covariance(&sys.irs, sys.wavelength).unwrap();
    let beta = optimal_phase_shifts(&sys.irs, sys.aoa_irs, sys.aod_irs, sys.wavelength).unwrap();
    snr_law_params(sys, &cov, &beta).unwrap()
}

/// First two moments of the decomposed sampler agree with the full channel
/// pipeline within Monte Carlo error.
#[test]
fn decomposed_matches_full_moments() {
    let trials = 40_000u64;
    for bs in [(1usize, 1usize), (2, 1), (2, 2)] {
        for irs_nx in [2usize, 4, 8] {
            let sys = baseline_with(bs, irs_nx);
            let cov = sinc_covariance(&sys.irs, sys.wavelength).unwrap();
            let sampler = TrialSampler::new(&sys, &cov).unwrap();
            let params = law_at_beta_star(&sys);

            let mut full = RunningStats::new();
            let mut decomposed = RunningStats::new();
            for t in 0..trials {
                full.push(sampler.gamma(SEED, t));
                let mut rng = trial_rng(SEED, t, STREAM_DECOMPOSED);
                decomposed.push(sample_gamma_decomposed(&params, &sys, &mut rng));
            }

            let n = trials as f64;
            let se_mean = (full.variance() / n + decomposed.variance() / n).sqrt();
            assert!(
                (full.mean() - decomposed.mean()).abs() <= 3.0 * se_mean,
                "mean mismatch at M={} N={}: {} vs {} (se {se_mean})",
                sys.m(),
                sys.n(),
                full.mean(),
                decomposed.mean()
            );

            // variance-of-variance estimated from the larger fourth moment of
            // the noncentral branch: use the relative band 3·sqrt(2/n)·(1+2λ)-ish;
            // a 10% relative band is far above the estimator noise here
            let rel = (full.variance() - decomposed.variance()).abs() / full.variance();
            assert!(
                rel <= 0.10,
                "variance mismatch at M={} N={}: {} vs {}",
                sys.m(),
                sys.n(),
                full.variance(),
                decomposed.variance()
            );

            // both should also sit on the closed forms
            assert!((full.mean() - params.mu_gamma).abs() <= 4.0 * (full.variance() / n).sqrt());
        }
    }
}

/// Decomposed-sampler mean over 1e6 draws lands within 0.5% of the
/// closed-form mean at the reference size.
#[test]
fn decomposed_mean_tracks_closed_form() {
    let sys = SystemConfig::baseline(2, 2, 8, 32).unwrap();
    let params = law_at_beta_star(&sys);
    let mut acc = 0.0;
    let trials = 1_000_000u64;
    for t in 0..trials {
        let mut rng = trial_rng(SEED, t, STREAM_DECOMPOSED);
        acc += sample_gamma_decomposed(&params, &sys, &mut rng);
    }
    let mean = acc / trials as f64;
    let rel = (mean - params.mu_gamma).abs() / params.mu_gamma;
    assert!(
        rel <= 0.005,
        "mean {mean} vs {} (rel {rel})",
        params.mu_gamma
    );
}

/// Exact density against a one-million-draw histogram in the pure-fading
/// two-antenna case (κ_r = 0 kills the noncentrality).
#[test]
fn exact_density_matches_histogram_m2() {
    let mut sys = SystemConfig::baseline(2, 1, 4, 4).unwrap();
    sys.kappa_r = 0.0;
    let params = law_at_beta_star(&sys);
    assert_eq!(params.f0_val, 0.0);

    let trials = 1_000_000usize;
    let mut samples = Vec::with_capacity(trials);
    for t in 0..trials as u64 {
        let mut rng = trial_rng(SEED, t, STREAM_DECOMPOSED);
        samples.push(sample_gamma_decomposed(&params, &sys, &mut rng));
    }

    let sd = params.sigma2_gamma.sqrt();
    let lo = 0.0;
    let hi = params.mu_gamma + 5.0 * sd;
    let bins = 60usize;
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    for &g in &samples {
        let idx = ((g - lo) / width).floor() as i64;
        if (0..bins as i64).contains(&idx) {
            counts[idx as usize] += 1;
        }
    }

    // bin probabilities from the CDF at the edges
    let edges: Vec<f64> = (0..=bins).map(|i| lo + i as f64 * width).collect();
    let cdf = exact_cdf_sorted(&params, &sys, &edges).unwrap();
    let mut max_z: f64 = 0.0;
    for i in 0..bins {
        let p = cdf[i + 1] - cdf[i];
        let expect = trials as f64 * p;
        if expect < 10.0 {
            continue;
        }
        let se = (trials as f64 * p * (1.0 - p)).sqrt();
        let z = (counts[i] as f64 - expect).abs() / se;
        max_z = max_z.max(z);
        assert!(
            z <= 3.0,
            "bin {i} deviates by {z:.2} standard errors ({} vs {expect:.1})",
            counts[i]
        );
    }
    assert!(max_z > 0.0);
}

/// Standardized SNR-gain samples approach the Gaussian limit as the surface
/// grows: skewness falls with N and is small at N = 1024.
#[test]
fn gamma_skewness_gaussian_limit() {
    let skew_at = |nx: usize| {
        let sys = baseline_with((2, 2), nx);
        let params = law_at_beta_star(&sys);
        let sd = params.sigma2_gamma.sqrt();
        let samples: Vec<f64> = (0..100_000u64)
            .map(|t| {
                let mut rng = trial_rng(SEED, t, STREAM_DECOMPOSED);
                (sample_gamma_decomposed(&params, &sys, &mut rng) - params.mu_gamma) / sd
            })
            .collect();
        skewness_kurtosis(&samples).0
    };
    let small = skew_at(8); // N = 64
    let large = skew_at(32); // N = 1024
    assert!(
        large.abs() < small.abs(),
        "skew should shrink: |{large}| !< |{small}|"
    );
    assert!(large.abs() < 0.15, "skew at N = 1024 is {large}");
}

/// One-sample KS: empirical CDF of full-channel SNR draws against the exact
/// law, at the 1% level.
#[test]
fn exact_cdf_matches_empirical() {
    let sys = baseline_with((2, 2), 4);
    let cov = sinc_covariance(&sys.irs, sys.wavelength).unwrap();
    let sampler = TrialSampler::new(&sys, &cov).unwrap();
    let params = law_at_beta_star(&sys);

    let n = 2000usize;
    let mut samples: Vec<f64> = (0..n as u64).map(|t| sampler.gamma(SEED, t)).collect();
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let cdf = exact_cdf_sorted(&params, &sys, &samples).unwrap();
    let mut d: f64 = 0.0;
    for (i, &f) in cdf.iter().enumerate() {
        let hi = (i + 1) as f64 / n as f64;
        let lo = i as f64 / n as f64;
        d = d.max((f - hi).abs()).max((f - lo).abs());
    }
    let crit = 1.628 / (n as f64).sqrt();
    assert!(
        d <= crit,
        "KS statistic {d:.4} above the 1% critical value {crit:.4}"
    );
}

/// The density is supported on the nonnegative axis and vanishes there.
#[test]
fn density_edge_cases() {
    let sys = baseline_with((2, 2), 4);
    let params = law_at_beta_star(&sys);
    assert_eq!(exact_density(&params, &sys, -0.5).unwrap(), 0.0);
    assert_eq!(exact_density(&params, &sys, f64::INFINITY).unwrap(), 0.0);
    let at_zero = exact_density(&params, &sys, 0.0).unwrap();
    assert!(at_zero >= 0.0 && at_zero.is_finite());
}
