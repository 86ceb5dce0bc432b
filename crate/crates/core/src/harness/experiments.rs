//! Experiment drivers: Monte Carlo histograms, size sweeps, eigenvalue
//! fits, density tables, analytic law tables, and trade-off curves. Each
//! driver writes its CSV under the output directory and returns the data it
//! wrote, so tests can assert on both.

use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::analytics::{exact_capacity_density, exact_density, snr_law_params};
use crate::channel::{
    capacity, end_to_end, los_bs_irs, sample_direct, sample_reflect, SystemConfig,
};
use crate::covariance::CovarianceModel;
use crate::fitting::{eigenvalue_growth, power_law_fit, u_vs_q_sweep, PowerLawFit};
use crate::geometry::optimal_phase_shifts;
use crate::statistics::{capacity_law, gaussian_capacity_pdf, hardening_bounds, CapacityLaw};
use crate::tradeoff::{m_erg, m_out, TradeoffPoint};
use crate::{Error, Result};

use super::config::ExperimentConfig;
use super::csvout::{fmt_float, write_lines};
use super::parallel::{parallel_collect, parallel_trials, worker_pool};
use super::rng::{trial_rng, STREAM_DIRECT, STREAM_REFLECT};
use super::stats::RunningStats;

/// Capacity sampler for one scenario under the hardening phase shifts.
///
/// Precomputes everything deterministic (LoS matrix, phase shifts, the
/// covariance square root) so each trial costs one correlated draw plus a
/// couple of mat-vecs.
pub struct TrialSampler<'a> {
    sys: &'a SystemConfig,
    cov: &'a CovarianceModel,
    t_matrix: DMatrix<Complex64>,
    beta: Vec<f64>,
}

impl<'a> TrialSampler<'a> {
    pub fn new(sys: &'a SystemConfig, cov: &'a CovarianceModel) -> Result<Self> {
        if cov.dim() != sys.n() {
            return Err(Error::DimensionMismatch {
                expected: sys.n(),
                actual: cov.dim(),
            });
        }
        // force (and validate) the spectral factor once, before trials fan out
        cov.apply_sqrt(&vec![Complex64::default(); sys.n()])?;
        Ok(Self {
            sys,
            cov,
            t_matrix: los_bs_irs(sys)?,
            beta: optimal_phase_shifts(&sys.irs, sys.aoa_irs, sys.aod_irs, sys.wavelength)?,
        })
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// Capacity of the `(master_seed, trial)` channel draw.
    pub fn capacity(&self, master_seed: u64, trial: u64) -> f64 {
        self.realize(master_seed, trial).1
    }

    /// SNR gain of the `(master_seed, trial)` channel draw.
    pub fn gamma(&self, master_seed: u64, trial: u64) -> f64 {
        self.realize(master_seed, trial).0
    }

    fn realize(&self, master_seed: u64, trial: u64) -> (f64, f64) {
        let mut rng_d = trial_rng(master_seed, trial, STREAM_DIRECT);
        let mut rng_r = trial_rng(master_seed, trial, STREAM_REFLECT);
        let h_d = sample_direct(self.sys, &mut rng_d);
        let h_r = sample_reflect(self.sys, self.cov, &mut rng_r)
            .expect("covariance validated at sampler construction");
        let h = end_to_end(self.sys, &h_d, &self.t_matrix, &h_r, &self.beta)
            .expect("dimensions fixed at sampler construction");
        capacity(self.sys, &h)
    }
}

/// Output of [`run_histogram`].
pub struct HistogramRun {
    pub centers: Vec<f64>,
    pub counts: Vec<u64>,
    pub overlay: Vec<f64>,
    pub stats: RunningStats,
    pub law: CapacityLaw,
}

/// Monte Carlo capacity histogram with the scaled Gaussian overlay.
///
/// Bins are fixed-width over `[mean - 6σ, mean + 6σ]` of the sampled
/// capacities; the overlay column is the analytic density times
/// `trials · bin_width`, so it integrates to the trial count.
pub fn run_histogram(
    cfg: &ExperimentConfig,
    workers: usize,
    out_dir: &Path,
) -> Result<(HistogramRun, RunningStats)> {
    let sys = cfg.system()?;
    let cov = cfg.covariance_for(&sys)?;
    let sampler = TrialSampler::new(&sys, &cov)?;
    let samples = parallel_collect(cfg.trials, cfg.master_seed, workers, |seed, t| {
        sampler.capacity(seed, t)
    });
    let stats = RunningStats::from_slice(&samples);

    let sigma = stats.variance().sqrt().max(1e-12);
    let lo = stats.mean() - 6.0 * sigma;
    let width = 12.0 * sigma / cfg.bins as f64;
    let mut counts = vec![0u64; cfg.bins];
    for &c in &samples {
        let idx = ((c - lo) / width).floor() as i64;
        counts[idx.clamp(0, cfg.bins as i64 - 1) as usize] += 1;
    }

    let law = capacity_law(&sys, &cov)?;
    let scale = cfg.trials as f64 * width;
    let mut centers = Vec::with_capacity(cfg.bins);
    let mut overlay = Vec::with_capacity(cfg.bins);
    for (i, _) in counts.iter().enumerate() {
        let center = lo + (i as f64 + 0.5) * width;
        centers.push(center);
        overlay.push(gaussian_capacity_pdf(&law, center, cfg.overlay_corrected)? * scale);
    }

    let rows: Vec<String> = (0..cfg.bins)
        .map(|i| {
            format!(
                "{},{},{}",
                fmt_float(centers[i]),
                counts[i],
                fmt_float(overlay[i])
            )
        })
        .collect();
    write_lines(
        &out_dir.join("hist.csv"),
        "bin_center,count,analytic_pdf_scaled",
        &rows,
    )?;

    let run = HistogramRun {
        centers,
        counts,
        overlay,
        stats,
        law,
    };
    Ok((run, stats))
}

/// One row of the size sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub n: usize,
    pub mc_mean: f64,
    pub mc_var: f64,
    pub mu_c: f64,
    pub sigma2_c: f64,
    pub mean_floor: f64,
    pub var_ceiling: f64,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Per-size master seed so sweep points draw independent channels.
fn point_seed(master_seed: u64, n: usize) -> u64 {
    splitmix(master_seed ^ splitmix(n as u64))
}

/// Spectrum power-law fit over the sweep grid, shared by the bound columns.
fn grid_eig_fit(cfg: &ExperimentConfig, grid: &[usize]) -> Result<PowerLawFit> {
    let pts = grid
        .iter()
        .map(|&n| {
            let sys = cfg.system_for_size(n)?;
            let cov = cfg.covariance_for(&sys)?;
            Ok((n as f64, cov.lambda_max()?))
        })
        .collect::<Result<Vec<_>>>()?;
    power_law_fit(&pts)
}

/// Floor and ceiling columns; NaN where the bounds are undefined
/// (q = 1 or a spectrum growing linearly).
fn bound_columns(
    cfg: &ExperimentConfig,
    sys: &SystemConfig,
    fit: &PowerLawFit,
    n: usize,
) -> (f64, f64) {
    match hardening_bounds(sys, &cfg.scaling, (fit.a, fit.u), n) {
        Ok((floor, shape)) => (floor, cfg.ceiling_c * shape),
        Err(_) => (f64::NAN, f64::NAN),
    }
}

/// Mean/variance sweep over IRS sizes: Monte Carlo against the analytic law
/// plus the hardening-order bounds.
pub fn run_sweep(cfg: &ExperimentConfig, workers: usize, out_dir: &Path) -> Result<Vec<SweepRow>> {
    let grid = cfg.sweep_grid();
    let fit = grid_eig_fit(cfg, &grid)?;
    let mut rows = Vec::with_capacity(grid.len());
    for &n in &grid {
        let sys = cfg.system_for_size(n)?;
        let cov = cfg.covariance_for(&sys)?;
        let sampler = TrialSampler::new(&sys, &cov)?;
        let mc = parallel_trials(
            cfg.trials,
            point_seed(cfg.master_seed, n),
            workers,
            |seed, t| sampler.capacity(seed, t),
        );
        let law = capacity_law(&sys, &cov)?;
        let (mean_floor, var_ceiling) = bound_columns(cfg, &sys, &fit, n);
        rows.push(SweepRow {
            n,
            mc_mean: mc.mean(),
            mc_var: mc.variance(),
            mu_c: law.mu_c,
            sigma2_c: law.sigma_c * law.sigma_c,
            mean_floor,
            var_ceiling,
        });
    }

    let lines: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{},{},{}",
                r.n,
                fmt_float(r.mc_mean),
                fmt_float(r.mc_var),
                fmt_float(r.mu_c),
                fmt_float(r.sigma2_c),
                fmt_float(r.mean_floor),
                fmt_float(r.var_ceiling)
            )
        })
        .collect();
    write_lines(
        &out_dir.join("sweep.csv"),
        "N,mc_mean,mc_var,mu_C,sigma2_C,mean_floor,var_ceiling",
        &lines,
    )?;
    Ok(rows)
}

/// λ_max against N for half-wavelength square sinc covariances, plus the
/// fitted power law. Optionally dumps each full spectrum.
pub fn run_fit_eigs(
    cfg: &ExperimentConfig,
    workers: usize,
    out_dir: &Path,
    dump_spectra: bool,
) -> Result<(Vec<(f64, f64)>, PowerLawFit)> {
    let grid = cfg.sweep_grid();
    let (pts, fit) = worker_pool(workers).install(|| eigenvalue_growth(&grid, cfg.wavelength))?;

    let rows: Vec<String> = pts
        .iter()
        .map(|&(n, l)| format!("{},{}", n as usize, fmt_float(l)))
        .collect();
    write_lines(&out_dir.join("eigs.csv"), "N,lambda_max", &rows)?;
    write_lines(
        &out_dir.join("eigs_fit.csv"),
        "a,u,residual",
        &[format!(
            "{},{},{}",
            fmt_float(fit.a),
            fmt_float(fit.u),
            fmt_float(fit.residual)
        )],
    )?;

    if dump_spectra {
        for &n in &grid {
            let sys = cfg.system_for_size(n)?;
            let cov = crate::covariance::sinc_covariance(&sys.irs, sys.wavelength)?;
            let spec = cov.eigenvalues()?;
            let rows: Vec<String> = spec
                .iter()
                .enumerate()
                .map(|(i, &v)| format!("{},{}", i, fmt_float(v)))
                .collect();
            write_lines(
                &out_dir.join(format!("spectrum_{n}.csv")),
                "index,eigenvalue",
                &rows,
            )?;
        }
    }
    Ok((pts, fit))
}

/// Eigenvalue-growth exponent against the area-scaling exponent,
/// q ∈ {0, 0.1, …, 1}.
pub fn run_u_vs_q(
    cfg: &ExperimentConfig,
    workers: usize,
    out_dir: &Path,
) -> Result<Vec<(f64, f64)>> {
    let q_grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let grid = cfg.sweep_grid();
    let curve = worker_pool(workers).install(|| u_vs_q_sweep(&q_grid, &grid, cfg.wavelength))?;
    let rows: Vec<String> = curve
        .iter()
        .map(|&(q, u)| format!("{},{}", fmt_float(q), fmt_float(u)))
        .collect();
    write_lines(&out_dir.join("u_vs_q.csv"), "q,u", &rows)?;
    Ok(curve)
}

/// Exact SNR-gain and capacity densities on a grid spanning ±8 deviations.
pub fn run_density(cfg: &ExperimentConfig, out_dir: &Path) -> Result<()> {
    let sys = cfg.system()?;
    let cov = cfg.covariance_for(&sys)?;
    let beta = optimal_phase_shifts(&sys.irs, sys.aoa_irs, sys.aod_irs, sys.wavelength)?;
    let params = snr_law_params(&sys, &cov, &beta)?;

    let sd = params.sigma2_gamma.sqrt();
    let lo = (params.mu_gamma - 8.0 * sd).max(0.0);
    let hi = params.mu_gamma + 8.0 * sd;
    let steps = 400usize;
    let mut gamma_rows = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let g = lo + (hi - lo) * i as f64 / steps as f64;
        gamma_rows.push(format!(
            "{},{}",
            fmt_float(g),
            fmt_float(exact_density(&params, &sys, g)?)
        ));
    }
    write_lines(&out_dir.join("density_gamma.csv"), "gamma,pdf", &gamma_rows)?;

    let rho_m = sys.rho * sys.m() as f64;
    let c_lo = (rho_m * lo).ln_1p() * std::f64::consts::LOG2_E;
    let c_hi = (rho_m * hi).ln_1p() * std::f64::consts::LOG2_E;
    let mut cap_rows = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let c = c_lo + (c_hi - c_lo) * i as f64 / steps as f64;
        cap_rows.push(format!(
            "{},{}",
            fmt_float(c),
            fmt_float(exact_capacity_density(&params, &sys, c)?)
        ));
    }
    write_lines(
        &out_dir.join("density_capacity.csv"),
        "c,pdf_capacity",
        &cap_rows,
    )?;
    Ok(())
}

/// Analytic capacity laws over the sweep grid:
/// `N,mu_C,sigma2_C,sigma2_C_hat,mean_floor,var_ceiling`.
pub fn run_laws(cfg: &ExperimentConfig, out_dir: &Path) -> Result<Vec<String>> {
    let grid = cfg.sweep_grid();
    let fit = grid_eig_fit(cfg, &grid)?;
    let mut rows = Vec::with_capacity(grid.len());
    for &n in &grid {
        let sys = cfg.system_for_size(n)?;
        let cov = cfg.covariance_for(&sys)?;
        let law = capacity_law(&sys, &cov)?;
        let (mean_floor, var_ceiling) = bound_columns(cfg, &sys, &fit, n);
        let sigma2_hat = law.sigma_c_hat.map(|s| s * s).unwrap_or(f64::NAN);
        rows.push(format!(
            "{},{},{},{},{},{}",
            n,
            fmt_float(law.mu_c),
            fmt_float(law.sigma_c * law.sigma_c),
            fmt_float(sigma2_hat),
            fmt_float(mean_floor),
            fmt_float(var_ceiling)
        ));
    }
    write_lines(
        &out_dir.join("laws.csv"),
        "N,mu_C,sigma2_C,sigma2_C_hat,mean_floor,var_ceiling",
        &rows,
    )?;
    Ok(rows)
}

/// Trade-off target for [`run_tradeoff`].
#[derive(Debug, Clone, Copy)]
pub enum TradeoffTarget {
    /// Ergodic capacity in bits.
    Ergodic(f64),
    /// Target rate in bits with an outage probability.
    Outage { rate: f64, p_out: f64 },
}

/// Minimal antenna counts over the sweep grid for an ergodic or outage
/// target: `N,m_real,m_min`.
pub fn run_tradeoff(
    cfg: &ExperimentConfig,
    target: TradeoffTarget,
    out_dir: &Path,
) -> Result<Vec<TradeoffPoint>> {
    let grid = cfg.sweep_grid();
    let mut points = Vec::with_capacity(grid.len());
    for &n in &grid {
        let sys = cfg.system_for_size(n)?;
        let cov = cfg.covariance_for(&sys)?;
        let point = match target {
            TradeoffTarget::Ergodic(cbar) => m_erg(&sys, &cov, cbar)?,
            TradeoffTarget::Outage { rate, p_out } => m_out(&sys, &cov, rate, p_out)?,
        };
        points.push(point);
    }
    let rows: Vec<String> = points
        .iter()
        .map(|p| format!("{},{},{}", p.n, fmt_float(p.m_real), p.m_min))
        .collect();
    let name = match target {
        TradeoffTarget::Ergodic(_) => "tradeoff_erg.csv",
        TradeoffTarget::Outage { .. } => "tradeoff_out.csv",
    };
    write_lines(&out_dir.join(name), "N,m_real,m_min", &rows)?;
    Ok(points)
}
