//! Power-law fits of the covariance spectrum.
//!
//! The top eigenvalue of the sinc covariance grows like `λ_max ≈ a·N^u`; the
//! exponent `u` sets the hardening order `σ²_C = O(N^{-(1-u)})`. Fitting is
//! ordinary least squares in log-log coordinates, exact on noiseless
//! power-law data; the sweep couples `u` to the area-scaling exponent `q` by
//! shrinking the element spacing as `(λ/2)/N^{q/2}`.

use rayon::prelude::*;

use crate::covariance::sinc_covariance;
use crate::geometry::ArrayGeometry;
use crate::{Error, Result};

/// Fitted `y = a·x^u` with the RMS of log-domain residuals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub a: f64,
    pub u: f64,
    pub residual: f64,
}

/// Least-squares fit of `y = a·x^u` on `(log x, log y)`.
pub fn power_law_fit(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "power-law fit needs at least 2 points, got {}",
            points.len()
        )));
    }
    if points
        .iter()
        .any(|&(x, y)| !(x.is_finite() && x > 0.0) || !(y.is_finite() && y > 0.0))
    {
        return Err(Error::InvalidArgument(
            "power-law fit needs strictly positive data".into(),
        ));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument(
            "power-law fit needs at least two distinct abscissae".into(),
        ));
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let u = sxy / sxx;
    let ln_a = my - u * mx;
    let ss: f64 = logs
        .iter()
        .map(|p| {
            let r = p.1 - ln_a - u * p.0;
            r * r
        })
        .sum();
    Ok(PowerLawFit {
        a: ln_a.exp(),
        u,
        residual: (ss / n).sqrt(),
    })
}

/// `λ_max` of the sinc covariance for a square IRS of `n` elements with the
/// `q`-dependent spacing `(λ/2)/n^{q/2}`.
fn lambda_max_square(n: usize, q: f64, wavelength: f64) -> Result<f64> {
    let nx = (n as f64).sqrt().round() as usize;
    if nx * nx != n {
        return Err(Error::InvalidArgument(format!(
            "sweep sizes must be perfect squares, got {n}"
        )));
    }
    let d = wavelength / 2.0 / (n as f64).powf(q / 2.0);
    let geom = ArrayGeometry::square(nx, d)?;
    sinc_covariance(&geom, wavelength)?.lambda_max()
}

/// Eigenvalue-growth exponent `u` against the area-scaling exponent `q`.
///
/// For each `q` the sinc covariance is built over `n_grid` (square sizes)
/// and `λ_max = aN^u` fitted; the returned curve is `(q, u)`.
pub fn u_vs_q_sweep(q_grid: &[f64], n_grid: &[usize], wavelength: f64) -> Result<Vec<(f64, f64)>> {
    if q_grid.is_empty() || n_grid.len() < 2 {
        return Err(Error::InvalidArgument(
            "sweep needs at least one q and two IRS sizes".into(),
        ));
    }
    q_grid
        .par_iter()
        .map(|&q| {
            if !(0.0..=1.0).contains(&q) {
                return Err(Error::InvalidArgument(format!(
                    "q must lie in [0, 1], got {q}"
                )));
            }
            let pts = n_grid
                .iter()
                .map(|&n| Ok((n as f64, lambda_max_square(n, q, wavelength)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok((q, power_law_fit(&pts)?.u))
        })
        .collect()
}

/// `(N, λ_max)` samples of the sinc covariance over square arrays at fixed
/// half-wavelength spacing, plus their power-law fit.
pub fn eigenvalue_growth(
    n_grid: &[usize],
    wavelength: f64,
) -> Result<(Vec<(f64, f64)>, PowerLawFit)> {
    let pts = n_grid
        .par_iter()
        .map(|&n| Ok((n as f64, lambda_max_square(n, 0.0, wavelength)?)))
        .collect::<Result<Vec<_>>>()?;
    let fit = power_law_fit(&pts)?;
    Ok((pts, fit))
}
