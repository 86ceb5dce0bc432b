//! Gaussian capacity law and hardening-order bounds.
//!
//! Under the angle-only phase shifts the capacity is approximately Gaussian
//! with
//!
//! ```text
//! μ_C = log2(1 + ρMμ)
//! σ_C = ρM·log2(e)/(1 + ρMμ) · √(ωη + η + ((M-1)/M)·α_d A_M)
//! μ = α_d A_M + κ_r ᾱ_N N² + ᾱ_N h̄ᴴRh̄
//! η = α_d A_M / M + ᾱ_N h̄ᴴRh̄
//! ω = 2κ_r ᾱ_N N² + ᾱ_N h̄ᴴRh̄
//! ```
//!
//! The rank-one correction multiplies the variance by `κ_r/(κ_r + ϑ)` with
//! `ϑ = α_d A_M/(2ᾱ_N N²)`; it matters only when the covariance spectrum and
//! surface area both scale linearly (q = u = 1) and collapses to the plain
//! law as `N` grows otherwise. It is applied on request, never auto-detected.

use crate::channel::SystemConfig;
use crate::covariance::{CovarianceModel, IrsScaling};
use crate::{Error, Result};

/// Gaussian capacity approximation at one scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityLaw {
    /// Mean capacity in bits.
    pub mu_c: f64,
    /// Standard deviation in bits.
    pub sigma_c: f64,
    /// Rank-one-corrected standard deviation; `None` when `κ_r = 0`, where
    /// the correction is undefined.
    pub sigma_c_hat: Option<f64>,
    /// `μ`, the mean SNR gain.
    pub mu_aux: f64,
    /// `η`.
    pub eta_aux: f64,
    /// `ω`.
    pub omega_aux: f64,
    /// `ϑ = α_d A_M / (2 ᾱ_N N²)`.
    pub vartheta: f64,
}

/// Capacity law with a real-valued transmit-antenna count.
///
/// The trade-off solvers treat `M` as continuous; [`capacity_law`] is
/// this at `m = M`.
pub fn capacity_law_for_tx(
    cfg: &SystemConfig,
    cov: &CovarianceModel,
    m: f64,
) -> Result<CapacityLaw> {
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "transmit antenna count must be positive, got {m}"
        )));
    }
    if cov.dim() != cfg.n() {
        return Err(Error::DimensionMismatch {
            expected: cfg.n(),
            actual: cov.dim(),
        });
    }
    let n = cfg.n() as f64;
    let g_d = cfg.gain_direct();
    let abar = cfg.alpha_bar_n();
    let h_bar = cfg.irs_aod_response()?;
    let quad = cov.quadratic_form(&h_bar)?.max(0.0);
    let e_star = abar * quad;
    let kappa_term = cfg.kappa_r * abar * n * n;

    let mu = g_d + kappa_term + e_star;
    let eta = g_d / m + e_star;
    let omega = 2.0 * kappa_term + e_star;

    let rho_m = cfg.rho * m;
    let denom = 1.0 + rho_m * mu;
    let mu_c = denom.log2();
    let inner = omega * eta + eta + (m - 1.0) / m * g_d;
    let sigma_c = rho_m * std::f64::consts::LOG2_E / denom * inner.sqrt();

    let vartheta = g_d / (2.0 * abar * n * n);
    let sigma_c_hat = if cfg.kappa_r > 0.0 {
        Some((cfg.kappa_r / (cfg.kappa_r + vartheta)).sqrt() * sigma_c)
    } else {
        None
    };

    Ok(CapacityLaw {
        mu_c,
        sigma_c,
        sigma_c_hat,
        mu_aux: mu,
        eta_aux: eta,
        omega_aux: omega,
        vartheta,
    })
}

/// Gaussian capacity law at the configured transmit array size.
pub fn capacity_law(cfg: &SystemConfig, cov: &CovarianceModel) -> Result<CapacityLaw> {
    capacity_law_for_tx(cfg, cov, cfg.m() as f64)
}

/// Hardening-order bounds: mean floor `b + (1-q)·log2 N` and variance
/// ceiling shape `N^{-(1-u)}`.
///
/// `b = log2((α_r α_s/(1+κ_r))·ρ·M·κ_r·A_0²)` from the growth of the LoS
/// term; the multiplicative constant `c` of the ceiling is for the caller to
/// calibrate, so the shape is returned bare. The fitted coefficient `a` of
/// `λ_max ≈ aN^u` does not enter either bound.
pub fn hardening_bounds(
    cfg: &SystemConfig,
    scaling: &IrsScaling,
    eig_fit: (f64, f64),
    n: usize,
) -> Result<(f64, f64)> {
    let (_a, u) = eig_fit;
    if scaling.q >= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "mean floor requires q < 1, got {}",
            scaling.q
        )));
    }
    if !(0.0..1.0).contains(&u) {
        return Err(Error::InvalidArgument(format!(
            "variance ceiling requires 0 <= u < 1, got {u}"
        )));
    }
    if n < 1 {
        return Err(Error::InvalidArgument("IRS size must be at least 1".into()));
    }
    let nf = n as f64;
    let m = cfg.m() as f64;
    let b = (cfg.alpha_r * cfg.alpha_s / (1.0 + cfg.kappa_r)
        * cfg.rho
        * m
        * cfg.kappa_r
        * scaling.a0
        * scaling.a0)
        .log2();
    let mean_floor = b + (1.0 - scaling.q) * nf.log2();
    let var_ceiling_shape = nf.powf(u - 1.0);
    Ok((mean_floor, var_ceiling_shape))
}

/// Mean floor with the additive constant calibrated on a known point of the
/// analytic curve instead of the loose closed-form `b`: anchored at
/// `(n0, mu_c_at_n0)`, the floor is `mu_c(n0) + (1-q)·(log2 n - log2 n0)`.
pub fn calibrated_mean_floor(scaling: &IrsScaling, anchor: (usize, f64), n: usize) -> Result<f64> {
    let (n0, mu_c_at_n0) = anchor;
    if scaling.q >= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "mean floor requires q < 1, got {}",
            scaling.q
        )));
    }
    if n0 < 1 || n < 1 {
        return Err(Error::InvalidArgument(
            "IRS sizes must be at least 1".into(),
        ));
    }
    Ok(mu_c_at_n0 + (1.0 - scaling.q) * ((n as f64).log2() - (n0 as f64).log2()))
}

/// Gaussian density of the capacity law at `c` bits.
pub fn gaussian_capacity_pdf(law: &CapacityLaw, c: f64, corrected: bool) -> Result<f64> {
    let sigma = if corrected {
        law.sigma_c_hat.ok_or_else(|| {
            Error::InvalidArgument("rank-one corrected deviation undefined for kappa_r = 0".into())
        })?
    } else {
        law.sigma_c
    };
    let z = (c - law.mu_c) / sigma;
    Ok((-0.5 * z * z).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt()))
}
