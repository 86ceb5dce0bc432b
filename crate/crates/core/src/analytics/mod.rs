//! Exact and bounding laws for the end-to-end SNR gain.
//!
//! For a fixed phase-shift vector `β` the SNR gain decomposes into two
//! independent pieces, `Γ = (α_d A_M / M)·V0 + Λ(β)·V1`: `V0` collects the
//! `M-1` pure-fading directions (chi-square, `2M-2` degrees of freedom) and
//! `V1` is the noncentral chi-square of the beamformed direction with
//! noncentrality `λ(β) = F0(β)/Λ(β)`. The module evaluates the resulting
//! generalized chi-square density by convolution quadrature, its spectral
//! mean/variance sandwich, and the special functions both need.
//!
//! All Gaussian-tail work routes through `e^{-x}I0(x)` in log space: at the
//! hardening phase shifts the noncentrality grows like `N²` and the bare
//! Bessel factor overflows around `λ ≈ 700`.

pub mod quad;
pub mod special;

pub use special::{
    bessel_i0, bessel_i0_scaled, ln_bessel_i0, ln_bessel_i0_scaled, q_function, q_inverse,
};

use num_complex::Complex64;

use crate::channel::SystemConfig;
use crate::covariance::CovarianceModel;
use crate::{Error, Result};

/// Quantities of the exact SNR law at one phase-shift vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrLawParams {
    /// `E(β) = ᾱ_N · ḡᵀΦ(β) R Φᴴ(β) ḡ*`, the NLoS beamforming gain.
    pub e_val: f64,
    /// `F0(β) = ᾱ_N κ_r |ḡᵀΦ(β) h̄|²`, the LoS beamforming gain.
    pub f0_val: f64,
    /// `F1 = F0 + E`.
    pub f1_val: f64,
    /// `Λ(β) = α_d A_M / M + E(β)`, scale of the noncentral branch.
    pub lambda_big: f64,
    /// Noncentrality `λ(β) = F0/Λ`.
    pub lambda_nc: f64,
    /// `τ_M = M / (α_d A_M)`, rate of the central branch.
    pub tau_m: f64,
    /// Mean `μ_Γ = α_d A_M + F1`.
    pub mu_gamma: f64,
    /// Variance `σ²_Γ = (α_d A_M/M)(2F1 + α_d A_M) + E(F0 + F1)`.
    pub sigma2_gamma: f64,
}

/// Spectral bounds on the mean and variance of `Γ` at the hardening shifts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSet {
    pub mu_lo: f64,
    pub mu_hi: f64,
    pub var_lo: f64,
    pub var_hi: f64,
}

/// Evaluate the SNR-law quantities for phase shifts `beta`.
pub fn snr_law_params(
    cfg: &SystemConfig,
    cov: &CovarianceModel,
    beta: &[f64],
) -> Result<SnrLawParams> {
    let n = cfg.n();
    if beta.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: beta.len(),
        });
    }
    if cov.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: cov.dim(),
        });
    }
    let g_bar = cfg.irs_aoa_response()?;
    let h_bar = cfg.irs_aod_response()?;

    // ψ_n = e^{jβ_n} ḡ_n*, so E = ᾱ_N ψᴴRψ; at β* this is ᾱ_N h̄ᴴRh̄.
    let psi: Vec<Complex64> = (0..n)
        .map(|i| Complex64::from_polar(1.0, beta[i]) * g_bar[i].conj())
        .collect();
    let abar = cfg.alpha_bar_n();
    let e_val = (abar * cov.quadratic_form(&psi)?).max(0.0);

    let s: Complex64 = (0..n)
        .map(|i| g_bar[i] * Complex64::from_polar(1.0, -beta[i]) * h_bar[i])
        .sum();
    let f0_val = abar * cfg.kappa_r * s.norm_sqr();
    let f1_val = f0_val + e_val;

    let g_d = cfg.gain_direct();
    let m = cfg.m() as f64;
    let lambda_big = g_d / m + e_val;
    let lambda_nc = f0_val / lambda_big;
    let tau_m = m / g_d;
    let mu_gamma = g_d + f1_val;
    let sigma2_gamma = g_d / m * (2.0 * f1_val + g_d) + e_val * (f0_val + f1_val);

    Ok(SnrLawParams {
        e_val,
        f0_val,
        f1_val,
        lambda_big,
        lambda_nc,
        tau_m,
        mu_gamma,
        sigma2_gamma,
    })
}

fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// Log-density of the noncentral branch: `ln f1(v)` with
/// `f1(v) = e^{-v-λ} I0(2√(λv))`, grouped as `-(√v - √λ)²` plus the scaled
/// Bessel factor so it never overflows.
fn ln_f1(v: f64, lambda_nc: f64) -> f64 {
    if v < 0.0 {
        return f64::NEG_INFINITY;
    }
    let sv = v.sqrt();
    let sl = lambda_nc.sqrt();
    // -v - λ + ln I0(2√(λv)), grouped so the exponent stays ≤ 0
    -(sv - sl) * (sv - sl) + special::ln_bessel_i0_scaled(2.0 * sl * sv)
}

struct DensityShape {
    m: usize,
    lambda_big: f64,
    lambda_nc: f64,
    tau_m: f64,
    ln_fact: f64,
    /// Upper limit of the central-branch support that carries any mass.
    v_cut: f64,
}

impl DensityShape {
    fn new(params: &SnrLawParams, m: usize) -> Self {
        let dof = (m.saturating_sub(1)) as f64;
        let v_cut = (dof + 60.0 * (dof.sqrt() + 1.0)) / params.tau_m;
        Self {
            m,
            lambda_big: params.lambda_big,
            lambda_nc: params.lambda_nc,
            tau_m: params.tau_m,
            ln_fact: ln_factorial(m.saturating_sub(2)),
            v_cut,
        }
    }

    /// `ln f0(τ v)` for the central branch.
    fn ln_f0_scaled(&self, v: f64) -> f64 {
        let tv = self.tau_m * v;
        if self.m == 2 {
            return -tv;
        }
        if tv <= 0.0 {
            return f64::NEG_INFINITY;
        }
        (self.m as f64 - 2.0) * tv.ln() - tv - self.ln_fact
    }

    fn density(&self, gamma: f64) -> Result<f64> {
        Ok(self.log_density(gamma)?.exp())
    }

    /// `ln f_Γ(γ)`, finite deep into the tails. The convolution exponent is
    /// shifted by its maximum over a probe grid before exponentiating, so
    /// the quadrature stays conditioned even where the density underflows.
    fn log_density(&self, gamma: f64) -> Result<f64> {
        if gamma < 0.0 || !gamma.is_finite() {
            return Ok(f64::NEG_INFINITY);
        }
        if self.m == 1 {
            return Ok(ln_f1(gamma / self.lambda_big, self.lambda_nc) - self.lambda_big.ln());
        }
        let hi = gamma.min(self.v_cut);
        if hi <= 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        let exponent =
            |v: f64| ln_f1((gamma - v) / self.lambda_big, self.lambda_nc) + self.ln_f0_scaled(v);
        let mode = ((self.m as f64 - 2.0) / self.tau_m).clamp(0.0, hi);
        let mut shift = exponent(mode);
        for i in 0..=32 {
            shift = shift.max(exponent(hi * i as f64 / 32.0));
        }
        if shift == f64::NEG_INFINITY {
            return Ok(f64::NEG_INFINITY);
        }
        let mut pts = vec![0.0];
        if mode > 0.0 && mode < hi {
            pts.push(mode);
        }
        pts.push(hi);
        let scaled =
            quad::integrate_segmented(|v| (exponent(v) - shift).exp(), &pts, 1e-10, 1e-280)?;
        if scaled <= 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        Ok(shift + scaled.ln() + (self.tau_m / self.lambda_big).ln())
    }
}

/// Exact density `f_Γ(γ)` of the SNR gain.
///
/// For `M ≥ 2` this is the convolution
/// `(τ_M/Λ) ∫ f1((γ-v)/Λ) f0(τ_M v) dv` over the common support `[0, γ]`;
/// for `M = 1` the central branch is empty and the density is `f1(γ/Λ)/Λ`.
pub fn exact_density(params: &SnrLawParams, cfg: &SystemConfig, gamma: f64) -> Result<f64> {
    DensityShape::new(params, cfg.m()).density(gamma)
}

/// Natural log of [`exact_density`], evaluated in log space throughout:
/// finite far beyond the point where the linear density underflows.
pub fn exact_log_density(params: &SnrLawParams, cfg: &SystemConfig, gamma: f64) -> Result<f64> {
    DensityShape::new(params, cfg.m()).log_density(gamma)
}

/// Panel boundaries that bracket the bulk of `f_Γ`.
fn support_splits(params: &SnrLawParams, upper: f64) -> Vec<f64> {
    let sd = params.sigma2_gamma.sqrt();
    let mut pts = vec![0.0];
    for k in [-10.0, -3.0, 0.0, 3.0, 10.0] {
        let x = params.mu_gamma + k * sd;
        if x > 0.0 && x < upper {
            pts.push(x);
        }
    }
    pts.push(upper);
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite split points"));
    pts
}

/// Normalization, mean, and variance of the exact density by quadrature.
///
/// Independent of the closed-form `μ_Γ`, `σ²_Γ` except for locating the
/// integration window, so it serves as an oracle for them.
pub fn density_moments(params: &SnrLawParams, cfg: &SystemConfig) -> Result<(f64, f64, f64)> {
    let shape = DensityShape::new(params, cfg.m());
    let upper = params.mu_gamma + 50.0 * params.sigma2_gamma.sqrt();
    let pts = support_splits(params, upper);
    let norm =
        quad::integrate_segmented(|g| shape.density(g).unwrap_or(f64::NAN), &pts, 1e-9, 0.0)?;
    let mean = quad::integrate_segmented(
        |g| g * shape.density(g).unwrap_or(f64::NAN),
        &pts,
        1e-9,
        0.0,
    )?;
    let second = quad::integrate_segmented(
        |g| g * g * shape.density(g).unwrap_or(f64::NAN),
        &pts,
        1e-9,
        0.0,
    )?;
    Ok((norm, mean, second - mean * mean))
}

/// CDF of the exact law at each of `points` (must be sorted ascending).
///
/// Cumulative panel integration between consecutive points, one Kronrod
/// refinement per gap.
pub fn exact_cdf_sorted(
    params: &SnrLawParams,
    cfg: &SystemConfig,
    points: &[f64],
) -> Result<Vec<f64>> {
    if points.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument(
            "CDF evaluation points must be sorted".into(),
        ));
    }
    let shape = DensityShape::new(params, cfg.m());
    let mut out = Vec::with_capacity(points.len());
    let mut acc = 0.0;
    let mut prev = 0.0;
    for &x in points {
        if x > prev {
            acc += quad::integrate(
                |g| shape.density(g).unwrap_or(f64::NAN),
                prev,
                x,
                1e-8,
                1e-14,
            )?;
            prev = x;
        }
        out.push(acc.min(1.0));
    }
    Ok(out)
}

/// CDF of the exact law at a single point.
pub fn exact_cdf(params: &SnrLawParams, cfg: &SystemConfig, gamma: f64) -> Result<f64> {
    if gamma <= 0.0 {
        return Ok(0.0);
    }
    let shape = DensityShape::new(params, cfg.m());
    let pts: Vec<f64> = support_splits(params, gamma);
    quad::integrate_segmented(|g| shape.density(g).unwrap_or(f64::NAN), &pts, 1e-9, 1e-14)
}

/// Density of the capacity `C = log2(1 + ρMΓ)` induced by the exact SNR law.
pub fn exact_capacity_density(params: &SnrLawParams, cfg: &SystemConfig, c: f64) -> Result<f64> {
    if c < 0.0 {
        return Ok(0.0);
    }
    let rho_m = cfg.rho * cfg.m() as f64;
    let pow = 2f64.powf(c);
    let gamma = (pow - 1.0) / rho_m;
    let jacobian = pow * std::f64::consts::LN_2 / rho_m;
    Ok(exact_density(params, cfg, gamma)? * jacobian)
}

/// Variance of `Γ` at the hardening shifts as a function of the NLoS gain
/// `E`; monotone increasing in `E`, which is what makes the spectral
/// sandwich valid.
fn sigma2_gamma_star(g_d: f64, m: f64, kappa_abar_n2: f64, e: f64) -> f64 {
    g_d / m * (2.0 * kappa_abar_n2 + 2.0 * e + g_d) + e * (e + 2.0 * kappa_abar_n2)
}

/// Spectral sandwich on the mean and variance of `Γ` at the hardening
/// shifts: `E(β*)` is pinned to `[ᾱ_N λ_min N, ᾱ_N λ_max N]` by the Rayleigh
/// quotient of `R` at the LoS response.
pub fn snr_moment_bounds(cfg: &SystemConfig, cov: &CovarianceModel) -> Result<BoundSet> {
    if cov.dim() != cfg.n() {
        return Err(Error::DimensionMismatch {
            expected: cfg.n(),
            actual: cov.dim(),
        });
    }
    let n = cfg.n() as f64;
    let g_d = cfg.gain_direct();
    let m = cfg.m() as f64;
    let abar = cfg.alpha_bar_n();
    let kappa_abar_n2 = cfg.kappa_r * abar * n * n;

    let e_lo = abar * cov.lambda_min()? * n;
    let e_hi = abar * cov.lambda_max()? * n;

    Ok(BoundSet {
        mu_lo: g_d + e_lo + kappa_abar_n2,
        mu_hi: g_d + e_hi + kappa_abar_n2,
        var_lo: sigma2_gamma_star(g_d, m, kappa_abar_n2, e_lo),
        var_hi: sigma2_gamma_star(g_d, m, kappa_abar_n2, e_hi),
    })
}
