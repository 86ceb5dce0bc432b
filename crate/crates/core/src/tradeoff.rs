//! IRS-size versus transmit-array-size trade-off.
//!
//! With the capacity Gaussian in hand both directions reduce to scalar
//! equations in a continuous antenna count `x`:
//!
//! * ergodic target `C̄`: `x = (2^C̄ - 1)/(ρ·[α_d A_M + κ_r ᾱ_N N² + ᾱ_N h̄ᴴRh̄])`,
//!   closed form since the bracket does not depend on `x`;
//! * outage target `(R, p)`: smallest positive root of
//!   `R + C/(1+ρμx)·√(Bx² + ω α_d A_M x) = log2(1 + ρμx)` with
//!   `C = ρ·Q⁻¹(p)·log2 e` and `B = (ω+1)·ᾱ_N h̄ᴴRh̄ + α_d A_M`,
//!   which is the outage constraint written through `σ_C(x)`.
//!
//! The root is bracketed by doubling and then bisected; Newton is no use
//! here because the left side has a square-root kink at the origin.

use crate::analytics::{q_function, q_inverse};
use crate::channel::SystemConfig;
use crate::covariance::CovarianceModel;
use crate::statistics::CapacityLaw;
use crate::{Error, Result};

/// Distance-based path-loss model `α_i = α_ref / D_i^{ε_i}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    /// Reference path loss, linear scale.
    pub alpha_ref: f64,
    /// BS→IRS distance in meters.
    pub d_s: f64,
    /// BS→user distance in meters.
    pub d_d: f64,
    /// IRS→user distance in meters.
    pub d_r: f64,
    pub eps_s: f64,
    pub eps_d: f64,
    pub eps_r: f64,
}

impl LinkBudget {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alpha_ref: f64,
        d_s: f64,
        d_d: f64,
        d_r: f64,
        eps_s: f64,
        eps_d: f64,
        eps_r: f64,
    ) -> Result<Self> {
        if !(alpha_ref.is_finite() && alpha_ref > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "reference path loss must be positive, got {alpha_ref}"
            )));
        }
        for (name, d) in [("d_s", d_s), ("d_d", d_d), ("d_r", d_r)] {
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be positive, got {d}"
                )));
            }
        }
        for (name, e) in [("eps_s", eps_s), ("eps_d", eps_d), ("eps_r", eps_r)] {
            if !(e.is_finite() && e >= 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be nonnegative, got {e}"
                )));
            }
        }
        Ok(Self {
            alpha_ref,
            d_s,
            d_d,
            d_r,
            eps_s,
            eps_d,
            eps_r,
        })
    }

    /// `(α_d, α_s, α_r)` derived from distances and exponents.
    pub fn alphas(&self) -> (f64, f64, f64) {
        (
            self.alpha_ref / self.d_d.powf(self.eps_d),
            self.alpha_ref / self.d_s.powf(self.eps_s),
            self.alpha_ref / self.d_r.powf(self.eps_r),
        )
    }
}

/// One point of a trade-off curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffPoint {
    /// IRS size the point was solved at.
    pub n: usize,
    /// Real-valued antenna-count solution.
    pub m_real: f64,
    /// `max(1, ceil(m_real))`: an array has at least one antenna.
    pub m_min: usize,
}

impl TradeoffPoint {
    fn new(n: usize, m_real: f64) -> Self {
        Self {
            n,
            m_real,
            m_min: (m_real.ceil() as usize).max(1),
        }
    }
}

/// Mean SNR gain `μ = α_d A_M + κ_r ᾱ_N N² + ᾱ_N h̄ᴴRh̄`.
fn mean_snr_gain(cfg: &SystemConfig, cov: &CovarianceModel) -> Result<(f64, f64)> {
    if cov.dim() != cfg.n() {
        return Err(Error::DimensionMismatch {
            expected: cfg.n(),
            actual: cov.dim(),
        });
    }
    let n = cfg.n() as f64;
    let h_bar = cfg.irs_aod_response()?;
    let scaled_quad = cfg.alpha_bar_n() * cov.quadratic_form(&h_bar)?.max(0.0);
    let mu = cfg.gain_direct() + cfg.kappa_r * cfg.alpha_bar_n() * n * n + scaled_quad;
    Ok((mu, scaled_quad))
}

/// Ergodic capacity `C̄ = log2(1 + ρmμ)` at a real antenna count `m`.
pub fn ergodic_capacity(cfg: &SystemConfig, cov: &CovarianceModel, m: f64) -> Result<f64> {
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "antenna count must be positive, got {m}"
        )));
    }
    let (mu, _) = mean_snr_gain(cfg, cov)?;
    Ok((cfg.rho * m * mu).ln_1p() * std::f64::consts::LOG2_E)
}

/// Minimal real-valued antenna count reaching ergodic capacity `target_cbar`.
pub fn m_erg(cfg: &SystemConfig, cov: &CovarianceModel, target_cbar: f64) -> Result<TradeoffPoint> {
    if !(target_cbar.is_finite() && target_cbar > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "target ergodic capacity must be positive, got {target_cbar}"
        )));
    }
    let (mu, _) = mean_snr_gain(cfg, cov)?;
    let m_real = (2f64.powf(target_cbar) - 1.0) / (cfg.rho * mu);
    Ok(TradeoffPoint::new(cfg.n(), m_real))
}

/// Outage probability `Pr{C < R} = Q((μ_C - R)/σ_C)` under the Gaussian law.
pub fn outage_probability(law: &CapacityLaw, target_rate: f64) -> f64 {
    q_function((law.mu_c - target_rate) / law.sigma_c)
}

/// Minimal real-valued antenna count meeting outage `p_out` at rate
/// `target_rate`.
///
/// Solves `g(x) = log2(1+ρμx) - R - C/(1+ρμx)·√(Bx² + ω α_d A_M x) = 0`;
/// `g(0⁺) = -R < 0` always, and the bracket is grown by doubling from
/// `x = 1`. An exhausted bracket means the combination of rate and outage is
/// unreachable at this IRS size and is reported as an error, never as a
/// silent zero.
pub fn m_out(
    cfg: &SystemConfig,
    cov: &CovarianceModel,
    target_rate: f64,
    p_out: f64,
) -> Result<TradeoffPoint> {
    if !(target_rate.is_finite() && target_rate > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "target rate must be positive, got {target_rate}"
        )));
    }
    if !(p_out.is_finite() && p_out > 0.0 && p_out <= 0.5) {
        return Err(Error::InvalidArgument(format!(
            "outage probability must lie in (0, 1/2], got {p_out}"
        )));
    }
    let (mu, scaled_quad) = mean_snr_gain(cfg, cov)?;
    let n = cfg.n() as f64;
    let g_d = cfg.gain_direct();
    let omega = 2.0 * cfg.kappa_r * cfg.alpha_bar_n() * n * n + scaled_quad;
    let big_b = (omega + 1.0) * scaled_quad + g_d;
    let big_c = cfg.rho * q_inverse(p_out)? * std::f64::consts::LOG2_E;

    let g = |x: f64| {
        let denom = 1.0 + cfg.rho * mu * x;
        denom.log2() - target_rate - big_c / denom * (big_b * x * x + omega * g_d * x).sqrt()
    };

    let mut hi = 1.0;
    while g(hi) < 0.0 {
        hi *= 2.0;
        if hi > 1e9 {
            return Err(Error::Numerical(format!(
                "outage target (R = {target_rate}, p = {p_out}) unreachable at N = {}",
                cfg.n()
            )));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi.max(1.0) {
            break;
        }
    }
    Ok(TradeoffPoint::new(cfg.n(), 0.5 * (lo + hi)))
}
