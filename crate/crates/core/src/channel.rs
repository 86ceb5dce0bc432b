//! Channel samplers and the end-to-end capacity.
//!
//! Three links compose the channel to a single-antenna user:
//!
//! * direct BS→user, i.i.d. Rayleigh: `h_d,m = √(α_d A_M)·CN(0,1)`;
//! * BS→IRS, pure LoS rank-one: `T = √(α_s A_N)·a_N(aoa)·a_M(aod_bs)ᴴ`;
//! * IRS→user, correlated Rician:
//!   `h_r = √(α_r A_N)(√(κ/(κ+1))·h̄_r + √(1/(κ+1))·S·z)` with `S·Sᴴ = R`.
//!
//! The IRS applies per-element phase shifts `β`, giving
//! `h_m = h_d,m + Σ_n e^{-jβ_n} h_r,n t_nm`, SNR gain `Γ = ‖h‖²/M`, and
//! capacity `C = log2(1 + ρMΓ)`.
//!
//! `CN(0,1)` means unit *total* variance: real and imaginary parts each carry
//! variance 1/2. The decomposed sampler [`sample_gamma_decomposed`] draws `Γ`
//! straight from its two-branch representation and must agree with the full
//! channel pipeline in distribution; the pair is used as a cross-check oracle.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::analytics::SnrLawParams;
use crate::covariance::CovarianceModel;
use crate::geometry::{array_response, Angles, ArrayGeometry};
use crate::{Error, Result};

/// Full scenario description: geometries, path losses, Rician factor,
/// transmit power, and the three LoS angle pairs.
#[derive(Debug, Clone)]
pub struct SystemConfig {
    pub bs: ArrayGeometry,
    pub irs: ArrayGeometry,
    /// Carrier wavelength in meters.
    pub wavelength: f64,
    /// Direct-link path loss (per unit element area).
    pub alpha_d: f64,
    /// BS→IRS path loss.
    pub alpha_s: f64,
    /// IRS→user path loss.
    pub alpha_r: f64,
    /// Rician factor of the IRS→user link.
    pub kappa_r: f64,
    /// Total transmit power, noise-normalized.
    pub rho: f64,
    /// Angle of arrival at the IRS (from the BS).
    pub aoa_irs: Angles,
    /// Angle of departure from the IRS (toward the user).
    pub aod_irs: Angles,
    /// Angle of departure from the BS (toward the IRS).
    pub aod_bs: Angles,
}

impl SystemConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        bs: ArrayGeometry,
        irs: ArrayGeometry,
        wavelength: f64,
        alpha_d: f64,
        alpha_s: f64,
        alpha_r: f64,
        kappa_r: f64,
        rho: f64,
        aoa_irs: Angles,
        aod_irs: Angles,
        aod_bs: Angles,
    ) -> Result<Self> {
        if !(wavelength.is_finite() && wavelength > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "wavelength must be positive, got {wavelength}"
            )));
        }
        for (name, v) in [
            ("alpha_d", alpha_d),
            ("alpha_s", alpha_s),
            ("alpha_r", alpha_r),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !(kappa_r.is_finite() && kappa_r >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "kappa_r must be nonnegative, got {kappa_r}"
            )));
        }
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "rho must be positive, got {rho}"
            )));
        }
        bs.check_spacing(wavelength)?;
        irs.check_spacing(wavelength)?;
        Ok(Self {
            bs,
            irs,
            wavelength,
            alpha_d,
            alpha_s,
            alpha_r,
            kappa_r,
            rho,
            aoa_irs,
            aod_irs,
            aod_bs,
        })
    }

    /// Reference scenario: half-wavelength spacings at λ = 0.1 m, unit
    /// `α·Area` products, 0 dB Rician factor, ρ = 1, and the angle triple
    /// (π/6, π/3), (π/8, 2π/3), (π/7, π/5).
    pub fn baseline(bs_nx: usize, bs_ny: usize, irs_nx: usize, irs_ny: usize) -> Result<Self> {
        use std::f64::consts::PI;
        let lambda = 0.1;
        let d = lambda / 2.0;
        let bs = ArrayGeometry::new(bs_nx, bs_ny, d, d)?;
        let irs = ArrayGeometry::new(irs_nx, irs_ny, d, d)?;
        let unit_area = 1.0 / (d * d);
        Self::new(
            bs,
            irs,
            lambda,
            unit_area,
            unit_area,
            unit_area,
            1.0,
            1.0,
            Angles::new(PI / 6.0, PI / 3.0)?,
            Angles::new(PI / 8.0, 2.0 * PI / 3.0)?,
            Angles::new(PI / 7.0, PI / 5.0)?,
        )
    }

    pub fn m(&self) -> usize {
        self.bs.len()
    }

    pub fn n(&self) -> usize {
        self.irs.len()
    }

    /// BS element area `A_M`.
    pub fn a_m(&self) -> f64 {
        self.bs.element_area()
    }

    /// IRS element area `A_N`.
    pub fn a_n(&self) -> f64 {
        self.irs.element_area()
    }

    /// `α_d A_M`, the direct-link gain per antenna.
    pub fn gain_direct(&self) -> f64 {
        self.alpha_d * self.a_m()
    }

    /// `α_s A_N`.
    pub fn gain_bs_irs(&self) -> f64 {
        self.alpha_s * self.a_n()
    }

    /// `α_r A_N`.
    pub fn gain_reflect(&self) -> f64 {
        self.alpha_r * self.a_n()
    }

    /// `ᾱ_N = α_r α_s A_N² / (1 + κ_r)`.
    pub fn alpha_bar_n(&self) -> f64 {
        self.alpha_r * self.alpha_s * self.a_n() * self.a_n() / (1.0 + self.kappa_r)
    }

    /// IRS response toward the BS, `ḡ_r = a_N(aoa)`.
    pub fn irs_aoa_response(&self) -> Result<Vec<Complex64>> {
        array_response(&self.irs, self.aoa_irs, self.wavelength)
    }

    /// IRS response toward the user, `h̄_r = a_N(aod_irs)`.
    pub fn irs_aod_response(&self) -> Result<Vec<Complex64>> {
        array_response(&self.irs, self.aod_irs, self.wavelength)
    }

    /// BS response toward the IRS, `a_M(aod_bs)`.
    pub fn bs_aod_response(&self) -> Result<Vec<Complex64>> {
        array_response(&self.bs, self.aod_bs, self.wavelength)
    }
}

/// One draw of the channel with its derived SNR gain and capacity.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    pub h_direct: Vec<Complex64>,
    pub t_matrix: DMatrix<Complex64>,
    pub h_reflect: Vec<Complex64>,
    pub h_end: Vec<Complex64>,
    pub gamma: f64,
    pub capacity: f64,
}

/// Standard circularly-symmetric complex Gaussian: unit total variance.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Direct-link draw: `M` i.i.d. entries with per-entry variance `α_d A_M`.
pub fn sample_direct<R: Rng + ?Sized>(cfg: &SystemConfig, rng: &mut R) -> Vec<Complex64> {
    let scale = cfg.gain_direct().sqrt();
    (0..cfg.m()).map(|_| complex_normal(rng) * scale).collect()
}

/// Deterministic BS→IRS LoS matrix `T`, rank one with entries of modulus
/// `√(α_s A_N)`.
pub fn los_bs_irs(cfg: &SystemConfig) -> Result<DMatrix<Complex64>> {
    let a_irs = cfg.irs_aoa_response()?;
    let a_bs = cfg.bs_aod_response()?;
    let scale = cfg.gain_bs_irs().sqrt();
    Ok(DMatrix::from_fn(cfg.n(), cfg.m(), |n, m| {
        scale * a_irs[n] * a_bs[m].conj()
    }))
}

/// Correlated Rician draw of the IRS→user link.
pub fn sample_reflect<R: Rng + ?Sized>(
    cfg: &SystemConfig,
    cov: &CovarianceModel,
    rng: &mut R,
) -> Result<Vec<Complex64>> {
    if cov.dim() != cfg.n() {
        return Err(Error::DimensionMismatch {
            expected: cfg.n(),
            actual: cov.dim(),
        });
    }
    let h_bar = cfg.irs_aod_response()?;
    let z: Vec<Complex64> = (0..cfg.n()).map(|_| complex_normal(rng)).collect();
    let fluct = cov.apply_sqrt(&z)?;
    let scale = cfg.gain_reflect().sqrt();
    let los = (cfg.kappa_r / (cfg.kappa_r + 1.0)).sqrt();
    let nlos = (1.0 / (cfg.kappa_r + 1.0)).sqrt();
    Ok((0..cfg.n())
        .map(|i| scale * (los * h_bar[i] + nlos * fluct[i]))
        .collect())
}

/// End-to-end channel `h_m = h_d,m + Σ_n e^{-jβ_n} h_r,n t_nm`.
pub fn end_to_end(
    cfg: &SystemConfig,
    h_direct: &[Complex64],
    t_matrix: &DMatrix<Complex64>,
    h_reflect: &[Complex64],
    beta: &[f64],
) -> Result<Vec<Complex64>> {
    let (m, n) = (cfg.m(), cfg.n());
    if h_direct.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: h_direct.len(),
        });
    }
    if h_reflect.len() != n || beta.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: h_reflect.len().min(beta.len()),
        });
    }
    if t_matrix.nrows() != n || t_matrix.ncols() != m {
        return Err(Error::DimensionMismatch {
            expected: n * m,
            actual: t_matrix.nrows() * t_matrix.ncols(),
        });
    }
    let weighted = DVector::from_fn(n, |i, _| {
        Complex64::from_polar(1.0, -beta[i]) * h_reflect[i]
    });
    let reflected = t_matrix.tr_mul(&weighted);
    Ok((0..m).map(|i| h_direct[i] + reflected[i]).collect())
}

/// SNR gain `Γ = ‖h‖²/M` and capacity `C = log2(1 + ρMΓ)` in bits.
pub fn capacity(cfg: &SystemConfig, h: &[Complex64]) -> (f64, f64) {
    let m = cfg.m() as f64;
    let gamma: f64 = h.iter().map(|z| z.norm_sqr()).sum::<f64>() / m;
    let c = (cfg.rho * m * gamma).ln_1p() * std::f64::consts::LOG2_E;
    (gamma, c)
}

/// Sample a full channel realization for phase shifts `beta`.
///
/// Streams: `rng_direct` feeds the direct link, `rng_reflect` the IRS NLoS
/// fading, so the two links can be assigned independent counter streams.
pub fn sample_realization<R: Rng + ?Sized>(
    cfg: &SystemConfig,
    cov: &CovarianceModel,
    beta: &[f64],
    rng_direct: &mut R,
    rng_reflect: &mut R,
) -> Result<ChannelRealization> {
    let t_matrix = los_bs_irs(cfg)?;
    let h_direct = sample_direct(cfg, rng_direct);
    let h_reflect = sample_reflect(cfg, cov, rng_reflect)?;
    let h_end = end_to_end(cfg, &h_direct, &t_matrix, &h_reflect, beta)?;
    let (gamma, cap) = capacity(cfg, &h_end);
    Ok(ChannelRealization {
        h_direct,
        t_matrix,
        h_reflect,
        h_end,
        gamma,
        capacity: cap,
    })
}

/// Draw `Γ` from its two-branch decomposition
/// `Γ = (α_d A_M/M)·V0 + Λ(β)·V1`: `V0` sums `M-1` squared `CN(0,1)`
/// magnitudes, `V1 = |√λ + CN(0,1)|²`.
///
/// Distributionally identical to running the full channel pipeline; for
/// `M = 1` the central branch is empty.
pub fn sample_gamma_decomposed<R: Rng + ?Sized>(
    params: &SnrLawParams,
    cfg: &SystemConfig,
    rng: &mut R,
) -> f64 {
    let m = cfg.m();
    let mut v0 = 0.0;
    for _ in 0..m.saturating_sub(1) {
        v0 += complex_normal(rng).norm_sqr();
    }
    let mean = params.lambda_nc.sqrt();
    let v1 = (complex_normal(rng) + Complex64::new(mean, 0.0)).norm_sqr();
    cfg.gain_direct() / m as f64 * v0 + params.lambda_big * v1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariance::{sinc_covariance, CovarianceModel};
    use crate::geometry::optimal_phase_shifts;
    use nalgebra::DMatrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn direct_link_moments() {
        let cfg = SystemConfig::baseline(2, 2, 4, 4).unwrap();
        let mut r = rng(7);
        let trials = 100_000;
        let mut mean = Complex64::default();
        let mut power = 0.0;
        for _ in 0..trials {
            let h = sample_direct(&cfg, &mut r);
            for z in &h {
                mean += z;
                power += z.norm_sqr();
            }
        }
        let count = (trials * cfg.m()) as f64;
        mean /= count;
        power /= count;
        let g = cfg.gain_direct(); // unit under baseline normalization
        assert!((g - 1.0).abs() < 1e-12);
        let bound = 4.0 * (g / count).sqrt();
        assert!(mean.re.abs() < bound && mean.im.abs() < bound);
        assert!((power - g).abs() / g < 0.02);
    }

    #[test]
    fn los_matrix_shape() {
        let cfg = SystemConfig::baseline(2, 2, 8, 8).unwrap();
        let t = los_bs_irs(&cfg).unwrap();
        let scale = cfg.gain_bs_irs().sqrt();
        assert!((t[(0, 0)] - Complex64::new(scale, 0.0)).norm() < 1e-12);
        for z in t.iter() {
            assert!((z.norm() - scale).abs() < 1e-12);
        }
        let svd = t.clone().svd(false, false);
        let s = &svd.singular_values;
        assert!(s[1] <= 1e-10 * s[0], "rank > 1: {s:?}");
        let frob2: f64 = t.iter().map(|z| z.norm_sqr()).sum();
        let expect = cfg.gain_bs_irs() * (cfg.n() * cfg.m()) as f64;
        assert!((frob2 - expect).abs() / expect < 1e-12);
    }

    #[test]
    fn reflect_pure_los_limit() {
        let mut cfg = SystemConfig::baseline(2, 2, 4, 4).unwrap();
        cfg.kappa_r = 1e12;
        let cov = sinc_covariance(&cfg.irs, cfg.wavelength).unwrap();
        let h_bar = cfg.irs_aod_response().unwrap();
        let scale = cfg.gain_reflect().sqrt();
        let mut r = rng(3);
        let h = sample_reflect(&cfg, &cov, &mut r).unwrap();
        for (got, want) in h.iter().zip(h_bar.iter()) {
            assert!((got - want * scale).norm() <= 1e-5);
        }
    }

    #[test]
    fn reflect_rayleigh_power() {
        let mut cfg = SystemConfig::baseline(2, 2, 4, 4).unwrap();
        cfg.kappa_r = 0.0;
        let n = cfg.n();
        let eye = CovarianceModel::from_matrix(DMatrix::identity(n, n)).unwrap();
        let mut r = rng(11);
        let trials = 100_000;
        let mut power = vec![0.0; n];
        for _ in 0..trials {
            let h = sample_reflect(&cfg, &eye, &mut r).unwrap();
            for (p, z) in power.iter_mut().zip(h.iter()) {
                *p += z.norm_sqr();
            }
        }
        let g = cfg.gain_reflect();
        for p in power {
            assert!((p / trials as f64 - g).abs() / g < 0.02);
        }
    }

    /// Empirical covariance of the NLoS fluctuations against (α_r A_N/2)·R.
    #[test]
    fn reflect_covariance_matches_model() {
        let cfg = SystemConfig::baseline(2, 2, 4, 4).unwrap();
        let n = cfg.n();
        let cov = sinc_covariance(&cfg.irs, cfg.wavelength).unwrap();
        let h_bar = cfg.irs_aod_response().unwrap();
        let scale = cfg.gain_reflect().sqrt();
        let los = (cfg.kappa_r / (cfg.kappa_r + 1.0)).sqrt();
        let mut r = rng(5);
        let trials = 100_000usize;
        let mut acc = DMatrix::<Complex64>::zeros(n, n);
        for _ in 0..trials {
            let h = sample_reflect(&cfg, &cov, &mut r).unwrap();
            let fluct: Vec<Complex64> = (0..n).map(|i| h[i] - scale * los * h_bar[i]).collect();
            for i in 0..n {
                for j in 0..n {
                    acc[(i, j)] += fluct[i] * fluct[j].conj();
                }
            }
        }
        acc /= Complex64::new(trials as f64, 0.0);
        let target = cov.matrix() * Complex64::new(cfg.gain_reflect() / 2.0, 0.0);
        let err = (&acc - &target).norm() / target.norm();
        assert!(err <= 0.05, "covariance error {err}");
    }

    #[test]
    fn end_to_end_examples() {
        let cfg = SystemConfig::baseline(2, 2, 4, 4).unwrap();
        let t = los_bs_irs(&cfg).unwrap();
        let beta = vec![0.4; cfg.n()];
        let h_d: Vec<Complex64> = (0..cfg.m())
            .map(|i| Complex64::new(i as f64, -(i as f64)))
            .collect();
        let zero = vec![Complex64::default(); cfg.n()];
        let h = end_to_end(&cfg, &h_d, &t, &zero, &beta).unwrap();
        for (a, b) in h.iter().zip(h_d.iter()) {
            assert!((a - b).norm() < 1e-15);
        }

        // single-element identity case
        let cfg1 = SystemConfig::baseline(1, 1, 1, 1).unwrap();
        let t1 = los_bs_irs(&cfg1).unwrap();
        let hr = vec![Complex64::new(0.3, 0.7)];
        let h = end_to_end(&cfg1, &[Complex64::default()], &t1, &hr, &[1.1]).unwrap();
        let expect = Complex64::from_polar(1.0, -1.1) * hr[0] * t1[(0, 0)];
        assert!((h[0] - expect).norm() < 1e-15);

        assert!(end_to_end(&cfg, &h_d[..1], &t, &zero, &beta).is_err());
    }

    /// Naive double-loop oracle against the vectorized path at N = 256.
    #[test]
    fn end_to_end_loop_oracle() {
        let cfg = SystemConfig::baseline(2, 2, 8, 32).unwrap();
        let cov = sinc_covariance(&cfg.irs, cfg.wavelength).unwrap();
        let t = los_bs_irs(&cfg).unwrap();
        let beta =
            optimal_phase_shifts(&cfg.irs, cfg.aoa_irs, cfg.aod_irs, cfg.wavelength).unwrap();
        let mut rd = rng(21);
        let mut rr = rng(22);
        let h_d = sample_direct(&cfg, &mut rd);
        let h_r = sample_reflect(&cfg, &cov, &mut rr).unwrap();
        let fast = end_to_end(&cfg, &h_d, &t, &h_r, &beta).unwrap();
        for m in 0..cfg.m() {
            let mut acc = h_d[m];
            for n in 0..cfg.n() {
                acc += Complex64::from_polar(1.0, -beta[n]) * h_r[n] * t[(n, m)];
            }
            assert!((acc - fast[m]).norm() < 1e-10);
        }
    }

    #[test]
    fn capacity_examples() {
        let cfg = SystemConfig::baseline(2, 2, 4, 4).unwrap();
        let zero = vec![Complex64::default(); cfg.m()];
        assert_eq!(capacity(&cfg, &zero), (0.0, 0.0));

        // ρMΓ = 1 → exactly one bit; per-entry power 1/(ρM) gives Γ = 1/(ρM)
        let m = cfg.m() as f64;
        let h: Vec<Complex64> = (0..cfg.m())
            .map(|_| Complex64::new((1.0 / (cfg.rho * m)).sqrt(), 0.0))
            .collect();
        let (gamma, c) = capacity(&cfg, &h);
        assert!((cfg.rho * m * gamma - 1.0).abs() < 1e-12);
        assert!((c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn capacity_monotone_in_channel_norm() {
        let cfg = SystemConfig::baseline(2, 2, 4, 4).unwrap();
        let mut r = rng(17);
        let base: Vec<Complex64> = (0..cfg.m()).map(|_| complex_normal(&mut r)).collect();
        let mut prev = capacity(&cfg, &base).1;
        for scale in [1.1, 1.5, 2.0, 10.0] {
            let h: Vec<Complex64> = base.iter().map(|z| z * scale).collect();
            let c = capacity(&cfg, &h).1;
            assert!(c > prev);
            prev = c;
        }
    }

    /// Single antenna with zero noncentrality and unit scale: the central
    /// branch is empty and the draw is a plain squared `CN(0,1)` magnitude.
    #[test]
    fn decomposed_single_antenna_unit_case() {
        let cfg = SystemConfig::baseline(1, 1, 2, 2).unwrap();
        let params = SnrLawParams {
            e_val: 0.0,
            f0_val: 0.0,
            f1_val: 0.0,
            lambda_big: 1.0,
            lambda_nc: 0.0,
            tau_m: 1.0,
            mu_gamma: 1.0,
            sigma2_gamma: 1.0,
        };
        let mut r = rng(41);
        let trials = 200_000;
        let mut acc = 0.0;
        for _ in 0..trials {
            acc += sample_gamma_decomposed(&params, &cfg, &mut r);
        }
        let mean = acc / trials as f64;
        assert!((mean - 1.0).abs() < 0.01, "mean = {mean}");
    }

    /// With κ→∞ and a vanishing direct link the channel is deterministic.
    #[test]
    fn deterministic_limit() {
        let mut cfg = SystemConfig::baseline(2, 2, 4, 4).unwrap();
        cfg.kappa_r = 1e12;
        cfg.alpha_d = 1e-12;
        let cov = sinc_covariance(&cfg.irs, cfg.wavelength).unwrap();
        let beta =
            optimal_phase_shifts(&cfg.irs, cfg.aoa_irs, cfg.aod_irs, cfg.wavelength).unwrap();
        let mut rd = rng(31);
        let mut rr = rng(32);
        let mut stats = crate::harness::stats::RunningStats::new();
        for _ in 0..2000 {
            let real = sample_realization(&cfg, &cov, &beta, &mut rd, &mut rr).unwrap();
            stats.push(real.gamma);
        }
        let rel = stats.variance() / (stats.mean() * stats.mean());
        assert!(rel <= 1e-6, "relative fluctuation {rel}");
    }
}
