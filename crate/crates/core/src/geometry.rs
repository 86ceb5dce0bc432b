//! Planar-array geometry for the base station and the IRS.
//!
//! Elements are numbered `1..=nx*ny` row-major: element `k` sits at column
//! `i(k) = (k-1) mod nx` and row `j(k) = floor((k-1)/nx)`. The exponent
//! function of element `k` toward azimuth `φ` and elevation `θ` is
//!
//! ```text
//! Π_k(φ, θ) = i(k)·dx·cosθ·sinφ + j(k)·dy·sinθ
//! ```
//!
//! and the array response stacks `exp(j·(2π/λ)·Π_k)`. The phase-shift rule
//! [`optimal_phase_shifts`] aligns the IRS arrival and departure responses so
//! that every summand of the LoS reflection sum lands in phase; this is the
//! angle-only configuration under which the end-to-end channel hardens.

use num_complex::Complex64;

use crate::{Error, Result};

/// Rectangular planar array layout: element counts and spacings in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayGeometry {
    /// Horizontal element count.
    pub nx: usize,
    /// Vertical element count.
    pub ny: usize,
    /// Horizontal spacing in meters.
    pub dx: f64,
    /// Vertical spacing in meters.
    pub dy: f64,
}

impl ArrayGeometry {
    pub fn new(nx: usize, ny: usize, dx: f64, dy: f64) -> Result<Self> {
        if nx < 1 || ny < 1 {
            return Err(Error::InvalidArgument(format!(
                "array needs at least one element per axis, got {nx}x{ny}"
            )));
        }
        if !(dx.is_finite() && dx > 0.0) || !(dy.is_finite() && dy > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "element spacings must be positive, got dx={dx}, dy={dy}"
            )));
        }
        Ok(Self { nx, ny, dx, dy })
    }

    /// Square array with equal spacing on both axes.
    pub fn square(nx: usize, d: f64) -> Result<Self> {
        Self::new(nx, nx, d, d)
    }

    /// Total number of elements `nx * ny`.
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Area of a single element, `dx * dy`.
    pub fn element_area(&self) -> f64 {
        self.dx * self.dy
    }

    /// Spacings must not exceed half the carrier wavelength, otherwise the
    /// element-area expressions of the channel model stop being valid.
    pub fn check_spacing(&self, wavelength: f64) -> Result<()> {
        let half = wavelength / 2.0;
        // allow for round-off in spacings derived as (λ/2)/N^{q/2}
        if self.dx > half * (1.0 + 1e-12) || self.dy > half * (1.0 + 1e-12) {
            return Err(Error::InvalidArgument(format!(
                "spacings ({}, {}) exceed half wavelength {half}",
                self.dx, self.dy
            )));
        }
        Ok(())
    }
}

/// Azimuth/elevation pair in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angles {
    pub azimuth: f64,
    pub elevation: f64,
}

impl Angles {
    pub fn new(azimuth: f64, elevation: f64) -> Result<Self> {
        if !azimuth.is_finite() || !elevation.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "angles must be finite, got ({azimuth}, {elevation})"
            )));
        }
        Ok(Self { azimuth, elevation })
    }
}

/// Column and row of 1-based element `k` on an array with `nx` columns.
pub fn index_maps(k: usize, nx: usize) -> Result<(usize, usize)> {
    if k < 1 {
        return Err(Error::InvalidIndex("element index is 1-based".into()));
    }
    if nx < 1 {
        return Err(Error::InvalidIndex("nx must be at least 1".into()));
    }
    Ok(((k - 1) % nx, (k - 1) / nx))
}

/// Exponent function `Π_k(φ, θ)` in meters for element `k` of `geom`.
pub fn exponent(geom: &ArrayGeometry, k: usize, ang: Angles) -> Result<f64> {
    if k < 1 || k > geom.len() {
        return Err(Error::InvalidIndex(format!(
            "element {k} outside 1..={}",
            geom.len()
        )));
    }
    let (i, j) = index_maps(k, geom.nx)?;
    let u = ang.elevation.cos() * ang.azimuth.sin();
    let v = ang.elevation.sin();
    Ok(i as f64 * geom.dx * u + j as f64 * geom.dy * v)
}

/// Array response at `(φ, θ)`: entry `k` is `exp(j·(2π/λ)·Π_k(φ, θ))`.
pub fn array_response(
    geom: &ArrayGeometry,
    ang: Angles,
    wavelength: f64,
) -> Result<Vec<Complex64>> {
    if !(wavelength.is_finite() && wavelength > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "wavelength must be positive, got {wavelength}"
        )));
    }
    let wavenumber = 2.0 * std::f64::consts::PI / wavelength;
    let u = ang.elevation.cos() * ang.azimuth.sin();
    let v = ang.elevation.sin();
    let mut out = Vec::with_capacity(geom.len());
    for j in 0..geom.ny {
        let row_phase = wavenumber * j as f64 * geom.dy * v;
        for i in 0..geom.nx {
            let phase = wavenumber * i as f64 * geom.dx * u + row_phase;
            out.push(Complex64::from_polar(1.0, phase));
        }
    }
    Ok(out)
}

/// Hardening phase shifts `β*_n = (2π/λ)(Π_n(aoa) + Π_n(aod_user))`.
///
/// With these shifts the reflected LoS summands are all in phase, so the
/// aggregate `|Σ_n exp(j(2π/λ)(Π_n(aoa)+Π_n(aod_user)) - jβ*_n)|` attains its
/// maximum `N`, and `ḡ_rᵀΦ(β*)` collapses onto `h̄_rᴴ`.
pub fn optimal_phase_shifts(
    irs: &ArrayGeometry,
    aoa: Angles,
    aod_user: Angles,
    wavelength: f64,
) -> Result<Vec<f64>> {
    if !(wavelength.is_finite() && wavelength > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "wavelength must be positive, got {wavelength}"
        )));
    }
    let wavenumber = 2.0 * std::f64::consts::PI / wavelength;
    (1..=irs.len())
        .map(|n| {
            let p = exponent(irs, n, aoa)? + exponent(irs, n, aod_user)?;
            Ok(wavenumber * p)
        })
        .collect()
}
