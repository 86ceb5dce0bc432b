//! Spatial covariance of the IRS fading link.
//!
//! The isotropic-scattering model couples elements `n` and `n'` through
//! `sinc((2/λ)·√(Dx² + Dy²))` with `Dx`, `Dy` the axis-aligned element
//! offsets; `sinc` is the normalized convention `sin(πx)/(πx)`, which zeroes
//! the correlation of axis-aligned neighbors exactly at half-wavelength
//! spacing. The rank-one all-ones matrix is the extreme of a surface whose
//! physical dimensions stay far below the wavelength.
//!
//! [`CovarianceModel`] keeps the Hermitian matrix together with lazily
//! computed spectral data: eigendecomposition at these sizes costs up to a
//! couple of seconds, and purely analytic consumers (quadratic forms, the
//! capacity laws) never need it. The PSD square root `S` with `S·Sᴴ = R` is
//! what correlated sampling runs through; Cholesky is unusable here because
//! the sinc matrix is routinely singular to working precision.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::geometry::{index_maps, ArrayGeometry};
use crate::{Error, Result};

/// Relative threshold under which a negative eigenvalue is treated as
/// round-off and clamped to zero. Anything more negative signals a broken
/// covariance and is reported as an error.
const EIGEN_CLAMP_REL: f64 = 1e-10;

/// IRS element-area scaling law `A_N = A_0 / N^q`.
///
/// `q = 0` keeps element spacing fixed (total surface grows linearly in `N`);
/// `q = 1` keeps the total surface fixed and shrinks the elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrsScaling {
    pub a0: f64,
    pub q: f64,
}

impl IrsScaling {
    pub fn new(a0: f64, q: f64) -> Result<Self> {
        if !(a0.is_finite() && a0 > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "reference element area must be positive, got {a0}"
            )));
        }
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidArgument(format!(
                "area scaling exponent must lie in [0, 1], got {q}"
            )));
        }
        Ok(Self { a0, q })
    }
}

/// Element area and square-element spacing at IRS size `n`.
///
/// Returns `(a_n, d)` with `a_n = a0 / n^q` and `d = √a_n`, so that `q = 0`
/// with `a0 = (λ/2)²` reproduces half-wavelength spacing at every `n`.
pub fn element_area(scaling: &IrsScaling, n: usize) -> Result<(f64, f64)> {
    if n < 1 {
        return Err(Error::InvalidArgument("IRS size must be at least 1".into()));
    }
    let a_n = scaling.a0 / (n as f64).powf(scaling.q);
    Ok((a_n, a_n.sqrt()))
}

enum SqrtData {
    Real {
        basis: DMatrix<f64>,
        scale: Vec<f64>,
    },
    Complex {
        basis: DMatrix<Complex64>,
        scale: Vec<f64>,
    },
}

/// Hermitian PSD correlation matrix of the IRS NLoS link plus its spectrum.
pub struct CovarianceModel {
    matrix: DMatrix<Complex64>,
    real: Option<DMatrix<f64>>,
    eigenvalues: OnceLock<Result<Vec<f64>>>,
    sqrt: OnceLock<Result<SqrtData>>,
}

impl CovarianceModel {
    /// Wrap a Hermitian unit-diagonal matrix, validating both properties.
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        let n = matrix.nrows();
        if matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: matrix.ncols(),
            });
        }
        for i in 0..n {
            if (matrix[(i, i)] - Complex64::new(1.0, 0.0)).norm() > 1e-9 {
                return Err(Error::InvalidArgument(format!(
                    "covariance diagonal entry {i} is {} but must be 1",
                    matrix[(i, i)]
                )));
            }
            for j in i..n {
                if (matrix[(i, j)] - matrix[(j, i)].conj()).norm() > 1e-12 {
                    return Err(Error::NotHermitian);
                }
            }
        }
        let real = if matrix.iter().all(|z| z.im == 0.0) {
            Some(DMatrix::from_fn(n, n, |i, j| matrix[(i, j)].re))
        } else {
            None
        };
        Ok(Self {
            matrix,
            real,
            eigenvalues: OnceLock::new(),
            sqrt: OnceLock::new(),
        })
    }

    fn from_real(real: DMatrix<f64>) -> Self {
        let matrix = real.map(|x| Complex64::new(x, 0.0));
        Self {
            matrix,
            real: Some(real),
            eigenvalues: OnceLock::new(),
            sqrt: OnceLock::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Eigenvalues sorted descending, with round-off negatives clamped to 0.
    pub fn eigenvalues(&self) -> Result<&[f64]> {
        let stored = self.eigenvalues.get_or_init(|| {
            let raw: Vec<f64> = match &self.real {
                Some(r) => r.clone().symmetric_eigenvalues().iter().copied().collect(),
                None => self
                    .matrix
                    .clone()
                    .symmetric_eigenvalues()
                    .iter()
                    .copied()
                    .collect(),
            };
            clamp_spectrum(raw)
        });
        match stored {
            Ok(v) => Ok(v.as_slice()),
            Err(e) => Err(e.clone()),
        }
    }

    pub fn lambda_max(&self) -> Result<f64> {
        Ok(self.eigenvalues()?[0])
    }

    pub fn lambda_min(&self) -> Result<f64> {
        Ok(*self.eigenvalues()?.last().expect("nonempty spectrum"))
    }

    fn sqrt_data(&self) -> Result<&SqrtData> {
        let stored = self.sqrt.get_or_init(|| match &self.real {
            Some(r) => {
                let se = r.clone().symmetric_eigen();
                let (scale, order) = sqrt_scale(se.eigenvalues.as_slice())?;
                let mut basis = DMatrix::<f64>::zeros(self.dim(), self.dim());
                for (col, &src) in order.iter().enumerate() {
                    basis.set_column(col, &se.eigenvectors.column(src));
                }
                Ok(SqrtData::Real { basis, scale })
            }
            None => {
                let se = self.matrix.clone().symmetric_eigen();
                let (scale, order) = sqrt_scale(se.eigenvalues.as_slice())?;
                let mut basis = DMatrix::<Complex64>::zeros(self.dim(), self.dim());
                for (col, &src) in order.iter().enumerate() {
                    basis.set_column(col, &se.eigenvectors.column(src));
                }
                Ok(SqrtData::Complex { basis, scale })
            }
        });
        match stored {
            Ok(d) => Ok(d),
            Err(e) => Err(e.clone()),
        }
    }

    /// PSD square root `S` with `S·Sᴴ = R`, columns ordered by descending
    /// eigenvalue.
    pub fn sqrt_factor(&self) -> Result<DMatrix<Complex64>> {
        let n = self.dim();
        match self.sqrt_data()? {
            SqrtData::Real { basis, scale } => Ok(DMatrix::from_fn(n, n, |i, j| {
                Complex64::new(basis[(i, j)] * scale[j], 0.0)
            })),
            SqrtData::Complex { basis, scale } => {
                Ok(DMatrix::from_fn(n, n, |i, j| basis[(i, j)] * scale[j]))
            }
        }
    }

    /// `S·z` for i.i.d. `z`, producing a draw with covariance `R`.
    pub fn apply_sqrt(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        if z.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: z.len(),
            });
        }
        match self.sqrt_data()? {
            SqrtData::Real { basis, scale } => {
                let re = DVector::from_fn(z.len(), |i, _| scale[i] * z[i].re);
                let im = DVector::from_fn(z.len(), |i, _| scale[i] * z[i].im);
                let yre = basis * re;
                let yim = basis * im;
                Ok((0..z.len())
                    .map(|i| Complex64::new(yre[i], yim[i]))
                    .collect())
            }
            SqrtData::Complex { basis, scale } => {
                let w = DVector::from_fn(z.len(), |i, _| z[i] * scale[i]);
                let y = basis * w;
                Ok(y.iter().copied().collect())
            }
        }
    }

    /// `vᴴ R v` (real part; exact for Hermitian `R`).
    pub fn quadratic_form(&self, v: &[Complex64]) -> Result<f64> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: v.len(),
            });
        }
        match &self.real {
            Some(r) => {
                let re = DVector::from_fn(v.len(), |i, _| v[i].re);
                let im = DVector::from_fn(v.len(), |i, _| v[i].im);
                let rre = r * &re;
                let rim = r * &im;
                Ok(re.dot(&rre) + im.dot(&rim))
            }
            None => {
                let x = DVector::from_column_slice(v);
                let rx = &self.matrix * &x;
                Ok(x.dotc(&rx).re)
            }
        }
    }
}

fn clamp_spectrum(mut vals: Vec<f64>) -> Result<Vec<f64>> {
    let lambda_max = vals.iter().cloned().fold(f64::MIN, f64::max);
    let tol = EIGEN_CLAMP_REL * lambda_max.max(0.0);
    for v in vals.iter_mut() {
        if *v < -tol {
            return Err(Error::NegativeEigenvalue { value: *v });
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    vals.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
    Ok(vals)
}

/// Clamped square-root scales plus the descending-order permutation of the
/// raw eigenvalue list.
fn sqrt_scale(raw: &[f64]) -> Result<(Vec<f64>, Vec<usize>)> {
    let lambda_max = raw.iter().cloned().fold(f64::MIN, f64::max);
    let tol = EIGEN_CLAMP_REL * lambda_max.max(0.0);
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&a, &b| raw[b].partial_cmp(&raw[a]).expect("finite eigenvalues"));
    let mut scale = Vec::with_capacity(raw.len());
    for &idx in &order {
        let v = raw[idx];
        if v < -tol {
            return Err(Error::NegativeEigenvalue { value: v });
        }
        scale.push(v.max(0.0).sqrt());
    }
    Ok((scale, order))
}

/// Normalized sinc, `sin(πx)/(πx)` with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    let px = std::f64::consts::PI * x;
    if px.abs() < 1e-8 {
        1.0 - px * px / 6.0
    } else {
        px.sin() / px
    }
}

/// Isotropic-scattering covariance for a planar IRS:
/// `[R]_{nn'} = sinc((2/λ)·√(Dx² + Dy²))`.
pub fn sinc_covariance(irs: &ArrayGeometry, wavelength: f64) -> Result<CovarianceModel> {
    if !(wavelength.is_finite() && wavelength > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "wavelength must be positive, got {wavelength}"
        )));
    }
    let n = irs.len();
    let mut r = DMatrix::<f64>::zeros(n, n);
    for a in 0..n {
        let (ia, ja) = index_maps(a + 1, irs.nx)?;
        for b in a..n {
            let (ib, jb) = index_maps(b + 1, irs.nx)?;
            let dx = irs.dx * (ia as f64 - ib as f64);
            let dy = irs.dy * (ja as f64 - jb as f64);
            let val = sinc(2.0 / wavelength * (dx * dx + dy * dy).sqrt());
            r[(a, b)] = val;
            r[(b, a)] = val;
        }
    }
    Ok(CovarianceModel::from_real(r))
}

/// Rank-one extreme `R = 1_N` (all-ones), spectrum `{N, 0, …, 0}`.
pub fn allones_covariance(n: usize) -> Result<CovarianceModel> {
    if n < 1 {
        return Err(Error::InvalidArgument("IRS size must be at least 1".into()));
    }
    Ok(CovarianceModel::from_real(DMatrix::from_element(n, n, 1.0)))
}

/// PSD square root of `cov` (see [`CovarianceModel::sqrt_factor`]).
pub fn psd_sqrt(cov: &CovarianceModel) -> Result<DMatrix<Complex64>> {
    cov.sqrt_factor()
}

/// Rayleigh quotient `vᴴRv / ‖v‖²`, always inside `[λ_min, λ_max]`.
pub fn rayleigh_quotient(cov: &CovarianceModel, v: &[Complex64]) -> Result<f64> {
    let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if norm2 <= 0.0 {
        return Err(Error::InvalidArgument(
            "Rayleigh quotient of the zero vector".into(),
        ));
    }
    Ok(cov.quadratic_form(v)? / norm2)
}
