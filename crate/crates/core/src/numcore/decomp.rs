use faer::{Mat, MatRef, Side};
use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{hermitian_part, ComplexMatrix, HermitianMatrix, ToleranceProfile};
use crate::error::{Error, Result};

const RECONSTRUCTION_SLACK: f64 = 1_000.0;

/// Full singular value decomposition `M = U diag(sigma) V*` with square unitary factors.
#[derive(Debug, Clone)]
pub struct Svd {
    /// `m x m` unitary.
    pub u: ComplexMatrix,
    /// `min(m, n)` singular values, nonincreasing.
    pub sigma: Vec<f64>,
    /// `n x n` unitary.
    pub v: ComplexMatrix,
}

impl Svd {
    /// Largest singular value, zero for an empty spectrum.
    pub fn sigma_max(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values at or above `tol_rank * max(sigma_max, scale)`.
    ///
    /// `scale` lets a product such as `(I - P) A` be ranked against the size of its
    /// factors; pass `0.0` for the purely relative cutoff.
    pub fn rank(&self, scale: f64, tol: &ToleranceProfile) -> usize {
        let cutoff = tol.tol_rank * self.sigma_max().max(scale);
        self.sigma.iter().take_while(|&&s| s > 0.0 && s >= cutoff).count()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let (m, n) = (self.u.nrows(), self.v.nrows());
        let mut s = ComplexMatrix::zeros(m, n);
        for (i, &value) in self.sigma.iter().enumerate() {
            s[(i, i)] = value.into();
        }
        &self.u * s * self.v.adjoint()
    }
}

fn to_faer(m: &ComplexMatrix) -> Mat<Complex64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: MatRef<'_, Complex64>) -> ComplexMatrix {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn reconstruction_bound(m: &ComplexMatrix) -> f64 {
    RECONSTRUCTION_SLACK * f64::EPSILON * (m.nrows() + m.ncols()) as f64 * m.norm().max(1.0)
}

fn checked_svd(m: &ComplexMatrix) -> Option<Svd> {
    let dec = to_faer(m).svd().ok()?;
    let sigma: Vec<f64> = (0..m.nrows().min(m.ncols())).map(|k| dec.S()[k].re).collect();
    let out = Svd {
        u: from_faer(dec.U()),
        sigma,
        v: from_faer(dec.V()),
    };
    let finite = out.sigma.iter().all(|s| s.is_finite());
    (finite && (out.reconstruct() - m).norm() <= reconstruction_bound(m)).then_some(out)
}

/// Full SVD, accepted only when the factors reconstruct `m`; a failed attempt is
/// retried on the adjoint and then with the columns reversed before giving up.
pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    let (rows, cols) = m.shape();
    if rows.min(cols) == 0 {
        return Ok(Svd {
            u: ComplexMatrix::identity(rows, rows),
            sigma: Vec::new(),
            v: ComplexMatrix::identity(cols, cols),
        });
    }
    if let Some(dec) = checked_svd(m) {
        return Ok(dec);
    }
    if let Some(dec) = checked_svd(&m.adjoint()) {
        log::debug!("svd retried on the adjoint");
        return Ok(Svd {
            u: dec.v,
            sigma: dec.sigma,
            v: dec.u,
        });
    }
    let reversed = DMatrix::from_fn(rows, cols, |i, j| m[(i, cols - 1 - j)]);
    let dec = checked_svd(&reversed).ok_or(Error::ConvergenceFailure)?;
    log::debug!("svd retried with reversed columns");
    Ok(Svd {
        u: dec.u,
        sigma: dec.sigma,
        v: DMatrix::from_fn(cols, cols, |i, j| dec.v[(cols - 1 - i, j)]),
    })
}

pub fn rank(m: &ComplexMatrix, scale: f64, tol: &ToleranceProfile) -> Result<usize> {
    Ok(svd(m)?.rank(scale, tol))
}

/// Orthonormal basis of the numerical column space.
pub fn column_space(m: &ComplexMatrix, scale: f64, tol: &ToleranceProfile) -> Result<ComplexMatrix> {
    let dec = svd(m)?;
    let r = dec.rank(scale, tol);
    Ok(dec.u.columns(0, r).into_owned())
}

/// Orthonormal basis of the numerical kernel.
pub fn null_space(m: &ComplexMatrix, scale: f64, tol: &ToleranceProfile) -> Result<ComplexMatrix> {
    let dec = svd(m)?;
    let r = dec.rank(scale, tol);
    let n = m.ncols();
    Ok(dec.v.columns(r, n - r).into_owned())
}

/// Moore-Penrose pseudoinverse under the singular-value cutoff.
pub fn pinv(m: &ComplexMatrix, tol: &ToleranceProfile) -> Result<ComplexMatrix> {
    pinv_scaled(m, 0.0, tol)
}

/// Pseudoinverse with the cutoff taken against `max(sigma_max, scale)`.
pub fn pinv_scaled(m: &ComplexMatrix, scale: f64, tol: &ToleranceProfile) -> Result<ComplexMatrix> {
    let dec = svd(m)?;
    let r = dec.rank(scale, tol);
    let mut out = ComplexMatrix::zeros(m.ncols(), m.nrows());
    for k in 0..r {
        let inv = 1.0 / dec.sigma[k];
        out += (dec.v.column(k) * dec.u.column(k).adjoint()).scale(inv);
    }
    Ok(out)
}

/// Spectral norm (largest singular value).
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    match to_faer(m).singular_values() {
        Ok(values) => values.first().copied().unwrap_or(0.0),
        Err(_) => m.singular_values_unordered().iter().copied().fold(0.0, f64::max),
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Columns are the matching orthonormal eigenvectors.
    pub vectors: ComplexMatrix,
}

/// Decomposes the Hermitian part of `h`.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermitianEigen> {
    let n = super::ensure_square(h, "eigendecomposition input")?;
    if n == 0 {
        return Ok(HermitianEigen {
            values: Vec::new(),
            vectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let sym = hermitian_part(h);
    if let Some(dec) = checked_eigen(&sym) {
        return Ok(dec);
    }
    let reversed = DMatrix::from_fn(n, n, |i, j| sym[(n - 1 - i, n - 1 - j)]);
    let dec = checked_eigen(&reversed).ok_or(Error::ConvergenceFailure)?;
    log::debug!("eigendecomposition retried with reversed order");
    Ok(HermitianEigen {
        values: dec.values,
        vectors: DMatrix::from_fn(n, n, |i, j| dec.vectors[(n - 1 - i, j)]),
    })
}

fn checked_eigen(sym: &ComplexMatrix) -> Option<HermitianEigen> {
    let n = sym.nrows();
    let dec = to_faer(sym).self_adjoint_eigen(Side::Lower).ok()?;
    let values: Vec<f64> = (0..n).map(|k| dec.S()[k].re).collect();
    let vectors = from_faer(dec.U());
    let mut recomposed = vectors.clone();
    for (j, &value) in values.iter().enumerate() {
        recomposed.column_mut(j).scale_mut(value);
    }
    let residual = (recomposed * vectors.adjoint() - sym).norm();
    (residual <= reconstruction_bound(sym)).then_some(HermitianEigen { values, vectors })
}

pub fn min_eigenvalue(h: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigen(h)?.values.first().copied().unwrap_or(0.0))
}

/// `x <= y` in the Loewner order: `min eig(y - x) >= -tol_rank * max(1, ||y||)`.
pub fn psd_leq(x: &ComplexMatrix, y: &ComplexMatrix, tol: &ToleranceProfile) -> Result<bool> {
    let gap = min_eigenvalue(&(y - x))?;
    Ok(gap >= tol.psd_threshold(operator_norm(y)))
}

/// Principal square root of a positive semidefinite matrix.
///
/// Eigenvalues with magnitude below `tol_rank * ||A||` are set to zero before the root
/// is taken, so a numerically singular input yields an exactly rank-deficient root.
pub fn psd_sqrt(a: &HermitianMatrix, tol: &ToleranceProfile) -> Result<HermitianMatrix> {
    psd_sqrt_scaled(a, 0.0, tol)
}

/// [`psd_sqrt`] with the zero floor taken against `max(||A||, scale)`, for blocks of a
/// larger operator.
pub fn psd_sqrt_scaled(a: &HermitianMatrix, scale: f64, tol: &ToleranceProfile) -> Result<HermitianMatrix> {
    let eig = hermitian_eigen(a.matrix())?;
    let norm = eig.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let floor = tol.tol_rank * norm.max(scale);
    if let Some(&lowest) = eig.values.first() {
        if lowest < -floor {
            return Err(Error::NotPositive {
                min_eigenvalue: lowest,
                threshold: -floor,
            });
        }
    }
    let n = eig.values.len();
    let mut root = ComplexMatrix::zeros(n, n);
    for (k, &value) in eig.values.iter().enumerate() {
        if value <= floor {
            continue;
        }
        let col = eig.vectors.column(k);
        root += (col * col.adjoint()).scale(value.sqrt());
    }
    Ok(HermitianMatrix::assume_psd(root))
}
