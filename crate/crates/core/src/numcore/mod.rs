//! Dense complex matrix arithmetic and the decompositions everything else is built on.
//!
//! Real inputs are promoted to complex entries with zero imaginary part; there is a
//! single code path for both fields.

mod decomp;
mod hermitian;
mod tolerance;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use decomp::{
    column_space, hermitian_eigen, min_eigenvalue, null_space, operator_norm, pinv, pinv_scaled, psd_leq,
    psd_sqrt, psd_sqrt_scaled, rank, svd, HermitianEigen, Svd,
};
pub use hermitian::HermitianMatrix;
pub use tolerance::ToleranceProfile;

/// Dense row/column matrix over the complex field.
pub type ComplexMatrix = DMatrix<Complex64>;

/// Scalar field a matrix was supplied in; it only affects formatting and sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }
}

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Builds a complex matrix from real row-major data.
pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> ComplexMatrix {
    assert_eq!(data.len(), rows * cols, "data length must equal rows * cols");
    DMatrix::from_fn(rows, cols, |i, j| c64(data[i * cols + j], 0.0))
}

pub fn real_diag(values: &[f64]) -> ComplexMatrix {
    let n = values.len();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            c64(values[i], 0.0)
        } else {
            c64(0.0, 0.0)
        }
    })
}

pub fn identity(n: usize) -> ComplexMatrix {
    DMatrix::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> ComplexMatrix {
    DMatrix::zeros(rows, cols)
}

/// Rejects NaN and infinite entries.
pub fn ensure_finite(m: &ComplexMatrix) -> Result<()> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

pub fn ensure_square(m: &ComplexMatrix, what: &str) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "{what} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows())
}

/// True when every entry has zero imaginary part.
pub fn is_real(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

/// Operator norm of `a - b`.
pub fn distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    operator_norm(&(a - b))
}

/// Largest entry magnitude; a cheap scale used where an SVD would be wasteful.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `(m + m*) / 2`.
pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}
