use super::{ensure_finite, ensure_square, hermitian_part, min_eigenvalue, operator_norm};
use super::{ComplexMatrix, ToleranceProfile};
use crate::error::{Error, Result};

/// A square matrix validated as Hermitian, stored exactly symmetrized.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    base: ComplexMatrix,
    psd: Option<bool>,
}

impl HermitianMatrix {
    /// Accepts `m` when `||m - m*|| <= tol_eq * max(1, ||m||)`.
    pub fn new(m: ComplexMatrix, tol: &ToleranceProfile) -> Result<Self> {
        ensure_finite(&m)?;
        ensure_square(&m, "Hermitian matrix")?;
        let residual = operator_norm(&(&m - m.adjoint()));
        let threshold = tol.eq_threshold(operator_norm(&m));
        if residual > threshold {
            return Err(Error::NotHermitian { residual, threshold });
        }
        Ok(Self {
            base: hermitian_part(&m),
            psd: None,
        })
    }

    /// Like [`HermitianMatrix::new`], additionally requiring
    /// `min eig >= -tol_rank * ||m||`.
    pub fn psd(m: ComplexMatrix, tol: &ToleranceProfile) -> Result<Self> {
        let mut h = Self::new(m, tol)?;
        h.check_psd(tol)?;
        h.psd = Some(true);
        Ok(h)
    }

    /// Wraps a matrix known to be PSD by construction.
    pub(crate) fn assume_psd(m: ComplexMatrix) -> Self {
        Self {
            base: hermitian_part(&m),
            psd: Some(true),
        }
    }

    fn check_psd(&self, tol: &ToleranceProfile) -> Result<()> {
        let lowest = min_eigenvalue(&self.base)?;
        let threshold = -tol.tol_rank * self.norm();
        if lowest < threshold {
            return Err(Error::NotPositive {
                min_eigenvalue: lowest,
                threshold,
            });
        }
        Ok(())
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.base
    }

    pub fn into_inner(self) -> ComplexMatrix {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.base.nrows()
    }

    pub fn norm(&self) -> f64 {
        operator_norm(&self.base)
    }

    /// Cached positivity verdict, if one was established at construction.
    pub fn psd_flag(&self) -> Option<bool> {
        self.psd
    }

    pub fn is_psd(&self, tol: &ToleranceProfile) -> Result<bool> {
        match self.psd {
            Some(flag) => Ok(flag),
            None => match self.check_psd(tol) {
                Ok(()) => Ok(true),
                Err(Error::NotPositive { .. }) => Ok(false),
                Err(e) => Err(e),
            },
        }
    }

    /// Returns a copy carrying the PSD flag, or `NotPositive`.
    pub fn require_psd(&self, tol: &ToleranceProfile) -> Result<Self> {
        if self.psd != Some(true) {
            self.check_psd(tol)?;
        }
        Ok(Self {
            base: self.base.clone(),
            psd: Some(true),
        })
    }
}
