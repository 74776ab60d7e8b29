//! Subspaces of `C^n` carried as orthonormal bases.
//!
//! Two subspaces are equal when their orthogonal projectors agree within `tol_eq`;
//! bases are never compared directly. Intersections are computed as complements of
//! sums so that one rank policy governs every dimension count.

use crate::error::{Error, Result};
use crate::numcore::{column_space, identity, null_space, operator_norm, ComplexMatrix, ToleranceProfile};
use crate::projector::Projection;

#[derive(Debug, Clone)]
pub struct Subspace {
    basis: ComplexMatrix,
    tol: ToleranceProfile,
}

impl Subspace {
    /// Numerical column space of `m`, ranked relative to its own largest singular value.
    pub fn from_spanning(m: &ComplexMatrix, tol: &ToleranceProfile) -> Result<Self> {
        Self::range_of(m, 0.0, tol)
    }

    /// Column space of `m` with singular values ranked against `max(sigma_max, scale)`.
    pub fn range_of(m: &ComplexMatrix, scale: f64, tol: &ToleranceProfile) -> Result<Self> {
        Ok(Self {
            basis: column_space(m, scale, tol)?,
            tol: *tol,
        })
    }

    /// Kernel of `m` with singular values ranked against `max(sigma_max, scale)`.
    pub fn kernel_of(m: &ComplexMatrix, scale: f64, tol: &ToleranceProfile) -> Result<Self> {
        Ok(Self {
            basis: null_space(m, scale, tol)?,
            tol: *tol,
        })
    }

    /// Wraps columns that are already orthonormal.
    pub fn from_orthonormal(basis: ComplexMatrix, tol: &ToleranceProfile) -> Result<Self> {
        let k = basis.ncols();
        let defect = operator_norm(&(basis.adjoint() * &basis - identity(k)));
        if defect > tol.tol_eq {
            return Err(Error::VerificationFailed {
                what: "basis columns are not orthonormal",
                residual: defect,
            });
        }
        Ok(Self { basis, tol: *tol })
    }

    pub fn zero(n: usize, tol: &ToleranceProfile) -> Self {
        Self {
            basis: ComplexMatrix::zeros(n, 0),
            tol: *tol,
        }
    }

    pub fn full(n: usize, tol: &ToleranceProfile) -> Self {
        Self {
            basis: identity(n),
            tol: *tol,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// `n x k` matrix with orthonormal columns.
    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn tol(&self) -> &ToleranceProfile {
        &self.tol
    }

    /// `B B*`.
    pub fn projector_matrix(&self) -> ComplexMatrix {
        &self.basis * self.basis.adjoint()
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::AmbientMismatch {
                left: self.ambient_dim(),
                right: other.ambient_dim(),
            });
        }
        Ok(())
    }

    pub fn complement(&self) -> Result<Subspace> {
        let n = self.ambient_dim();
        if self.dim() == 0 {
            return Ok(Self::full(n, &self.tol));
        }
        if self.dim() == n {
            return Ok(Self::zero(n, &self.tol));
        }
        Self::kernel_of(&self.basis.adjoint(), 0.0, &self.tol)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let n = self.ambient_dim();
        let (k, l) = (self.dim(), other.dim());
        if k + l == 0 {
            return Ok(Self::zero(n, &self.tol));
        }
        let mut stacked = ComplexMatrix::zeros(n, k + l);
        stacked.columns_mut(0, k).copy_from(&self.basis);
        stacked.columns_mut(k, l).copy_from(&other.basis);
        Self::from_spanning(&stacked, &self.tol)
    }

    /// `(S^perp + T^perp)^perp`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        self.complement()?.sum(&other.complement()?)?.complement()
    }

    /// `S ⊖ T = S ∩ T^perp`.
    pub fn minus(&self, other: &Subspace) -> Result<Subspace> {
        self.intersect(&other.complement()?)
    }

    /// `||P_S - P_T|| <= tol_eq`; subspaces of different ambient dimension are unequal.
    pub fn approx_eq(&self, other: &Subspace) -> bool {
        self.ambient_dim() == other.ambient_dim()
            && self.dim() == other.dim()
            && operator_norm(&(self.projector_matrix() - other.projector_matrix())) <= self.tol.tol_eq
    }

    /// `T ⊆ S`, checked as `||(I - P_S) B_T|| <= tol_eq`.
    pub fn contains(&self, other: &Subspace) -> bool {
        if self.ambient_dim() != other.ambient_dim() {
            return false;
        }
        if other.is_zero() {
            return true;
        }
        let residual = &other.basis - &self.basis * (self.basis.adjoint() * &other.basis);
        operator_norm(&residual) <= self.tol.tol_eq
    }

    /// True when `v` (a column or a block of columns) lies in the subspace.
    pub fn contains_columns(&self, v: &ComplexMatrix) -> bool {
        let residual = v - &self.basis * (self.basis.adjoint() * v);
        operator_norm(&residual) <= self.tol.eq_threshold(operator_norm(v))
    }
}

/// `A^{-1}(T) = ker((I - P_T) A)`; it always contains `ker A`.
pub fn preimage(a: &ComplexMatrix, t: &Subspace, tol: &ToleranceProfile) -> Result<Subspace> {
    let n = crate::numcore::ensure_square(a, "preimage operator")?;
    if t.ambient_dim() != n {
        return Err(Error::AmbientMismatch {
            left: n,
            right: t.ambient_dim(),
        });
    }
    let leak = a - t.basis() * (t.basis().adjoint() * a);
    Subspace::kernel_of(&leak, operator_norm(a), tol)
}

pub fn orth_projector(s: &Subspace) -> Projection {
    Projection::orthogonal(s)
}

/// Cosine of the Friedrichs angle: the norm of `P_{S'} P_{T'}` after the common part
/// `S ∩ T` is removed from both. Zero when either reduced subspace is trivial.
pub fn friedrichs_cos(s: &Subspace, t: &Subspace) -> Result<f64> {
    s.check_ambient(t)?;
    let common = s.intersect(t)?;
    let s_reduced = s.minus(&common)?;
    let t_reduced = t.minus(&common)?;
    if s_reduced.is_zero() || t_reduced.is_zero() {
        return Ok(0.0);
    }
    let c = operator_norm(&(s_reduced.projector_matrix() * t_reduced.projector_matrix()));
    Ok(c.min(1.0))
}
