//! Idempotents, `A`-selfadjoint projections and the distinguished projection `P_{A,S}`.
//!
//! For Hermitian `A` and a subspace `S`, `P(A,S)` is the set of idempotents `Q` with
//! `R(Q) = S` and `A Q = Q* A`. Writing `A = (a b; b* c)` in the frame of `S`, a
//! range-`S` idempotent `(1 x; 0 0)` belongs to `P(A,S)` exactly when `a x = b`, and
//! `P_{A,S}` takes `x` to be the reduced solution `d = a† b`.

use serde::Serialize;

use crate::blocks::BlockFrame;
use crate::douglas::solve_reduced_hermitian;
use crate::error::{Error, Result};
use crate::numcore::{
    ensure_finite, ensure_square, identity, min_eigenvalue, null_space, operator_norm, ComplexMatrix,
    HermitianMatrix, ToleranceProfile,
};
use crate::subspace::{preimage, Subspace};

/// An idempotent matrix with its range and kernel.
#[derive(Debug, Clone)]
pub struct Projection {
    matrix: ComplexMatrix,
    range: Subspace,
    kernel: Subspace,
}

impl Projection {
    /// Accepts `m` when `||m^2 - m|| <= tol_eq * max(1, ||m||)`.
    pub fn new(m: ComplexMatrix, tol: &ToleranceProfile) -> Result<Self> {
        ensure_finite(&m)?;
        ensure_square(&m, "projection")?;
        let norm = operator_norm(&m);
        let residual = operator_norm(&(&m * &m - &m));
        let threshold = tol.eq_threshold(norm);
        if residual > threshold {
            return Err(Error::NotIdempotent { residual, threshold });
        }
        let range = Subspace::from_spanning(&m, tol)?;
        let kernel = Subspace::kernel_of(&m, 0.0, tol)?;
        Ok(Self {
            matrix: m,
            range,
            kernel,
        })
    }

    /// The orthogonal projection onto `s`.
    pub fn orthogonal(s: &Subspace) -> Self {
        Self {
            matrix: s.projector_matrix(),
            range: s.clone(),
            kernel: s.complement().expect("svd converges"),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn range(&self) -> &Subspace {
        &self.range
    }

    pub fn kernel(&self) -> &Subspace {
        &self.kernel
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn norm(&self) -> f64 {
        operator_norm(&self.matrix)
    }

    pub fn is_orthogonal(&self, tol: &ToleranceProfile) -> bool {
        let residual = operator_norm(&(&self.matrix - self.matrix.adjoint()));
        residual <= tol.eq_threshold(self.norm())
    }

    pub fn require_orthogonal(&self, tol: &ToleranceProfile) -> Result<()> {
        if self.is_orthogonal(tol) {
            Ok(())
        } else {
            Err(Error::NotHermitianProjection)
        }
    }

    /// `I - Q`, with range and kernel exchanged.
    pub fn complement(&self) -> Self {
        Self {
            matrix: identity(self.dim()) - &self.matrix,
            range: self.kernel.clone(),
            kernel: self.range.clone(),
        }
    }
}

fn check_dims(n: usize, m: usize) -> Result<()> {
    if n != m {
        return Err(Error::ShapeMismatch(format!(
            "operator acts on dimension {n} but the other argument on {m}"
        )));
    }
    Ok(())
}

/// `||A Q - Q* A||`.
pub fn selfadjoint_residual(a: &HermitianMatrix, q: &Projection) -> Result<f64> {
    check_dims(a.dim(), q.dim())?;
    let (a, q) = (a.matrix(), q.matrix());
    Ok(operator_norm(&(a * q - q.adjoint() * a)))
}

/// `A Q = Q* A` within `tol_eq * max(1, ||A||)`.
pub fn is_a_selfadjoint(a: &HermitianMatrix, q: &Projection, tol: &ToleranceProfile) -> Result<bool> {
    Ok(selfadjoint_residual(a, q)? <= tol.eq_threshold(a.norm()))
}

/// Three independent characterizations of `A`-selfadjointness of an idempotent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SelfAdjointVerdicts {
    /// `A Q = Q* A`.
    pub commutation: bool,
    /// `ker Q ⊆ A^{-1}(R(Q)^⊥)`.
    pub kernel_orthogonal: bool,
    /// `Q* A Q <= A`; evaluated only for positive semidefinite `A`.
    pub contraction: Option<bool>,
}

impl SelfAdjointVerdicts {
    pub fn agree(&self) -> bool {
        self.kernel_orthogonal == self.commutation && self.contraction.is_none_or(|c| c == self.commutation)
    }
}

pub fn selfadjoint_verdicts(
    a: &HermitianMatrix,
    q: &Projection,
    tol: &ToleranceProfile,
) -> Result<SelfAdjointVerdicts> {
    let commutation = is_a_selfadjoint(a, q, tol)?;
    let target = preimage(a.matrix(), &q.range().complement()?, tol)?;
    let kernel_orthogonal = target.contains(q.kernel());
    let contraction = if a.is_psd(tol)? {
        let m = q.matrix();
        let gap = a.matrix() - m.adjoint() * a.matrix() * m;
        Some(min_eigenvalue(&gap)? >= -tol.tol_rank * a.norm())
    } else {
        None
    };
    Ok(SelfAdjointVerdicts {
        commutation,
        kernel_orthogonal,
        contraction,
    })
}

/// The block decomposition of `A` relative to `S` that the compatibility conditions read.
#[derive(Debug, Clone)]
pub struct CompatibilityWitnesses {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    /// Reduced solution of `a x = b`, present when the pair is compatible.
    pub d: Option<ComplexMatrix>,
    /// `||(I - P_{R(a)}) b||`.
    pub leak: f64,
}

#[derive(Debug, Clone)]
pub struct CompatibilityReport {
    pub compatible: bool,
    /// `R(PA) = R(PAP)`.
    pub cond_range_pa: bool,
    /// `R(b) ⊆ R(a)`.
    pub cond_block: bool,
    /// `S + A^{-1}(S^⊥)` is the whole space.
    pub cond_sum: bool,
    /// `S ⊕ A^{-1}(S^⊥)` is the whole space, so `P(A,S)` is a single point.
    pub unique: bool,
    /// `dim (S ∩ A^{-1}(S^⊥))`.
    pub n_dim: usize,
    pub witnesses: CompatibilityWitnesses,
}

impl CompatibilityReport {
    pub fn conditions_agree(&self) -> bool {
        self.cond_range_pa == self.cond_block && self.cond_block == self.cond_sum
    }
}

fn check_subspace(a: &HermitianMatrix, s: &Subspace) -> Result<()> {
    if a.dim() != s.ambient_dim() {
        return Err(Error::AmbientMismatch {
            left: a.dim(),
            right: s.ambient_dim(),
        });
    }
    Ok(())
}

/// Evaluates the equivalent compatibility conditions through separate computations.
///
/// The verdict `compatible` is the block condition; the other two are reported so that
/// callers can confirm they agree.
pub fn compatibility(
    a: &HermitianMatrix,
    s: &Subspace,
    tol: &ToleranceProfile,
) -> Result<CompatibilityReport> {
    check_subspace(a, s)?;
    let n = a.dim();
    let scale = a.norm();
    let p = s.projector_matrix();

    let pa = &p * a.matrix();
    let pap = &pa * &p;
    let cond_range_pa =
        Subspace::range_of(&pa, scale, tol)?.approx_eq(&Subspace::range_of(&pap, scale, tol)?);

    let frame = BlockFrame::new(s)?;
    let blocks = frame.split(a.matrix());
    let (d, leak) = match solve_reduced_hermitian(&blocks.a, &blocks.b, scale, tol) {
        Ok(d) => (Some(d), 0.0),
        Err(Error::RangeNotIncluded { residual, .. }) => (None, residual),
        Err(e) => return Err(e),
    };
    let leak = match &d {
        Some(d) => operator_norm(&(&blocks.a * d - &blocks.b)),
        None => leak,
    };
    let cond_block = d.is_some();

    let pre = preimage(a.matrix(), &s.complement()?, tol)?;
    let cond_sum = s.sum(&pre)?.dim() == n;
    let n_space = s.intersect(&pre)?;
    let unique = cond_sum && n_space.is_zero();

    if !(cond_range_pa == cond_block && cond_block == cond_sum) {
        log::warn!(
            "compatibility conditions disagree: range {cond_range_pa}, block {cond_block}, sum {cond_sum}"
        );
    }
    Ok(CompatibilityReport {
        compatible: cond_block,
        cond_range_pa,
        cond_block,
        cond_sum,
        unique,
        n_dim: n_space.dim(),
        witnesses: CompatibilityWitnesses {
            a: blocks.a,
            b: blocks.b,
            d,
            leak,
        },
    })
}

/// `P_{A,S} = (1 d; 0 0)` with `d` the reduced solution of `a x = b`.
pub fn p_as(a: &HermitianMatrix, s: &Subspace, tol: &ToleranceProfile) -> Result<Projection> {
    check_subspace(a, s)?;
    let frame = BlockFrame::new(s)?;
    let blocks = frame.split(a.matrix());
    let d = match solve_reduced_hermitian(&blocks.a, &blocks.b, a.norm(), tol) {
        Ok(d) => d,
        Err(Error::RangeNotIncluded { residual, .. }) => {
            if a.psd_flag() == Some(true) {
                log::warn!("block inclusion failed for a positive operator (leak {residual:.3e})");
            }
            return Err(Error::NotCompatible);
        }
        Err(e) => return Err(e),
    };
    Projection::new(frame.range_s_idempotent(&d), tol)
}

/// `P (PAP + (I-P) A (I-P))^{-1} A` for positive definite `A`.
pub fn p_as_invertible(a: &HermitianMatrix, s: &Subspace, tol: &ToleranceProfile) -> Result<Projection> {
    check_subspace(a, s)?;
    let n = a.dim();
    if n > 0 && min_eigenvalue(a.matrix())? < tol.tol_rank * a.norm() {
        return Err(Error::NotInvertible);
    }
    let p = s.projector_matrix();
    let e = identity(n) - &p;
    let m = &p * a.matrix() * &p + &e * a.matrix() * &e;
    let inv = m.try_inverse().ok_or(Error::NotInvertible)?;
    Projection::new(&p * inv * a.matrix(), tol)
}

/// `P(A,S) = base + L(S^⊥, N)`, with `N` the free directions inside `S`.
#[derive(Debug, Clone)]
pub struct ManifoldParam {
    pub base: Projection,
    pub n_space: Subspace,
    pub s_perp: Subspace,
    /// False when `A` was not positive and `N` was taken as `S ∩ ker a`.
    pub positive: bool,
}

impl ManifoldParam {
    /// Shape `dim N x dim S^⊥` of the coefficient block `z`.
    pub fn slot_shape(&self) -> (usize, usize) {
        (self.n_space.dim(), self.s_perp.dim())
    }

    pub fn is_singleton(&self) -> bool {
        self.n_space.is_zero() || self.s_perp.is_zero()
    }

    /// `B_N z B_{S^⊥}*`.
    pub fn embed(&self, z: &ComplexMatrix) -> Result<ComplexMatrix> {
        if z.shape() != self.slot_shape() {
            return Err(Error::ShapeMismatch(format!(
                "coefficient block must be {}x{}, got {}x{}",
                self.n_space.dim(),
                self.s_perp.dim(),
                z.nrows(),
                z.ncols()
            )));
        }
        Ok(self.n_space.basis() * z * self.s_perp.basis().adjoint())
    }
}

/// Parametrization for positive semidefinite `A`, where `N = ker A ∩ S`.
pub fn manifold(a: &HermitianMatrix, s: &Subspace, tol: &ToleranceProfile) -> Result<ManifoldParam> {
    check_subspace(a, s)?;
    let a = a.require_psd(tol)?;
    let n_space = Subspace::kernel_of(a.matrix(), 0.0, tol)?.intersect(s)?;
    Ok(ManifoldParam {
        base: p_as(&a, s, tol)?,
        n_space,
        s_perp: s.complement()?,
        positive: true,
    })
}

/// Parametrization for a compatible Hermitian pair, with `N = ker a` inside `S`.
///
/// For positive `A` this coincides with [`manifold`]; otherwise `positive` is false.
pub fn manifold_indefinite(
    a: &HermitianMatrix,
    s: &Subspace,
    tol: &ToleranceProfile,
) -> Result<ManifoldParam> {
    check_subspace(a, s)?;
    let base = p_as(a, s, tol)?;
    let frame = BlockFrame::new(s)?;
    let blocks = frame.split(a.matrix());
    let ker_a = null_space(&blocks.a, a.norm(), tol)?;
    let n_space = Subspace::from_orthonormal(frame.s_basis() * ker_a, tol)?;
    Ok(ManifoldParam {
        base,
        n_space,
        s_perp: frame_perp(&frame, tol)?,
        positive: a.is_psd(tol)?,
    })
}

fn frame_perp(frame: &BlockFrame, tol: &ToleranceProfile) -> Result<Subspace> {
    Subspace::from_orthonormal(frame.perp_basis(), tol)
}

/// `base + B_N z B_{S^⊥}*`.
pub fn manifold_member(
    param: &ManifoldParam,
    z: &ComplexMatrix,
    tol: &ToleranceProfile,
) -> Result<Projection> {
    let q = param.base.matrix() + param.embed(z)?;
    Projection::new(q, tol)
}

/// `Q ∈ P(A,S)`: range `S` and `A`-selfadjoint.
pub fn is_member(a: &HermitianMatrix, s: &Subspace, q: &Projection, tol: &ToleranceProfile) -> Result<bool> {
    check_subspace(a, s)?;
    Ok(q.range().approx_eq(s) && is_a_selfadjoint(a, q, tol)?)
}

/// `Δ = P_{B,S} - P_{A,S}` for positive `A`, `B` with equal ranges, so that
/// `P(B,S) = Δ + P(A,S)`.
///
/// The translate is checked at `z = 0` and at every coordinate unit block; membership is
/// affine in `z`, so this covers the whole slot space.
pub fn parallel_offset(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    s: &Subspace,
    tol: &ToleranceProfile,
) -> Result<ComplexMatrix> {
    check_subspace(a, s)?;
    check_subspace(b, s)?;
    let a = a.require_psd(tol)?;
    let b = b.require_psd(tol)?;
    let range_a = Subspace::range_of(a.matrix(), 0.0, tol)?;
    let range_b = Subspace::range_of(b.matrix(), 0.0, tol)?;
    if !range_a.approx_eq(&range_b) {
        return Err(Error::RangeMismatch);
    }
    let param = manifold(&a, s, tol)?;
    let delta = p_as(&b, s, tol)?.into_matrix() - param.base.matrix();
    let (rows, cols) = param.slot_shape();
    let mut probes = vec![ComplexMatrix::zeros(rows, cols)];
    for i in 0..rows {
        for j in 0..cols {
            let mut z = ComplexMatrix::zeros(rows, cols);
            z[(i, j)] = 1.0.into();
            probes.push(z);
        }
    }
    for z in &probes {
        let shifted = manifold_member(&param, z, tol)?.into_matrix() + &delta;
        let q = Projection::new(shifted, tol)?;
        if !is_member(&b, s, &q, tol)? {
            return Err(Error::VerificationFailed {
                what: "translated member is not in P(B,S)",
                residual: selfadjoint_residual(&b, &q)?,
            });
        }
    }
    Ok(delta)
}
