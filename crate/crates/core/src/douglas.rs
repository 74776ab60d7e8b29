//! Range inclusion, factorization and the reduced solution of `A X = B`.
//!
//! In finite dimension the reduced solution is `A† B`: the unique `D` with `A D = B`,
//! `ker D = ker B` and `R(D) ⊆ R(A*)`. Its squared norm equals the smallest `λ` with
//! `B B* <= λ A A*`; [`douglas_bound`] finds that `λ` by bisection on the Loewner order
//! without going through the pseudoinverse.

use crate::error::{Error, Result};
use crate::numcore::{
    column_space, hermitian_eigen, min_eigenvalue, operator_norm, pinv_scaled, svd, ComplexMatrix,
    ToleranceProfile,
};
use crate::projector::Projection;

const BISECTION_STEPS: usize = 60;

#[derive(Debug, Clone)]
pub struct ReducedSolution {
    pub d: ComplexMatrix,
    /// `||D||^2`.
    pub norm_sq: f64,
    /// `inf { λ : B B* <= λ A A* }` from the bisection.
    pub lambda_star: f64,
}

fn check_rows(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.nrows() != b.nrows() {
        return Err(Error::ShapeMismatch(format!(
            "A has {} rows but B has {}",
            a.nrows(),
            b.nrows()
        )));
    }
    Ok(())
}

/// `||(I - P_{R(A)}) B||` and its threshold `tol_eq * max(1, ||B||)`.
fn inclusion_residual(
    b: &ComplexMatrix,
    a: &ComplexMatrix,
    scale: f64,
    tol: &ToleranceProfile,
) -> Result<(f64, f64)> {
    check_rows(a, b)?;
    let basis = column_space(a, scale, tol)?;
    let leak = b - &basis * (basis.adjoint() * b);
    Ok((operator_norm(&leak), tol.eq_threshold(operator_norm(b))))
}

/// `R(B) ⊆ R(A)` under the rank policy.
pub fn range_included(b: &ComplexMatrix, a: &ComplexMatrix, tol: &ToleranceProfile) -> Result<bool> {
    let (residual, threshold) = inclusion_residual(b, a, 0.0, tol)?;
    Ok(residual <= threshold)
}

/// `A† B` after the inclusion check, with ranks of `A` decided against `max(sigma_max, scale)`.
///
/// Used for blocks of a larger operator, where `scale` is the norm of the whole.
pub(crate) fn solve_reduced(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    scale: f64,
    tol: &ToleranceProfile,
) -> Result<ComplexMatrix> {
    let (residual, threshold) = inclusion_residual(b, a, scale, tol)?;
    if residual > threshold {
        return Err(Error::RangeNotIncluded {
            residual,
            threshold,
            borderline: residual <= 10.0 * threshold,
        });
    }
    Ok(pinv_scaled(a, scale, tol)? * b)
}

/// [`solve_reduced`] for Hermitian `A`, through the eigendecomposition.
///
/// The pseudoinverse `V Λ⁺ V*` is then Hermitian by construction, so `B* A† B` comes out
/// Hermitian even when `A` is badly conditioned.
pub(crate) fn solve_reduced_hermitian(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    scale: f64,
    tol: &ToleranceProfile,
) -> Result<ComplexMatrix> {
    check_rows(a, b)?;
    let eig = hermitian_eigen(a)?;
    let top = eig.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let cutoff = tol.tol_rank * top.max(scale);
    let keep: Vec<usize> = (0..eig.values.len())
        .filter(|&k| eig.values[k] != 0.0 && eig.values[k].abs() >= cutoff)
        .collect();
    let basis = eig.vectors.select_columns(&keep);
    let coords = basis.adjoint() * b;
    let residual = operator_norm(&(b - &basis * &coords));
    let threshold = tol.eq_threshold(operator_norm(b));
    if residual > threshold {
        return Err(Error::RangeNotIncluded {
            residual,
            threshold,
            borderline: residual <= 10.0 * threshold,
        });
    }
    let mut scaled = coords;
    for (row, &k) in keep.iter().enumerate() {
        scaled.row_mut(row).unscale_mut(eig.values[k]);
    }
    Ok(basis * scaled)
}

/// Reduced solution of `A X = B` together with both expressions for its squared norm.
pub fn reduced_solution(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &ToleranceProfile,
) -> Result<ReducedSolution> {
    let d = solve_reduced(a, b, 0.0, tol)?;
    let norm = operator_norm(&d);
    Ok(ReducedSolution {
        d,
        norm_sq: norm * norm,
        lambda_star: douglas_bound(a, b, tol)?,
    })
}

/// Smallest `λ` with `λ A A* - B B*` positive semidefinite, assuming `R(B) ⊆ R(A)`.
///
/// The pencil is compressed to `R(A)`, where `A A*` is invertible, and the bracket is
/// `[0, (||B|| / σ_min⁺(A))² + 1]`. A trial `λ` is accepted when the minimum eigenvalue
/// is at least `-tol_rank * λ * σ_min⁺(A)²`, which bounds the error in `λ` by `tol_rank * λ`.
pub fn douglas_bound(a: &ComplexMatrix, b: &ComplexMatrix, tol: &ToleranceProfile) -> Result<f64> {
    check_rows(a, b)?;
    let dec = svd(a)?;
    let r = dec.rank(0.0, tol);
    if r == 0 {
        return Ok(0.0);
    }
    let sigma_min = dec.sigma[r - 1];
    let range = dec.u.columns(0, r).into_owned();
    let aa = range.adjoint() * a * a.adjoint() * &range;
    let bb = range.adjoint() * b * b.adjoint() * &range;
    let feasible = |lambda: f64| -> Result<bool> {
        let gap = min_eigenvalue(&(aa.scale(lambda) - &bb))?;
        Ok(gap >= -tol.tol_rank * lambda * sigma_min * sigma_min)
    };
    let mut lo = 0.0;
    let mut hi = (operator_norm(b) / sigma_min).powi(2) + 1.0;
    if feasible(0.0)? {
        return Ok(0.0);
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// The reduced solution of `A X = Q A`, which is again an idempotent.
pub fn reduced_idempotent(a: &ComplexMatrix, q: &Projection, tol: &ToleranceProfile) -> Result<Projection> {
    let n = crate::numcore::ensure_square(a, "A")?;
    if q.dim() != n {
        return Err(Error::ShapeMismatch(format!(
            "projection acts on dimension {} but A on {n}",
            q.dim()
        )));
    }
    let qa = q.matrix() * a;
    let d = solve_reduced(a, &qa, 0.0, tol)?;
    Projection::new(d, tol)
}
