//! The shorted operator `Σ(P,A)`: the largest positive `X <= A` with `R(X) ⊆ S^⊥`.
//!
//! Three constructions are provided and must agree:
//! the block form `(0 0; 0 c - d*d)` with `d` the reduced solution of `a^{1/2} x = b`;
//! `A^{1/2} P_M A^{1/2}` with `M = A^{-1/2}(S^⊥)`; and `A (I - P_{A,S})`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::blocks::BlockFrame;
use crate::douglas::solve_reduced_hermitian;
use crate::error::{Error, Result};
use crate::numcore::{
    distance, hermitian_eigen, hermitian_part, min_eigenvalue, operator_norm, psd_leq, psd_sqrt,
    psd_sqrt_scaled, ComplexMatrix, HermitianMatrix, ToleranceProfile,
};
use crate::projector::{p_as, Projection};
use crate::sampling;
use crate::subspace::{preimage, Subspace};

pub const DEFAULT_SAMPLES: usize = 50;
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Block,
    Projection,
    Compatible,
}

#[derive(Debug, Clone)]
pub struct ShortedResult {
    pub sigma: HermitianMatrix,
    /// Reduced solution of `a^{1/2} x = b`; only the block route produces it.
    pub d_witness: Option<ComplexMatrix>,
    pub route: Route,
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

/// Symmetrizes `m` and accepts it as positive when its spectrum is above
/// `-tol_eq * max(1, scale)`, the accuracy every route is held to. Negative eigenvalues
/// that survive are set to zero.
fn certify_psd(m: &ComplexMatrix, scale: f64, tol: &ToleranceProfile) -> Result<HermitianMatrix> {
    let h = hermitian_part(m);
    if h.nrows() == 0 {
        return Ok(HermitianMatrix::assume_psd(h));
    }
    let eig = hermitian_eigen(&h)?;
    let lowest = eig.values[0];
    let threshold = -tol.eq_threshold(scale);
    if lowest < threshold {
        return Err(Error::NotPositive {
            min_eigenvalue: lowest,
            threshold,
        });
    }
    if lowest >= 0.0 {
        return Ok(HermitianMatrix::assume_psd(h));
    }
    let mut scaled = eig.vectors.clone();
    for (j, &v) in eig.values.iter().enumerate() {
        scaled.column_mut(j).scale_mut(v.max(0.0));
    }
    Ok(HermitianMatrix::assume_psd(scaled * eig.vectors.adjoint()))
}

/// Block route: `Σ = (0 0; 0 c - d*d)` in the frame of `S`.
pub fn shorted(a: &HermitianMatrix, s: &Subspace, tol: &ToleranceProfile) -> Result<ShortedResult> {
    check_subspace(a, s)?;
    let a = a.require_psd(tol)?;
    let scale = a.norm();
    let frame = BlockFrame::new(s)?;
    let blocks = frame.split(a.matrix());
    let corner = HermitianMatrix::assume_psd(hermitian_part(&blocks.a));
    let root = psd_sqrt_scaled(&corner, scale, tol)?;
    let d = solve_reduced_hermitian(root.matrix(), &blocks.b, scale.sqrt(), tol).map_err(|_| {
        Error::VerificationFailed {
            what: "R(b) is not contained in R(a^{1/2})",
            residual: operator_norm(&blocks.b),
        }
    })?;
    let schur = &blocks.c - d.adjoint() * &d;
    let sigma = certify_psd(&frame.lower_corner(&schur), scale, tol)?;
    Ok(ShortedResult {
        sigma,
        d_witness: Some(d),
        route: Route::Block,
    })
}

/// `Σ = A^{1/2} P_M A^{1/2}` with `M` the preimage of `S^⊥` under `A^{1/2}`.
pub fn shorted_via_projection(
    a: &HermitianMatrix,
    s: &Subspace,
    tol: &ToleranceProfile,
) -> Result<ShortedResult> {
    check_subspace(a, s)?;
    let a = a.require_psd(tol)?;
    let root = psd_sqrt(&a, tol)?;
    let m = preimage(root.matrix(), &s.complement()?, tol)?;
    let sigma = root.matrix() * m.projector_matrix() * root.matrix();
    Ok(ShortedResult {
        sigma: certify_psd(&sigma, a.norm(), tol)?,
        d_witness: None,
        route: Route::Projection,
    })
}

/// `Σ = A Q` with `Q = I - P_{A,S}`.
pub fn shorted_compatible(
    a: &HermitianMatrix,
    s: &Subspace,
    tol: &ToleranceProfile,
) -> Result<ShortedResult> {
    check_subspace(a, s)?;
    let a = a.require_psd(tol)?;
    let q = p_as(&a, s, tol)?.complement();
    let aq = a.matrix() * q.matrix();
    let scale = a.norm() * q.norm().max(1.0);
    let skew = operator_norm(&(&aq - aq.adjoint()));
    if skew > tol.eq_threshold(scale) {
        return Err(Error::VerificationFailed {
            what: "A (I - P_{A,S}) is not Hermitian",
            residual: skew,
        });
    }
    Ok(ShortedResult {
        sigma: certify_psd(&aq, scale, tol)?,
        d_witness: None,
        route: Route::Compatible,
    })
}

/// `R(Σ)` with ranks decided against `||A||`.
pub fn shorted_range(
    a: &HermitianMatrix,
    sigma: &HermitianMatrix,
    tol: &ToleranceProfile,
) -> Result<Subspace> {
    Subspace::range_of(sigma.matrix(), a.norm(), tol)
}

/// `R(Σ) = R(A) ∩ S^⊥`.
pub fn range_identity(
    a: &HermitianMatrix,
    s: &Subspace,
    sigma: &HermitianMatrix,
    tol: &ToleranceProfile,
) -> Result<bool> {
    let expected = Subspace::range_of(a.matrix(), 0.0, tol)?.intersect(&s.complement()?)?;
    Ok(shorted_range(a, sigma, tol)?.approx_eq(&expected))
}

/// All three routes and their pairwise distances.
#[derive(Debug, Clone)]
pub struct RouteComparison {
    pub block: ShortedResult,
    pub projection: ShortedResult,
    pub compatible: ShortedResult,
    pub block_vs_projection: f64,
    pub block_vs_compatible: f64,
    pub projection_vs_compatible: f64,
    pub range_identity: bool,
}

impl RouteComparison {
    pub fn max_residual(&self) -> f64 {
        self.block_vs_projection
            .max(self.block_vs_compatible)
            .max(self.projection_vs_compatible)
    }

    /// Pairwise agreement within `tol_eq * max(1, ||A||)`.
    pub fn agree(&self, a: &HermitianMatrix, tol: &ToleranceProfile) -> bool {
        self.max_residual() <= tol.eq_threshold(a.norm())
    }
}

pub fn compare_routes(a: &HermitianMatrix, s: &Subspace, tol: &ToleranceProfile) -> Result<RouteComparison> {
    let block = shorted(a, s, tol)?;
    let projection = shorted_via_projection(a, s, tol)?;
    let compatible = shorted_compatible(a, s, tol)?;
    let range_identity = range_identity(a, s, &block.sigma, tol)?;
    Ok(RouteComparison {
        block_vs_projection: distance(block.sigma.matrix(), projection.sigma.matrix()),
        block_vs_compatible: distance(block.sigma.matrix(), compatible.sigma.matrix()),
        projection_vs_compatible: distance(projection.sigma.matrix(), compatible.sigma.matrix()),
        range_identity,
        block,
        projection,
        compatible,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MinorantReport {
    /// `X <= A`.
    pub below_a: bool,
    /// `R(X) ⊆ S^⊥`.
    pub range_in_perp: bool,
    /// `X <= Σ(P,A)`.
    pub below_sigma: bool,
}

impl MinorantReport {
    pub fn is_minorant(&self) -> bool {
        self.below_a && self.range_in_perp
    }

    /// True when `X` is a minorant and is dominated by `Σ`.
    pub fn verdict(&self) -> bool {
        self.is_minorant() && self.below_sigma
    }

    /// A minorant that `Σ` fails to dominate; never expected.
    pub fn refutes_maximality(&self) -> bool {
        self.is_minorant() && !self.below_sigma
    }
}

pub fn minorant_check(
    a: &HermitianMatrix,
    s: &Subspace,
    x: &HermitianMatrix,
    tol: &ToleranceProfile,
) -> Result<MinorantReport> {
    check_subspace(a, s)?;
    check_subspace(x, s)?;
    let x = x.require_psd(tol)?;
    let sigma = shorted(a, s, tol)?.sigma;
    let leak = operator_norm(&(s.basis().adjoint() * x.matrix()));
    let report = MinorantReport {
        below_a: psd_leq(x.matrix(), a.matrix(), tol)?,
        range_in_perp: leak <= tol.eq_threshold(x.norm()),
        below_sigma: psd_leq(x.matrix(), sigma.matrix(), tol)?,
    };
    if !report.is_minorant() {
        log::info!(
            "not a minorant: X <= A {}, range leak into S {leak:.3e}",
            report.below_a
        );
    }
    Ok(report)
}

/// `Q = I - P_{A,S}` attains `Σ = Q* A Q`, and `Σ <= R* A R` for sampled idempotents `R`
/// with kernel `S`.
pub fn infimum_attained(
    a: &HermitianMatrix,
    s: &Subspace,
    tol: &ToleranceProfile,
) -> Result<(Projection, bool)> {
    let report = infimum_report(a, s, DEFAULT_SEED, DEFAULT_SAMPLES, tol)?;
    let ok = report.holds();
    Ok((report.q, ok))
}

#[derive(Debug, Clone)]
pub struct InfimumReport {
    pub q: Projection,
    /// `||Q* A Q - Σ||`.
    pub attainment_residual: f64,
    pub attained: bool,
    /// Smallest eigenvalue of `R* A R - Σ` over the samples, divided by `max(1, ||A||)`.
    pub worst_margin: f64,
    pub dominated: bool,
    pub samples: usize,
}

impl InfimumReport {
    pub fn holds(&self) -> bool {
        self.attained && self.dominated
    }
}

/// [`infimum_attained`] with an explicit seed and sample count. Samples are
/// `R = (I - P) + P G (I - P)` with Gaussian `G`.
pub fn infimum_report(
    a: &HermitianMatrix,
    s: &Subspace,
    seed: u64,
    samples: usize,
    tol: &ToleranceProfile,
) -> Result<InfimumReport> {
    check_subspace(a, s)?;
    let a = a.require_psd(tol)?;
    let sigma = shorted(&a, s, tol)?.sigma;
    let q = p_as(&a, s, tol)?.complement();
    let attained_sigma = q.matrix().adjoint() * a.matrix() * q.matrix();
    let attainment_residual = distance(&attained_sigma, sigma.matrix());
    let scale = a.norm().max(1.0);
    let frame = BlockFrame::new(s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = if crate::numcore::is_real(a.matrix()) && crate::numcore::is_real(s.basis()) {
        sampling::Field::Real
    } else {
        sampling::Field::Complex
    };
    let mut worst = f64::INFINITY;
    for _ in 0..samples {
        let g = sampling::gaussian(&mut rng, frame.k(), frame.n() - frame.k(), field);
        let r = frame.kernel_s_idempotent(&g);
        let gap = r.adjoint() * a.matrix() * &r - sigma.matrix();
        worst = worst.min(min_eigenvalue(&gap)? / scale);
    }
    if samples == 0 || a.dim() == 0 {
        worst = 0.0;
    }
    Ok(InfimumReport {
        q,
        attainment_residual,
        attained: attainment_residual <= tol.eq_threshold(a.norm()),
        worst_margin: worst,
        dominated: worst >= -tol.tol_rank,
        samples,
    })
}

/// `ker Σ(P,A) = S`.
pub fn is_admissible(a: &HermitianMatrix, s: &Subspace, tol: &ToleranceProfile) -> Result<bool> {
    let sigma = shorted(a, s, tol)?.sigma;
    Ok(Subspace::kernel_of(sigma.matrix(), a.norm(), tol)?.approx_eq(s))
}

/// `Σ(P, A + λ(I - P))`, used to confirm that shifting on `S^⊥` shifts the short.
pub fn shifted_short(
    a: &HermitianMatrix,
    s: &Subspace,
    lambda: f64,
    tol: &ToleranceProfile,
) -> Result<HermitianMatrix> {
    let shift = s.complement()?.projector_matrix().scale(lambda);
    let shifted = HermitianMatrix::psd(a.matrix() + shift, tol)?;
    Ok(shorted(&shifted, s, tol)?.sigma)
}
