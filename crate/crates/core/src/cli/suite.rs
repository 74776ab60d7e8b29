//! The seeded property suite.
//!
//! Each family draws its cases from [`case_rng`], so a case depends only on
//! `(seed, family, index)`. Cases run in parallel and are merged by index.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::blocks::BlockFrame;
use crate::douglas::{reduced_idempotent, reduced_solution};
use crate::error::Result;
use crate::numcore::{distance, hermitian_eigen, identity, operator_norm, HermitianMatrix, ToleranceProfile};
use crate::projector::{
    compatibility, is_member, manifold, manifold_member, p_as, p_as_invertible, parallel_offset,
    selfadjoint_verdicts, Projection,
};
use crate::sampling::{self, case_rng, random_field};
use crate::shorted::{compare_routes, infimum_report, shifted_short, shorted, DEFAULT_SAMPLES};
use crate::subspace::{friedrichs_cos, Subspace};
use crate::twoproj::{decompose, norm_report};

/// `None` when the case passes, otherwise the reason it failed.
const MAX_DRAWS: usize = 16;
const SEPARATION: f64 = 1e-5;
const ZERO_FLOOR: f64 = 1e-12;

type CaseFn = fn(&mut ChaCha8Rng, usize, &ToleranceProfile) -> Result<Option<String>>;

struct Family {
    name: &'static str,
    run: CaseFn,
}

const FAMILIES: [Family; 10] = [
    Family {
        name: "construction",
        run: construction,
    },
    Family {
        name: "closed_form",
        run: closed_form,
    },
    Family {
        name: "shorted_routes",
        run: shorted_routes,
    },
    Family {
        name: "extremality",
        run: extremality,
    },
    Family {
        name: "shift",
        run: shift,
    },
    Family {
        name: "manifold",
        run: manifold_case,
    },
    Family {
        name: "indefinite",
        run: indefinite,
    },
    Family {
        name: "two_projections",
        run: two_projections,
    },
    Family {
        name: "parallel",
        run: parallel,
    },
    Family {
        name: "douglas",
        run: douglas,
    },
];

#[derive(Debug, Clone, Serialize)]
pub struct CaseFailure {
    pub index: u64,
    pub n: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilySummary {
    pub name: &'static str,
    pub cases: u64,
    pub passed: u64,
    pub failed: u64,
    pub failures: Vec<CaseFailure>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteSummary {
    pub seed: u64,
    pub cases: u64,
    pub dim: usize,
    pub families: Vec<FamilySummary>,
    pub total_cases: u64,
    pub total_failures: u64,
}

impl SuiteSummary {
    pub fn all_passed(&self) -> bool {
        self.total_failures == 0
    }
}

pub fn family_names() -> Vec<&'static str> {
    FAMILIES.iter().map(|f| f.name).collect()
}

/// Runs `cases` instances of every family with ambient dimension drawn from `2..=dim`.
pub fn run_suite(seed: u64, cases: u64, dim: usize, tol: &ToleranceProfile) -> SuiteSummary {
    assert!(dim >= 2, "suite needs dim >= 2");
    let families: Vec<FamilySummary> = FAMILIES
        .iter()
        .enumerate()
        .map(|(f, family)| {
            let outcomes: Vec<Option<CaseFailure>> = (0..cases)
                .into_par_iter()
                .map(|index| {
                    let mut rng = case_rng(seed, f as u64, index);
                    let n = rng.random_range(2..=dim);
                    let reason = match (family.run)(&mut rng, n, tol) {
                        Ok(None) => return None,
                        Ok(Some(reason)) => reason,
                        Err(e) => format!("error: {e}"),
                    };
                    Some(CaseFailure { index, n, reason })
                })
                .collect();
            let failures: Vec<CaseFailure> = outcomes.into_iter().flatten().collect();
            FamilySummary {
                name: family.name,
                cases,
                passed: cases - failures.len() as u64,
                failed: failures.len() as u64,
                failures,
            }
        })
        .collect();
    let total_failures = families.iter().map(|f| f.failed).sum();
    SuiteSummary {
        seed,
        cases,
        dim,
        total_cases: cases * families.len() as u64,
        total_failures,
        families,
    }
}

fn fail(reason: impl Into<String>) -> Result<Option<String>> {
    Ok(Some(reason.into()))
}

/// Draws until `accept` holds, keeping the last draw after [`MAX_DRAWS`] attempts.
fn redraw<T>(
    rng: &mut ChaCha8Rng,
    mut draw: impl FnMut(&mut ChaCha8Rng) -> T,
    accept: impl Fn(&T) -> bool,
) -> T {
    let mut value = draw(rng);
    for _ in 1..MAX_DRAWS {
        if accept(&value) {
            break;
        }
        value = draw(rng);
    }
    value
}

/// Every eigenvalue of the compression of `A` to `S` is either numerically zero or at
/// least [`SEPARATION`] times `||A||`, so no rank decision sits near its cutoff.
fn well_separated(a: &HermitianMatrix, s: &Subspace) -> bool {
    let scale = a.norm().max(1.0);
    let Ok(frame) = BlockFrame::new(s) else {
        return false;
    };
    let Ok(eig) = hermitian_eigen(&frame.split(a.matrix()).a) else {
        return false;
    };
    eig.values
        .iter()
        .all(|v| v.abs() <= ZERO_FLOOR * scale || v.abs() >= SEPARATION * scale)
}

fn psd_instance(rng: &mut ChaCha8Rng, n: usize, tol: &ToleranceProfile) -> (HermitianMatrix, Subspace) {
    let field = random_field(rng);
    let rank = rng.random_range(0..=n);
    let k = rng.random_range(0..=n);
    redraw(
        rng,
        |rng| {
            let a = sampling::random_psd(rng, n, rank, field);
            (a, sampling::random_subspace(rng, n, k, field, tol))
        },
        |(a, s)| well_separated(a, s),
    )
}

fn construction(rng: &mut ChaCha8Rng, n: usize, tol: &ToleranceProfile) -> Result<Option<String>> {
    let (a, s) = psd_instance(rng, n, tol);
    let q = p_as(&a, &s, tol)?;
    if !q.range().approx_eq(&s) {
        return fail("R(P_{A,S}) differs from S");
    }
    let verdicts = selfadjoint_verdicts(&a, &q, tol)?;
    if !(verdicts.commutation && verdicts.agree()) {
        return fail(format!("selfadjointness verdicts {verdicts:?}"));
    }
    let report = compatibility(&a, &s, tol)?;
    if !(report.compatible && report.conditions_agree()) {
        return fail("positive pair reported incompatible or conditions disagree");
    }
    Ok(None)
}

fn closed_form(rng: &mut ChaCha8Rng, n: usize, tol: &ToleranceProfile) -> Result<Option<String>> {
    let field = random_field(rng);
    let a = sampling::random_pd(rng, n, field);
    let k = rng.random_range(0..=n);
    let s = sampling::random_subspace(rng, n, k, field, tol);
    let gap = distance(
        p_as_invertible(&a, &s, tol)?.matrix(),
        p_as(&a, &s, tol)?.matrix(),
    );
    if gap > tol.eq_threshold(a.norm()) {
        return fail(format!("closed form differs by {gap:.3e}"));
    }
    Ok(None)
}

fn shorted_routes(rng: &mut ChaCha8Rng, n: usize, tol: &ToleranceProfile) -> Result<Option<String>> {
    let (a, s) = psd_instance(rng, n, tol);
    let routes = compare_routes(&a, &s, tol)?;
    if !routes.agree(&a, tol) {
        return fail(format!("routes differ by {:.3e}", routes.max_residual()));
    }
    if !routes.range_identity {
        return fail("R(Σ) differs from R(A) ∩ S^⊥");
    }
    let frame = BlockFrame::new(&s)?;
    let blocks = frame.split(a.matrix());
    if let Some(inv) = blocks.a.clone().try_inverse() {
        if crate::numcore::min_eigenvalue(a.matrix())? > 1e-3 * a.norm() {
            let schur = &blocks.c - blocks.b.adjoint() * inv * &blocks.b;
            let gap = distance(&frame.lower_corner(&schur), routes.block.sigma.matrix());
            if gap > tol.eq_threshold(a.norm()) {
                return fail(format!("Schur complement differs by {gap:.3e}"));
            }
        }
    }
    Ok(None)
}

fn extremality(rng: &mut ChaCha8Rng, n: usize, tol: &ToleranceProfile) -> Result<Option<String>> {
    let (a, s) = psd_instance(rng, n, tol);
    let report = infimum_report(&a, &s, rng.random(), DEFAULT_SAMPLES, tol)?;
    if !report.holds() {
        return fail(format!(
            "attainment residual {:.3e}, worst margin {:.3e}",
            report.attainment_residual, report.worst_margin
        ));
    }
    Ok(None)
}

fn shift(rng: &mut ChaCha8Rng, n: usize, tol: &ToleranceProfile) -> Result<Option<String>> {
    let (a, s) = psd_instance(rng, n, tol);
    let sigma = shorted(&a, &s, tol)?.sigma;
    let perp = identity(n) - s.projector_matrix();
    for lambda in [0.5, 1.0, 2.0] {
        let expected = sigma.matrix() + perp.scale(lambda);
        let gap = distance(shifted_short(&a, &s, lambda, tol)?.matrix(), &expected);
        if gap > tol.eq_threshold(a.norm() + lambda) {
            return fail(format!("shift by {lambda} off by {gap:.3e}"));
        }
    }
    Ok(None)
}

fn manifold_case(rng: &mut ChaCha8Rng, n: usize, tol: &ToleranceProfile) -> Result<Option<String>> {
    let field = random_field(rng);
    let rank = rng.random_range(0..n);
    let k = rng.random_range(1..=n);
    let (a, s) = redraw(
        rng,
        |rng| {
            let a = sampling::random_psd(rng, n, rank, field);
            (a, sampling::random_subspace(rng, n, k, field, tol))
        },
        |(a, s)| well_separated(a, s),
    );
    let param = manifold(&a, &s, tol)?;
    let base_norm = param.base.norm();
    let (rows, cols) = param.slot_shape();
    for _ in 0..5 {
        let z = sampling::gaussian(rng, rows, cols, field);
        let q = manifold_member(&param, &z, tol)?;
        if !is_member(&a, &s, &q, tol)? {
            return fail("parametrized projection is not in P(A,S)");
        }
        if q.norm() < base_norm - tol.tol_norm * base_norm.max(1.0) {
            return fail(format!("member norm {} below ||P_(A,S)|| {base_norm}", q.norm()));
        }
    }
    Ok(None)
}

fn indefinite(rng: &mut ChaCha8Rng, n: usize, tol: &ToleranceProfile) -> Result<Option<String>> {
    let field = random_field(rng);
    let engineered = rng.random::<bool>();
    let (a, s, incompatible) = if engineered {
        let k = rng.random_range(1..n);
        let leak = rng.random::<bool>();
        let (a, s) = sampling::singular_block_instance(rng, n, k, field, leak, tol);
        (a, s, leak)
    } else {
        let a = sampling::random_hermitian(rng, n, field);
        let k = rng.random_range(0..=n);
        (a, sampling::random_subspace(rng, n, k, field, tol), false)
    };
    let report = compatibility(&a, &s, tol)?;
    if !report.conditions_agree() {
        return fail(format!(
            "conditions disagree: range {}, block {}, sum {}",
            report.cond_range_pa, report.cond_block, report.cond_sum
        ));
    }
    if incompatible && report.compatible {
        return fail("engineered incompatible pair reported compatible");
    }
    Ok(None)
}

/// `ker Q` and `R(P)` meet at a Friedrichs angle bounded away from zero, which keeps
/// `||P_{Q,P}||` below about `1 / sqrt(2 SEPARATION)`.
fn well_angled(q: &Projection, p: &Projection) -> bool {
    friedrichs_cos(q.kernel(), p.range()).is_ok_and(|c| c <= 1.0 - SEPARATION)
}

fn two_projections(rng: &mut ChaCha8Rng, n: usize, tol: &ToleranceProfile) -> Result<Option<String>> {
    let field = random_field(rng);
    let (q, p) = if rng.random::<bool>() {
        let kq = rng.random_range(0..=n);
        let kp = rng.random_range(0..=n);
        redraw(
            rng,
            |rng| {
                (
                    sampling::random_orth_projection(rng, n, kq, field, tol),
                    sampling::random_orth_projection(rng, n, kp, field, tol),
                )
            },
            |(q, p)| well_angled(q, p),
        )
    } else {
        let ker_dim = rng.random_range(1..n);
        let nontrivial = rng.random_range(1..=ker_dim);
        let extra = rng.random_range(0..=n - nontrivial);
        redraw(
            rng,
            |rng| {
                sampling::projection_pair_with_common_kernel(rng, n, ker_dim, nontrivial, extra, field, tol)
            },
            |(q, p)| well_angled(q, p),
        )
    };
    let report = norm_report(&q, &p, tol)?;
    if report.n_dim < p.range().dim() && !report.norms_agree(tol) {
        return fail(format!(
            "norm formulas deviate by {:.3e}",
            report.max_relative_deviation()
        ));
    }
    if !report.kernel_ok {
        return fail("ker P_{Q,P} differs from its characterization");
    }
    let dec = decompose(&q, &p, tol)?;
    if !dec.holds(tol) {
        return fail(format!("decomposition residual {:.3e}", dec.residual));
    }
    Ok(None)
}

fn parallel(rng: &mut ChaCha8Rng, n: usize, tol: &ToleranceProfile) -> Result<Option<String>> {
    let field = random_field(rng);
    let rank = rng.random_range(0..=n);
    let k = rng.random_range(0..=n);
    let a = sampling::conditioned_psd(rng, n, rank, field);
    let s = sampling::random_subspace(rng, n, k, field, tol);
    let b = HermitianMatrix::psd(a.matrix() * a.matrix(), tol)?;
    parallel_offset(&a, &b, &s, tol)?;
    Ok(None)
}

fn douglas(rng: &mut ChaCha8Rng, n: usize, tol: &ToleranceProfile) -> Result<Option<String>> {
    let field = random_field(rng);
    let rank = rng.random_range(1..=n);
    let a = sampling::gaussian(rng, n, rank, field) * sampling::gaussian(rng, rank, n, field);
    let cols = rng.random_range(1..=n);
    let b = &a * sampling::gaussian(rng, n, cols, field);
    let sol = reduced_solution(&a, &b, tol)?;
    let residual = operator_norm(&(&a * &sol.d - &b));
    if residual > tol.eq_threshold(operator_norm(&b)) {
        return fail(format!("A D - B = {residual:.3e}"));
    }
    if (sol.norm_sq - sol.lambda_star).abs() > 1e-6 * sol.norm_sq.max(f64::MIN_POSITIVE) {
        return fail(format!(
            "||D||^2 = {} but lambda* = {}",
            sol.norm_sq, sol.lambda_star
        ));
    }

    let j = rng.random_range(0..=rank);
    let range = Subspace::from_spanning(&(&a * sampling::gaussian(rng, n, j, field)), tol)?;
    let frame = BlockFrame::new(&range)?;
    let x = sampling::gaussian(rng, frame.k(), n - frame.k(), field);
    let q = Projection::new(frame.range_s_idempotent(&x), tol)?;
    let d = reduced_idempotent(&a, &q, tol)?;
    let residual = operator_norm(&(&a * d.matrix() - q.matrix() * &a));
    if residual > tol.eq_threshold(operator_norm(&a) * q.norm()) {
        return fail(format!("A D - Q A = {residual:.3e}"));
    }
    Ok(None)
}
