//! Acceptance criteria, one line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the PASS/FAIL table is always printed.
//! Reference values come from test-side constructions: Gaussian elimination inverses,
//! explicit Schur complements, full-rank-factorization pseudoinverses, traces of
//! idempotents and hand-built projections.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use oblique::blocks::BlockFrame;
use oblique::douglas::{douglas_bound, reduced_idempotent, reduced_solution};
use oblique::numcore::{c64, from_real, identity, min_eigenvalue, operator_norm};
use oblique::projector::{
    compatibility, is_member, manifold, manifold_member, p_as, p_as_invertible, parallel_offset,
    selfadjoint_verdicts,
};
use oblique::sampling::{self, random_field};
use oblique::shorted::{shifted_short, shorted, shorted_compatible, shorted_via_projection};
use oblique::twoproj::{decompose, kernel_characterization, line_projection, norm_report, p_qp};
use oblique::{ComplexMatrix, HermitianMatrix, Projection, Subspace, ToleranceProfile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MAX_DIM: usize = 12;

fn tol() -> ToleranceProfile {
    ToleranceProfile::default()
}

fn norm(m: &ComplexMatrix) -> f64 {
    operator_norm(m)
}

fn at_least_one(x: f64) -> f64 {
    x.max(1.0)
}

/// Gauss-Jordan elimination with partial pivoting.
fn gauss_inverse(m: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = m.nrows();
    let mut a = m.clone();
    let mut inv = identity(n);
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[(i, col)].norm().total_cmp(&a[(j, col)].norm()))?;
        if a[(pivot, col)].norm() == 0.0 {
            return None;
        }
        a.swap_rows(col, pivot);
        inv.swap_rows(col, pivot);
        let scale = a[(col, col)].inv();
        for j in 0..n {
            a[(col, j)] *= scale;
            inv[(col, j)] *= scale;
        }
        for i in 0..n {
            if i != col {
                let factor = a[(i, col)];
                if factor.norm() != 0.0 {
                    for j in 0..n {
                        let (aj, ij) = (a[(col, j)], inv[(col, j)]);
                        a[(i, j)] -= factor * aj;
                        inv[(i, j)] -= factor * ij;
                    }
                }
            }
        }
    }
    Some(inv)
}

/// Orthogonal projector onto `ker (sum of PSD matrices)`, i.e. the intersection of their kernels.
fn kernel_projector(h: &ComplexMatrix, scale: f64) -> ComplexMatrix {
    Subspace::kernel_of(h, scale, &tol()).unwrap().projector_matrix()
}

/// Residuals that certify `Q` is an idempotent with range `S`: `Q^2 = Q`, `(I - P_S) Q = 0`,
/// `Q P_S = P_S`, relative to `max(1, ||Q||)`.
fn projection_residuals(q: &ComplexMatrix, s: &Subspace) -> (f64, f64) {
    let n = q.nrows();
    let ps = s.projector_matrix();
    let scale = at_least_one(norm(q));
    let idem = norm(&(q * q - q)) / scale;
    let range = norm(&((identity(n) - &ps) * q)).max(norm(&(q * &ps - &ps))) / scale;
    (idem, range)
}

fn selfadjoint_gap(a: &ComplexMatrix, q: &ComplexMatrix) -> f64 {
    norm(&(a * q - q.adjoint() * a)) / (at_least_one(norm(a)) * at_least_one(norm(q)))
}

/// A positive `A` and a subspace `S` with a unit vector of `S` in `ker A`, so that
/// `ker A ∩ S` is nontrivial.
fn kernel_meets_s(rng: &mut ChaCha8Rng, n: usize) -> (HermitianMatrix, Subspace) {
    let field = random_field(rng);
    let k = rng.random_range(1..n);
    let s = sampling::random_subspace(rng, n, k, field, &tol());
    let v = s.basis().column(0).into_owned();
    let cut = identity(n) - &v * v.adjoint();
    let rank = rng.random_range(0..n);
    let g = sampling::gaussian(rng, n, rank, field);
    let a = &cut * &g * g.adjoint() * &cut;
    (HermitianMatrix::psd(a, &tol()).unwrap(), s)
}

fn psd_case(rng: &mut ChaCha8Rng) -> (HermitianMatrix, Subspace, usize) {
    let n = rng.random_range(2..=MAX_DIM);
    let field = random_field(rng);
    let rank = rng.random_range(0..=n);
    let k = rng.random_range(0..=n);
    let a = sampling::random_psd(rng, n, rank, field);
    let s = sampling::random_subspace(rng, n, k, field, &tol());
    (a, s, rank)
}

#[derive(Default)]
struct Tally {
    cases: usize,
    failures: Vec<String>,
    worst: BTreeMap<&'static str, f64>,
}

impl Tally {
    fn case(&mut self) {
        self.cases += 1;
    }

    /// Records `value` under `name` and fails when it exceeds `limit`.
    fn metric(&mut self, name: &'static str, value: f64, limit: f64) {
        let worst = self.worst.entry(name).or_insert(0.0);
        if value.is_nan() || value > *worst {
            *worst = value;
        }
        if value.is_nan() || value > limit {
            self.fail(format!("case {}: {name} = {value:.3e} > {limit:.0e}", self.cases));
        }
    }

    fn check(&mut self, ok: bool, what: impl std::fmt::Display) {
        if !ok {
            self.fail(format!("case {}: {what}", self.cases));
        }
    }

    fn fail(&mut self, message: String) {
        self.failures.push(message);
    }

    fn error(&mut self, e: oblique::Error) {
        self.fail(format!("case {}: error {e}", self.cases));
    }

    fn finish(self, extra: &str) -> (bool, String) {
        let mut parts = vec![format!("{} cases", self.cases)];
        parts.extend(self.worst.iter().map(|(k, v)| format!("max {k} {v:.2e}")));
        if !extra.is_empty() {
            parts.push(extra.to_owned());
        }
        if !self.failures.is_empty() {
            parts.push(format!(
                "{} failures, first: {}",
                self.failures.len(),
                self.failures[0]
            ));
        }
        (self.failures.is_empty(), parts.join("; "))
    }
}

macro_rules! attempt {
    ($tally:expr, $e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => {
                $tally.error(e);
                continue;
            }
        }
    };
}

fn construction_validity() -> (bool, String) {
    let tol = tol();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut t = Tally::default();
    let mut rar_checked = 0;
    for _ in 0..500 {
        t.case();
        let (a, s, _) = psd_case(&mut rng);
        let n = a.dim();
        let q = attempt!(t, p_as(&a, &s, &tol));
        let (idem, range) = projection_residuals(q.matrix(), &s);
        t.metric("idempotency", idem, 1e-9);
        t.metric("range", range, 1e-9);
        t.metric("selfadjoint", selfadjoint_gap(a.matrix(), q.matrix()), 1e-9);
        // ker Q ⊆ A^{-1}(S^⊥): P_S A (I - Q) = 0.
        let leak = norm(&(s.projector_matrix() * a.matrix() * (identity(n) - q.matrix())))
            / (at_least_one(a.norm()) * at_least_one(q.norm()));
        t.metric("kernel", leak, 1e-9);
        let trace: f64 = q.matrix().trace().re;
        t.check(
            (trace - s.dim() as f64).abs() < 1e-8,
            format!("trace {trace} vs dim S {}", s.dim()),
        );

        let verdicts = attempt!(t, selfadjoint_verdicts(&a, &q, &tol));
        t.check(
            verdicts.commutation && verdicts.agree(),
            format!("{verdicts:?} on P_(A,S)"),
        );
        if s.dim() > 0 && s.dim() < n {
            let frame = attempt!(t, BlockFrame::new(&s));
            let x = sampling::complex_gaussian(&mut rng, frame.k(), n - frame.k());
            let r = attempt!(t, Projection::new(frame.range_s_idempotent(&x), &tol));
            let verdicts = attempt!(t, selfadjoint_verdicts(&a, &r, &tol));
            t.check(verdicts.agree(), format!("{verdicts:?} on a random idempotent"));
            rar_checked += 1;
        }
    }
    t.finish(&format!(
        "three-way test also on {rar_checked} random idempotents"
    ))
}

fn closed_form_agreement() -> (bool, String) {
    let tol = tol();
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut t = Tally::default();
    for _ in 0..200 {
        t.case();
        let n = rng.random_range(2..=MAX_DIM);
        let field = random_field(&mut rng);
        let a = sampling::random_pd(&mut rng, n, field);
        let k = rng.random_range(0..=n);
        let s = sampling::random_subspace(&mut rng, n, k, field, &tol);
        let q = attempt!(t, p_as(&a, &s, &tol));
        let closed = attempt!(t, p_as_invertible(&a, &s, &tol));
        let scale = at_least_one(q.norm());
        t.metric(
            "p_as vs closed form",
            norm(&(q.matrix() - closed.matrix())) / scale,
            1e-8,
        );

        let p = s.projector_matrix();
        let e = identity(n) - &p;
        let m = &p * a.matrix() * &p + &e * a.matrix() * &e;
        let Some(inv) = gauss_inverse(&m) else {
            t.check(false, "elimination found a zero pivot");
            continue;
        };
        let oracle = &p * inv * a.matrix();
        t.metric("p_as vs elimination", norm(&(q.matrix() - oracle)) / scale, 1e-8);
    }
    t.finish("")
}

fn shorted_routes() -> (bool, String) {
    let tol = tol();
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut t = Tally::default();
    let mut singular = 0;
    let mut invertible = 0;
    for i in 0..500 {
        t.case();
        let (a, s) = if i % 4 == 0 {
            let n = rng.random_range(2..=MAX_DIM);
            let field = random_field(&mut rng);
            let k = rng.random_range(0..=n);
            let a = sampling::random_pd(&mut rng, n, field);
            (a, sampling::random_subspace(&mut rng, n, k, field, &tol))
        } else {
            let (a, s, _) = psd_case(&mut rng);
            (a, s)
        };
        let scale = at_least_one(a.norm());
        let block = attempt!(t, shorted(&a, &s, &tol)).sigma;
        let projection = attempt!(t, shorted_via_projection(&a, &s, &tol)).sigma;
        let compatible = attempt!(t, shorted_compatible(&a, &s, &tol)).sigma;
        let d = |x: &HermitianMatrix, y: &HermitianMatrix| norm(&(x.matrix() - y.matrix())) / scale;
        t.metric("block vs projection", d(&block, &projection), 1e-8);
        t.metric("block vs compatible", d(&block, &compatible), 1e-8);
        t.metric("projection vs compatible", d(&projection, &compatible), 1e-8);

        let lowest = min_eigenvalue(a.matrix()).unwrap();
        if lowest > 1e-12 * a.norm() {
            invertible += 1;
            // c - b* a^{-1} b, written without a frame as A - A B (B* A B)^{-1} B* A.
            let b = s.basis();
            let oracle = if s.dim() == 0 {
                a.matrix().clone()
            } else {
                let inner = gauss_inverse(&(b.adjoint() * a.matrix() * b)).unwrap();
                a.matrix() - a.matrix() * b * inner * b.adjoint() * a.matrix()
            };
            t.metric(
                "block vs Schur complement",
                norm(&(block.matrix() - oracle)) / scale,
                1e-8,
            );
        } else {
            singular += 1;
        }
    }
    t.finish(&format!("{singular} singular, {invertible} invertible"))
}

fn extremality() -> (bool, String) {
    let tol = tol();
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut t = Tally::default();
    for _ in 0..500 {
        t.case();
        let (a, s, _) = psd_case(&mut rng);
        let n = a.dim();
        let sigma = attempt!(t, shorted(&a, &s, &tol)).sigma;
        let p = s.projector_matrix();
        let e = identity(n) - &p;
        let mut worst = f64::INFINITY;
        for _ in 0..50 {
            let g = sampling::complex_gaussian(&mut rng, n, n).scale(rng.random_range(0.1..3.0));
            let r = &e + &p * g * &e;
            let gap = r.adjoint() * a.matrix() * &r - sigma.matrix();
            worst = worst.min(min_eigenvalue(&gap).unwrap());
        }
        let margin = if a.norm() > 0.0 { -worst / a.norm() } else { -worst };
        t.metric("-min eig(R*AR - Σ)/||A||", margin.max(0.0), 1e-10);
        let q = attempt!(t, p_as(&a, &s, &tol)).complement();
        let attained = q.matrix().adjoint() * a.matrix() * q.matrix();
        t.metric(
            "attainment",
            norm(&(attained - sigma.matrix())) / at_least_one(a.norm()),
            1e-8,
        );
    }
    t.finish("50 idempotents with kernel S per case")
}

fn range_identity() -> (bool, String) {
    let tol = tol();
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut t = Tally::default();
    for _ in 0..500 {
        t.case();
        let (a, s, rank) = psd_case(&mut rng);
        let n = a.dim();
        let sigma = attempt!(t, shorted(&a, &s, &tol)).sigma;
        let range_sigma = attempt!(t, Subspace::range_of(sigma.matrix(), a.norm(), &tol));
        // R(A) ∩ S^⊥ = ker((I - P_{R(A)}) + P_S).
        let range_a = Subspace::range_of(a.matrix(), 0.0, &tol).unwrap();
        t.check(
            range_a.dim() == rank,
            format!("rank {} vs constructed {rank}", range_a.dim()),
        );
        let expected = kernel_projector(
            &(identity(n) - range_a.projector_matrix() + s.projector_matrix()),
            1.0,
        );
        t.metric(
            "range projector gap",
            norm(&(range_sigma.projector_matrix() - expected)),
            1e-8,
        );

        let e = identity(n) - s.projector_matrix();
        for lambda in [0.5, 1.0, 2.0] {
            let shifted = attempt!(t, shifted_short(&a, &s, lambda, &tol));
            let expected = sigma.matrix() + e.scale(lambda);
            t.metric(
                "shift identity",
                norm(&(shifted.matrix() - expected)) / at_least_one(a.norm() + lambda),
                1e-8,
            );
        }
    }
    t.finish("")
}

fn manifold_and_minimality() -> (bool, String) {
    let tol = tol();
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let mut t = Tally::default();
    let mut members = 0;
    for _ in 0..100 {
        t.case();
        let n = rng.random_range(3..=MAX_DIM);
        let (a, s) = kernel_meets_s(&mut rng, n);
        let param = attempt!(t, manifold(&a, &s, &tol));
        t.check(!param.is_singleton(), "engineered instance has a single member");
        let base_norm = param.base.norm();
        let (rows, cols) = param.slot_shape();
        for _ in 0..100 {
            let z = sampling::complex_gaussian(&mut rng, rows, cols)
                .scale(10f64.powf(rng.random_range(-6.0..1.0)));
            let q = attempt!(t, manifold_member(&param, &z, &tol));
            let (idem, range) = projection_residuals(q.matrix(), &s);
            t.metric("member idempotency", idem, 1e-9);
            t.metric("member range", range, 1e-9);
            t.metric(
                "member selfadjoint",
                selfadjoint_gap(a.matrix(), q.matrix()),
                1e-9,
            );
            t.metric(
                "norm deficit",
                ((base_norm - q.norm()) / at_least_one(base_norm)).max(0.0),
                1e-10,
            );
            members += 1;
        }
    }

    // The singular weight with a free direction: A = e1e1* + e1e3* + e3e1* + e3e3* + e4e4*,
    // S = span{e1, e2}. Then N = span{e2}, P_{A,S} = [[1,0,1,0],[0,1,0,0],0,0] and adding
    // the block e2 e4* gives a different member with the same norm √2.
    let a4 = HermitianMatrix::psd(
        from_real(
            4,
            4,
            &[1., 0., 1., 0., 0., 0., 0., 0., 1., 0., 1., 0., 0., 0., 0., 1.],
        ),
        &tol,
    )
    .unwrap();
    let s4 = Subspace::from_spanning(&from_real(4, 2, &[1., 0., 0., 1., 0., 0., 0., 0.]), &tol).unwrap();
    let base = p_as(&a4, &s4, &tol).unwrap();
    let expected_base = from_real(
        4,
        4,
        &[1., 0., 1., 0., 0., 1., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0.],
    );
    let sqrt2_gap = (base.norm() - 2f64.sqrt()).abs();
    let mut other = expected_base.clone();
    other[(1, 3)] = c64(1.0, 0.0);
    let other = Projection::new(other, &tol).unwrap();
    let distinct = norm(&(other.matrix() - base.matrix())) > 0.5;
    let other_member =
        is_member(&a4, &s4, &other, &tol).unwrap() && selfadjoint_gap(a4.matrix(), other.matrix()) < 1e-15;
    let equal_norm = (other.norm() - base.norm()).abs() <= 1e-9;
    t.check(
        norm(&(base.matrix() - &expected_base)) < 1e-12,
        "P_(A,S) differs from the explicit matrix",
    );
    t.check(sqrt2_gap <= 1e-9, format!("||P_(A,S)|| - √2 = {sqrt2_gap:.3e}"));
    t.check(
        distinct && other_member && equal_norm,
        "no distinct member of equal norm",
    );
    t.finish(&format!(
        "{members} members; √2 example: |norm - √2| {sqrt2_gap:.1e}, second member of norm {:.15}",
        other.norm()
    ))
}

fn indefinite_compatibility() -> (bool, String) {
    let tol = tol();
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let mut t = Tally::default();
    let mut engineered_incompatible = 0;
    let mut reported_incompatible = 0;
    for i in 0..500 {
        t.case();
        let n = rng.random_range(2..=MAX_DIM);
        let field = random_field(&mut rng);
        let (a, s, expect) = match i % 5 {
            0 | 1 => {
                let k = rng.random_range(1..n);
                let (a, s) = sampling::singular_block_instance(&mut rng, n, k, field, true, &tol);
                engineered_incompatible += 1;
                (a, s, Some(false))
            }
            2 => {
                let k = rng.random_range(1..n);
                let (a, s) = sampling::singular_block_instance(&mut rng, n, k, field, false, &tol);
                (a, s, Some(true))
            }
            _ => {
                let a = sampling::random_hermitian(&mut rng, n, field);
                let k = rng.random_range(0..=n);
                (a, sampling::random_subspace(&mut rng, n, k, field, &tol), None)
            }
        };
        let report = attempt!(t, compatibility(&a, &s, &tol));
        t.check(
            report.conditions_agree(),
            format!(
                "conditions disagree: {} {} {}",
                report.cond_range_pa, report.cond_block, report.cond_sum
            ),
        );
        if let Some(expected) = expect {
            t.check(
                report.compatible == expected,
                format!("expected compatible = {expected}"),
            );
        }
        if !report.compatible {
            reported_incompatible += 1;
        }
    }
    let swap = HermitianMatrix::new(from_real(2, 2, &[0., 1., 1., 0.]), &tol).unwrap();
    let e1 = Subspace::from_spanning(&from_real(2, 1, &[1., 0.]), &tol).unwrap();
    let witness = compatibility(&swap, &e1, &tol).unwrap();
    t.check(
        !witness.compatible && witness.conditions_agree(),
        "2x2 witness not reported incompatible",
    );
    t.check(
        engineered_incompatible >= 50,
        "too few engineered incompatible instances",
    );
    t.finish(&format!(
        "{engineered_incompatible} engineered incompatible, {reported_incompatible} reported incompatible, 2x2 witness incompatible"
    ))
}

fn two_projections() -> (bool, String) {
    let tol = tol();
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let mut t = Tally::default();
    let check_kernel = |t: &mut Tally, q: &Projection, p: &Projection| -> Result<(), oblique::Error> {
        let n = q.dim();
        let pqp = p_qp(q, p, &tol)?;
        // Q^{-1}(ker P) = ker(PQ); N = ker Q ∩ R(P) = ker(Q + (I - P)).
        let pre = kernel_projector(&(p.matrix() * q.matrix()), 1.0);
        let common = kernel_projector(&(q.matrix() + identity(n) - p.matrix()), 1.0);
        let ker = kernel_projector(pqp.matrix(), 1.0);
        t.metric("kernel characterization", norm(&(ker - (pre - common))), 1e-8);
        t.check(
            kernel_characterization(q, p, &tol)?,
            "kernel_characterization is false",
        );
        Ok(())
    };
    for _ in 0..500 {
        t.case();
        let n = rng.random_range(2..=MAX_DIM);
        let field = random_field(&mut rng);
        let kq = rng.random_range(1..=n);
        let kp = rng.random_range(1..=n);
        let q = sampling::random_orth_projection(&mut rng, n, kq, field, &tol);
        let p = sampling::random_orth_projection(&mut rng, n, kp, field, &tol);
        let report = attempt!(t, norm_report(&q, &p, &tol));
        if report.n_dim < kp {
            let scale = report.norm;
            for (name, v) in [
                ("inverse formula", report.norm_via_inverse),
                ("defect formula", report.norm_via_defect),
                ("restriction formula", report.norm_via_restriction),
            ] {
                t.metric(name, (v - report.norm).abs() / scale, 1e-8);
            }
        }
        attempt!(t, check_kernel(&mut t, &q, &p));
    }

    let mut sweep_worst: f64 = 0.0;
    let steps = 199;
    let p = line_projection(0.0, &tol);
    for k in 1..=steps {
        let theta = FRAC_PI_2 * k as f64 / (steps + 1) as f64;
        let q = line_projection(theta, &tol);
        match p_qp(&q, &p, &tol) {
            Ok(pqp) => sweep_worst = sweep_worst.max((pqp.norm() * theta.cos() - 1.0).abs()),
            Err(e) => t.error(e),
        }
    }
    t.metric("sweep |norm cos θ - 1|", sweep_worst, 1e-9);

    let mut engineered = 0;
    for _ in 0..200 {
        t.case();
        let n = rng.random_range(3..=MAX_DIM);
        let field = random_field(&mut rng);
        let ker_dim = rng.random_range(1..n);
        let nontrivial = rng.random_range(1..=ker_dim);
        let extra = rng.random_range(1..=n - nontrivial);
        let (q, p) = sampling::projection_pair_with_common_kernel(
            &mut rng, n, ker_dim, nontrivial, extra, field, &tol,
        );
        let full = attempt!(t, p_qp(&q, &p, &tol));
        let p_n = kernel_projector(&(q.matrix() + identity(n) - p.matrix()), 1.0);
        let dim_n = p_n.trace().re.round() as usize;
        t.check(dim_n >= nontrivial, format!("dim N = {dim_n} < {nontrivial}"));
        let p0 = attempt!(t, Projection::new(p.matrix() - &p_n, &tol));
        let reduced = attempt!(t, p_qp(&q, &p0, &tol));
        let residual = norm(&(full.matrix() - &p_n - reduced.matrix())) / at_least_one(full.norm());
        t.metric("decomposition", residual, 1e-9);
        let dec = attempt!(t, decompose(&q, &p, &tol));
        t.metric(
            "library decomposition",
            dec.residual / at_least_one(full.norm()),
            1e-9,
        );
        attempt!(t, check_kernel(&mut t, &q, &p));
        engineered += 1;
    }
    t.finish(&format!(
        "{steps}-point sweep, {engineered} pairs with ker Q ∩ R(P) ≠ 0"
    ))
}

fn parallel_manifolds() -> (bool, String) {
    let tol = tol();
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let mut t = Tally::default();
    let mut probes = 0;
    for i in 0..200 {
        t.case();
        let n = rng.random_range(3..=MAX_DIM);
        let field = random_field(&mut rng);
        let k = rng.random_range(1..n);
        let s = sampling::random_subspace(&mut rng, n, k, field, &tol);
        // Spectrum in [0.5, 2] on the range, so R(A) = R(A^2) survives the rank policy;
        // even cases put a unit vector of S into ker A.
        let a = if i % 2 == 0 {
            let v = s.basis().columns(0, 1).into_owned();
            let others = Subspace::from_orthonormal(v, &tol).unwrap().complement().unwrap();
            let rank = rng.random_range(0..n);
            let mix = sampling::random_unitary(&mut rng, n - 1, field);
            let c = others.basis() * mix.columns(0, rank);
            let lambda: Vec<f64> = (0..rank).map(|_| rng.random_range(0.5..2.0)).collect();
            let d = oblique::numcore::real_diag(&lambda);
            HermitianMatrix::psd(&c * d * c.adjoint(), &tol).unwrap()
        } else {
            let rank = rng.random_range(0..=n);
            sampling::conditioned_psd(&mut rng, n, rank, field)
        };
        let b = HermitianMatrix::psd(a.matrix() * a.matrix(), &tol).unwrap();
        let delta = attempt!(t, parallel_offset(&a, &b, &s, &tol));
        let param = attempt!(t, manifold(&a, &s, &tol));
        let (rows, cols) = param.slot_shape();
        for _ in 0..20 {
            let z = sampling::complex_gaussian(&mut rng, rows, cols);
            let q = param.base.matrix() + param.embed(&z).unwrap() + &delta;
            let (idem, range) = projection_residuals(&q, &s);
            t.metric("translated idempotency", idem, 1e-9);
            t.metric("translated range", range, 1e-9);
            t.metric("B-selfadjoint", selfadjoint_gap(b.matrix(), &q), 1e-9);
            probes += 1;
        }
    }
    t.finish(&format!("{probes} translated members"))
}

fn douglas() -> (bool, String) {
    let tol = tol();
    let mut rng = ChaCha8Rng::seed_from_u64(110);
    let mut t = Tally::default();
    for _ in 0..500 {
        t.case();
        let n = rng.random_range(2..=MAX_DIM);
        let field = random_field(&mut rng);
        let r = rng.random_range(1..=n);
        let g1 = sampling::gaussian(&mut rng, n, r, field);
        let g2 = sampling::gaussian(&mut rng, r, n, field);
        let a = &g1 * &g2;
        let cols = rng.random_range(1..=n);
        let b = &a * sampling::gaussian(&mut rng, n, cols, field);
        let sol = attempt!(t, reduced_solution(&a, &b, &tol));
        // A† = G2* (G2 G2*)^{-1} (G1* G1)^{-1} G1* for a full-rank factorization.
        let left = gauss_inverse(&(g1.adjoint() * &g1)).unwrap() * g1.adjoint();
        let right = g2.adjoint() * gauss_inverse(&(&g2 * g2.adjoint())).unwrap();
        let pinv = &right * &left;
        let oracle = &pinv * &b;
        let scale = at_least_one(norm(&oracle));
        t.metric("D vs A†B", norm(&(&sol.d - &oracle)) / scale, 1e-8);
        t.metric(
            "A D - B",
            norm(&(&a * &sol.d - &b)) / at_least_one(norm(&b)),
            1e-9,
        );
        let row_space = &right * &g2;
        t.metric(
            "R(D) ⊄ R(A*)",
            norm(&(&sol.d - &row_space * &sol.d)) / scale,
            1e-9,
        );
        let ker_b = kernel_projector(&b, 0.0);
        t.metric("ker B ⊄ ker D", norm(&(&sol.d * ker_b)) / scale, 1e-9);
        let rel = (sol.norm_sq - sol.lambda_star).abs() / sol.norm_sq;
        t.metric("|‖D‖² - λ*| relative", rel, 1e-6);
        let bound = douglas_bound(&a, &b, &tol).unwrap();
        t.check(bound == sol.lambda_star, "lambda_star is not the bisection value");
    }
    let mut idempotents = 0;
    for i in 0..500 {
        t.case();
        let n = rng.random_range(2..=MAX_DIM);
        let field = random_field(&mut rng);
        let r = if i % 2 == 0 { n } else { rng.random_range(1..=n) };
        let a = sampling::gaussian(&mut rng, n, r, field) * sampling::gaussian(&mut rng, r, n, field);
        // R(Q) ⊆ R(A) makes the pair admissible.
        let j = rng.random_range(0..=r);
        let range = attempt!(
            t,
            Subspace::from_spanning(&(&a * sampling::gaussian(&mut rng, n, j, field)), &tol)
        );
        let frame = attempt!(t, BlockFrame::new(&range));
        let x = sampling::gaussian(&mut rng, frame.k(), n - frame.k(), field);
        let q = attempt!(t, Projection::new(frame.range_s_idempotent(&x), &tol));
        let d = attempt!(t, reduced_idempotent(&a, &q, &tol));
        let dm = d.matrix();
        t.metric(
            "D^2 - D",
            norm(&(dm * dm - dm)) / at_least_one(norm(dm)).powi(2),
            1e-9,
        );
        t.metric(
            "A D - Q A",
            norm(&(&a * dm - q.matrix() * &a)) / (at_least_one(norm(&a)) * at_least_one(q.norm())),
            1e-9,
        );
        idempotents += 1;
    }
    t.finish(&format!("{idempotents} reduced idempotents"))
}

fn cli() -> (bool, String) {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests");
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_oblique"))
            .args(args)
            .current_dir(root.join("fixtures"))
            .env_remove("OBLIQUE_SEED")
            .output()
            .expect("binary runs")
    };
    let mut t = Tally::default();
    let goldens: [(&str, &[&str], i32); 11] = [
        ("compat_swap", &["compat", "swap.mat", "e1.mat"], 2),
        ("pas_identity", &["pas", "identity3.mat", "diag_line3.mat"], 0),
        ("pas_swap", &["pas", "swap.mat", "e1.mat"], 2),
        ("pas_complex", &["pas", "herm2c.mat", "e1.mat"], 0),
        ("pas_sqrt2", &["pas", "sqrt2.mat", "e12_of4.mat"], 0),
        ("shorted_pd3", &["shorted", "pd3.mat", "e1_of3.mat"], 0),
        ("shorted_sqrt2", &["shorted", "sqrt2.mat", "e12_of4.mat"], 0),
        ("twoproj_lines", &["twoproj", "q_line60.mat", "p_axis.mat"], 0),
        ("twoproj_r4", &["twoproj", "q_r4.mat", "p_r4.mat"], 0),
        ("angle_lines", &["angle", "e1.mat", "diag_line.mat"], 0),
        (
            "suite_small",
            &["suite", "--seed", "7", "--cases", "5", "--dim", "4"],
            0,
        ),
    ];
    for (name, args, code) in goldens {
        t.case();
        let out = run(args);
        t.check(
            out.status.code() == Some(code),
            format!("{name}: exit {:?}", out.status.code()),
        );
        let expected = std::fs::read(root.join("golden").join(format!("{name}.json"))).unwrap_or_default();
        t.check(
            out.stdout == expected,
            format!("{name}: differs from golden file"),
        );
    }
    t.case();
    let suite = ["suite", "--seed", "42", "--cases", "100", "--dim", "8"];
    let first = run(&suite);
    let second = run(&suite);
    t.check(
        first.status.code() == Some(0),
        "suite --seed 42 --cases 100 --dim 8 did not exit 0",
    );
    t.check(first.stdout == second.stdout, "suite output is not reproducible");
    for (args, code) in [
        (&["compat", "missing.mat", "e1.mat"][..], 1),
        (&["compat", "short.mat", "e1.mat"][..], 1),
        (&["shorted", "swap.mat", "e1.mat"][..], 1),
        (&["frobnicate"][..], 64),
        (&["--tol-rank", "0", "angle", "e1.mat", "e1.mat"][..], 64),
    ] {
        t.case();
        t.check(
            run(args).status.code() == Some(code),
            format!("{args:?} should exit {code}"),
        );
    }
    t.finish("goldens for every subcommand, exit codes 0/2/1/64, reproducible suite")
}

type Criterion = fn() -> (bool, String);

fn main() {
    let criteria: [(&str, Criterion); 11] = [
        ("construction validity", construction_validity),
        ("closed-form agreement", closed_form_agreement),
        ("shorted triple-route agreement", shorted_routes),
        ("extremality", extremality),
        ("range identity and shift", range_identity),
        ("manifold and minimality", manifold_and_minimality),
        ("indefinite compatibility", indefinite_compatibility),
        ("two projections", two_projections),
        ("parallel manifolds", parallel_manifolds),
        ("Douglas", douglas),
        ("CLI", cli),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let started = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !filter.is_empty() && !filter.iter().any(|f| f == &id.to_string()) {
            continue;
        }
        let clock = Instant::now();
        let (ok, detail) = std::panic::catch_unwind(run).unwrap_or_else(|_| (false, "panicked".into()));
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {id:>2} {} {name} ({:.1}s): {detail}",
            if ok { "PASS" } else { "FAIL" },
            clock.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} failed, total {:.1}s",
        failed,
        started.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
