//! The weight `A = Q` an orthogonal projection: `P_{Q,P} = P_{Q, R(P)}`.
//!
//! With `N = ker Q ∩ R(P)`, `M = R(P) ⊖ N` and `P_0 = P_M`,
//! `P_{Q,P} = P_N + P_{Q,P_0}` and `||P_{Q,P}|| = (1 - ||(1-Q) P_0||^2)^{-1/2}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numcore::{
    hermitian_eigen, hermitian_part, identity, operator_norm, svd, HermitianMatrix, ToleranceProfile,
};
use crate::projector::{compatibility, p_as, Projection};
use crate::subspace::{friedrichs_cos, preimage, Subspace};

fn check_pair(q: &Projection, p: &Projection, tol: &ToleranceProfile) -> Result<()> {
    if q.dim() != p.dim() {
        return Err(Error::ShapeMismatch(format!(
            "projections act on dimensions {} and {}",
            q.dim(),
            p.dim()
        )));
    }
    q.require_orthogonal(tol)?;
    p.require_orthogonal(tol)
}

fn weight(q: &Projection) -> HermitianMatrix {
    HermitianMatrix::assume_psd(hermitian_part(q.matrix()))
}

/// `P_{Q,P}`: the distinguished `Q`-selfadjoint projection onto `R(P)`.
pub fn p_qp(q: &Projection, p: &Projection, tol: &ToleranceProfile) -> Result<Projection> {
    check_pair(q, p, tol)?;
    p_as(&weight(q), p.range(), tol)
}

/// `ker Q ∩ R(P)`.
pub fn common_kernel(q: &Projection, p: &Projection) -> Result<Subspace> {
    q.kernel().intersect(p.range())
}

/// The three norm expressions evaluated on `P_0`; all equal `||P_{Q,P_0}||`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormFormulas {
    /// `||(P_0 Q P_0)^{-1}||^{1/2}` with the inverse taken on `M`.
    pub via_inverse: f64,
    /// `(1 - ||(1-Q) P_0||^2)^{-1/2}`.
    pub via_defect: f64,
    /// `||(Q|_M)^{-1}||` with `Q|_M : M -> Q(M)` written in orthonormal bases.
    pub via_restriction: f64,
}

/// `(1 - ||(1-Q) P_M||^2)^{-1/2}` and friends, for `M` with `ker Q ∩ M = {0}`.
pub fn norm_formulas(q: &Projection, m: &Subspace, tol: &ToleranceProfile) -> Result<NormFormulas> {
    if m.is_zero() {
        return Ok(NormFormulas {
            via_inverse: 1.0,
            via_defect: 1.0,
            via_restriction: 1.0,
        });
    }
    let basis = m.basis();
    let qb = q.matrix() * basis;

    let compressed = basis.adjoint() * &qb;
    let lowest = hermitian_eigen(&compressed)?.values[0];
    let via_inverse = (1.0 / lowest).sqrt();

    let defect = operator_norm(&(&(identity(q.dim()) - q.matrix()) * m.projector_matrix()));
    let via_defect = (1.0 - defect * defect).powf(-0.5);

    let image = Subspace::range_of(&qb, 1.0, tol)?;
    if image.dim() != m.dim() {
        return Err(Error::NotInvertible);
    }
    let restriction = image.basis().adjoint() * &qb;
    let sigma = svd(&restriction)?.sigma;
    let via_restriction = 1.0 / sigma[sigma.len() - 1];

    Ok(NormFormulas {
        via_inverse,
        via_defect,
        via_restriction,
    })
}

#[derive(Debug, Clone)]
pub struct TwoProjReport {
    pub p_qp: Projection,
    /// `||P_{Q,P}||` from its singular values.
    pub norm: f64,
    pub norm_via_inverse: f64,
    pub norm_via_defect: f64,
    pub norm_via_restriction: f64,
    /// `dim (ker Q ∩ R(P))`; when positive, the formulas were evaluated on `P_0`.
    pub n_dim: usize,
    pub kernel_ok: bool,
    pub generic: bool,
}

impl TwoProjReport {
    /// Largest relative deviation of the formulas from `norm`.
    pub fn max_relative_deviation(&self) -> f64 {
        [
            self.norm_via_inverse,
            self.norm_via_defect,
            self.norm_via_restriction,
        ]
        .iter()
        .map(|v| (v - self.norm).abs() / self.norm.max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
    }

    pub fn norms_agree(&self, tol: &ToleranceProfile) -> bool {
        self.max_relative_deviation() <= tol.tol_norm
    }
}

pub fn norm_report(q: &Projection, p: &Projection, tol: &ToleranceProfile) -> Result<TwoProjReport> {
    let projection = p_qp(q, p, tol)?;
    let n_space = common_kernel(q, p)?;
    let m = p.range().minus(&n_space)?;
    let formulas = norm_formulas(q, &m, tol)?;
    let report = TwoProjReport {
        norm: projection.norm(),
        p_qp: projection,
        norm_via_inverse: formulas.via_inverse,
        norm_via_defect: formulas.via_defect,
        norm_via_restriction: formulas.via_restriction,
        n_dim: n_space.dim(),
        kernel_ok: kernel_characterization(q, p, tol)?,
        generic: generic_position(q, p, tol)?,
    };
    if !m.is_zero() && !report.norms_agree(tol) {
        log::warn!(
            "norm expressions disagree: relative deviation {:.3e}",
            report.max_relative_deviation()
        );
    }
    Ok(report)
}

/// `ker P_{Q,P} = Q^{-1}(ker P) ⊖ (ker Q ∩ R(P))`.
pub fn kernel_characterization(q: &Projection, p: &Projection, tol: &ToleranceProfile) -> Result<bool> {
    let lhs = p_qp(q, p, tol)?.kernel().clone();
    let rhs = preimage(q.matrix(), p.kernel(), tol)?.minus(&common_kernel(q, p)?)?;
    Ok(lhs.approx_eq(&rhs))
}

/// `R(Q) ∩ ker P = {0} = ker Q ∩ R(P)`. When it holds, `P_{Q,P}` is confirmed to be the
/// projection onto `R(P)` along `ker Q`.
pub fn generic_position(q: &Projection, p: &Projection, tol: &ToleranceProfile) -> Result<bool> {
    check_pair(q, p, tol)?;
    let generic = q.range().intersect(p.kernel())?.is_zero() && common_kernel(q, p)?.is_zero();
    if generic {
        let projection = p_qp(q, p, tol)?;
        if !(projection.range().approx_eq(p.range()) && projection.kernel().approx_eq(q.kernel())) {
            return Err(Error::VerificationFailed {
                what: "generic pair: P_{Q,P} is not the projection onto R(P) along ker Q",
                residual: operator_norm(
                    &(projection.kernel().projector_matrix() - q.kernel().projector_matrix()),
                ),
            });
        }
    }
    Ok(generic)
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    /// `P_N`, `N = ker Q ∩ R(P)`.
    pub p_n: Projection,
    /// `P_{Q,P_0}`, `P_0 = P_{R(P) ⊖ N}`.
    pub p_qp0: Projection,
    /// `||P_{Q,P} - P_N - P_{Q,P_0}||`.
    pub residual: f64,
    pub norm_full: f64,
    pub norm_reduced: f64,
    /// `(1 - ||(1-Q) P_0||^2)^{-1/2}`, absent when `P_0 = 0`.
    pub norm_formula: Option<f64>,
}

impl Decomposition {
    pub fn holds(&self, tol: &ToleranceProfile) -> bool {
        let sum_ok = self.residual <= tol.eq_threshold(self.norm_full);
        let norm_ok = self.norm_formula.is_none_or(|f| {
            let scale = self.norm_full.max(1.0);
            (self.norm_full - self.norm_reduced).abs() <= tol.tol_norm * scale
                && (self.norm_full - f).abs() <= tol.tol_norm * scale
        });
        sum_ok && norm_ok
    }
}

pub fn decompose(q: &Projection, p: &Projection, tol: &ToleranceProfile) -> Result<Decomposition> {
    let full = p_qp(q, p, tol)?;
    let n_space = common_kernel(q, p)?;
    let m = p.range().minus(&n_space)?;
    let p_n = Projection::orthogonal(&n_space);
    let p0 = Projection::orthogonal(&m);
    let p_qp0 = p_qp(q, &p0, tol)?;
    let residual = operator_norm(&(full.matrix() - p_n.matrix() - p_qp0.matrix()));
    let norm_formula = if m.is_zero() {
        None
    } else {
        Some(norm_formulas(q, &m, tol)?.via_defect)
    };
    Ok(Decomposition {
        norm_full: full.norm(),
        norm_reduced: p_qp0.norm(),
        p_n,
        p_qp0,
        residual,
        norm_formula,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Fails,
    /// True for every pair in finite dimension.
    Tautology,
    /// Precondition not met.
    Skipped,
}

impl Status {
    fn from_bool(b: bool) -> Self {
        if b {
            Status::Holds
        } else {
            Status::Fails
        }
    }

    /// Holds or tautologically true.
    pub fn is_true(self) -> bool {
        matches!(self, Status::Holds | Status::Tautology)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatteryItem {
    pub label: &'static str,
    pub status: Status,
    /// The measured quantity behind the verdict, when there is one.
    pub value: Option<f64>,
}

const CLOSEDNESS_LABELS: [&str; 6] = [
    "ker Q + R(P) closed",
    "ker P + R(Q) closed",
    "R(PQ) closed",
    "R(QP) closed",
    "R(1 - P + Q) closed",
    "R(1 - Q + P) closed",
];

/// The equivalent existence conditions for `P_{Q,P}`, each evaluated on its own.
pub fn equivalence_battery(
    q: &Projection,
    p: &Projection,
    tol: &ToleranceProfile,
) -> Result<Vec<BatteryItem>> {
    check_pair(q, p, tol)?;
    let s = p.range();
    let t = q.range();
    let mut items = vec![
        BatteryItem {
            label: "(Q, R(P)) compatible",
            status: Status::from_bool(compatibility(&weight(q), s, tol)?.compatible),
            value: None,
        },
        BatteryItem {
            label: "(P, R(Q)) compatible",
            status: Status::from_bool(compatibility(&weight(p), t, tol)?.compatible),
            value: None,
        },
    ];
    items.extend(CLOSEDNESS_LABELS.iter().map(|&label| BatteryItem {
        label,
        status: Status::Tautology,
        value: None,
    }));
    let c_st = friedrichs_cos(s, &t.complement()?)?;
    let c_ts = friedrichs_cos(t, &s.complement()?)?;
    let symmetric = (c_st - c_ts).abs() <= tol.tol_norm;
    items.push(BatteryItem {
        label: "c(S, T^perp) = c(T, S^perp) < 1",
        status: Status::from_bool(symmetric && c_st < 1.0 - tol.tol_rank),
        value: Some(c_st),
    });
    let defect_item = if common_kernel(q, p)?.is_zero() {
        let defect = operator_norm(&(&(identity(q.dim()) - q.matrix()) * p.matrix()));
        BatteryItem {
            label: "||(1 - Q) P|| < 1",
            status: Status::from_bool(defect < 1.0 - tol.tol_rank),
            value: Some(defect),
        }
    } else {
        BatteryItem {
            label: "||(1 - Q) P|| < 1",
            status: Status::Skipped,
            value: None,
        }
    };
    items.push(defect_item);
    Ok(items)
}

/// Orthogonal projection onto the line through `(cos θ, sin θ)` in `R^2`.
pub fn line_projection(theta: f64, tol: &ToleranceProfile) -> Projection {
    let v = crate::numcore::from_real(2, 1, &[theta.cos(), theta.sin()]);
    Projection::orthogonal(&Subspace::from_orthonormal(v, tol).expect("unit vector"))
}
