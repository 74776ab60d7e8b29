//! `P_{Q,P}` for two orthogonal projections in `R^4`.

use oblique::numcore::from_real;
use oblique::twoproj::{decompose, equivalence_battery, norm_report};
use oblique::{Projection, Subspace, ToleranceProfile};

fn orthogonal(rows: usize, cols: usize, data: &[f64], tol: &ToleranceProfile) -> oblique::Result<Projection> {
    Ok(Projection::orthogonal(&Subspace::from_spanning(
        &from_real(rows, cols, data),
        tol,
    )?))
}

fn main() -> oblique::Result<()> {
    let tol = ToleranceProfile::default();
    let (c, s) = (0.4f64.cos(), 0.4f64.sin());
    let q = orthogonal(4, 2, &[1.0, 0.0, 0.0, 0.0, 0.0, c, 0.0, s], &tol)?;
    let p = orthogonal(4, 2, &[0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0], &tol)?;

    let report = norm_report(&q, &p, &tol)?;
    println!("||P_(Q,P)|| = {:.12}", report.norm);
    println!(
        "formulas: inverse {:.12}, defect {:.12}, restriction {:.12}",
        report.norm_via_inverse, report.norm_via_defect, report.norm_via_restriction
    );
    println!(
        "dim(ker Q ∩ R(P)) = {}, generic position {}",
        report.n_dim, report.generic
    );

    let dec = decompose(&q, &p, &tol)?;
    println!("P_(Q,P) = P_N + P_(Q,P0) up to {:.3e}", dec.residual);

    for item in equivalence_battery(&q, &p, &tol)? {
        println!("  {:<28} {:?}", item.label, item.status);
    }
    Ok(())
}
