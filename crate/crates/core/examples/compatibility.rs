//! Compatibility of Hermitian weights with a subspace.

use oblique::numcore::from_real;
use oblique::projector::compatibility;
use oblique::{HermitianMatrix, Subspace, ToleranceProfile};

fn show(label: &str, a: &HermitianMatrix, s: &Subspace, tol: &ToleranceProfile) -> oblique::Result<()> {
    let r = compatibility(a, s, tol)?;
    println!(
        "{label}: compatible {} (range {}, block {}, sum {}), unique {}, dim N {}",
        r.compatible, r.cond_range_pa, r.cond_block, r.cond_sum, r.unique, r.n_dim
    );
    Ok(())
}

fn main() -> oblique::Result<()> {
    let tol = ToleranceProfile::default();
    let e1 = Subspace::from_spanning(&from_real(2, 1, &[1.0, 0.0]), &tol)?;

    let swap = HermitianMatrix::new(from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]), &tol)?;
    show("swap, span e1", &swap, &e1, &tol)?;

    let signature = HermitianMatrix::new(from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]), &tol)?;
    show("diag(1,-1), span e1", &signature, &e1, &tol)?;

    let singular = HermitianMatrix::new(from_real(2, 2, &[0.0, 0.0, 0.0, 1.0]), &tol)?;
    show("diag(0,1), span e1", &singular, &e1, &tol)?;
    Ok(())
}
