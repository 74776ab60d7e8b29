//! `P_{A,S}` for a positive weight, checked against the closed form.

use oblique::numcore::{distance, from_real};
use oblique::projector::{is_a_selfadjoint, p_as, p_as_invertible};
use oblique::{HermitianMatrix, Subspace, ToleranceProfile};

fn main() -> oblique::Result<()> {
    let tol = ToleranceProfile::default();
    let a = HermitianMatrix::psd(
        from_real(3, 3, &[2.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 3.0]),
        &tol,
    )?;
    let s = Subspace::from_spanning(&from_real(3, 1, &[1.0, 0.0, 0.0]), &tol)?;

    let q = p_as(&a, &s, &tol)?;
    println!("P_(A,S) =\n{:.6}", q.matrix().map(|z| z.re));
    println!("||P_(A,S)|| = {:.12}", q.norm());
    println!("A-selfadjoint: {}", is_a_selfadjoint(&a, &q, &tol)?);
    println!("kernel dimension: {}", q.kernel().dim());

    let closed = p_as_invertible(&a, &s, &tol)?;
    println!(
        "closed form differs by {:.3e}",
        distance(q.matrix(), closed.matrix())
    );
    Ok(())
}
