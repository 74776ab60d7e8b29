//! The manifold `P(A,S)` and the minimal norm of `P_{A,S}`.
//!
//! Here `ker A` meets `S`, so `P(A,S)` is an affine family and `P_{A,S}` is its
//! shortest member, of norm `sqrt 2`.

use oblique::numcore::{from_real, ComplexMatrix};
use oblique::projector::{is_member, manifold, manifold_member};
use oblique::{HermitianMatrix, Subspace, ToleranceProfile};

fn main() -> oblique::Result<()> {
    let tol = ToleranceProfile::default();
    let a = HermitianMatrix::psd(
        from_real(
            4,
            4,
            &[
                1.0, 0.0, 1.0, 0.0, //
                0.0, 0.0, 0.0, 0.0, //
                1.0, 0.0, 1.0, 0.0, //
                0.0, 0.0, 0.0, 0.0,
            ],
        ),
        &tol,
    )?;
    let s = Subspace::from_spanning(&from_real(4, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]), &tol)?;

    let param = manifold(&a, &s, &tol)?;
    let (rows, cols) = param.slot_shape();
    println!(
        "||P_(A,S)|| = {:.12} (sqrt 2 = {:.12})",
        param.base.norm(),
        2f64.sqrt()
    );
    println!("free block: {rows}x{cols}");

    for t in [0.0, 0.5, 1.0, 2.0] {
        let z = ComplexMatrix::from_element(rows, cols, t.into());
        let q = manifold_member(&param, &z, &tol)?;
        println!(
            "z = {t:>3}: member {}, norm {:.12}",
            is_member(&a, &s, &q, &tol)?,
            q.norm()
        );
    }
    Ok(())
}
