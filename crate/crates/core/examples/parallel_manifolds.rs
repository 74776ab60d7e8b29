//! Weights with equal range give parallel manifolds: `P(B,S) = Δ + P(A,S)`.

use oblique::projector::{is_member, manifold, manifold_member, parallel_offset};
use oblique::sampling::{self, Field};
use oblique::{HermitianMatrix, Projection, Subspace, ToleranceProfile};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> oblique::Result<()> {
    let tol = ToleranceProfile::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a = sampling::conditioned_psd(&mut rng, 5, 4, Field::Complex);
    let b = HermitianMatrix::psd(a.matrix() * a.matrix(), &tol)?;
    let kernel = Subspace::kernel_of(a.matrix(), 0.0, &tol)?;
    let mut span = sampling::gaussian(&mut rng, 5, 3, Field::Complex);
    span.set_column(0, &kernel.basis().column(0));
    let s = Subspace::from_spanning(&span, &tol)?;

    let delta = parallel_offset(&a, &b, &s, &tol)?;
    let param = manifold(&a, &s, &tol)?;
    let (rows, cols) = param.slot_shape();
    println!(
        "free block {rows}x{cols}, ||Δ|| = {:.6}",
        oblique::numcore::operator_norm(&delta)
    );

    for _ in 0..3 {
        let z = sampling::gaussian(&mut rng, rows, cols, Field::Complex);
        let q = manifold_member(&param, &z, &tol)?;
        let moved = Projection::new(q.matrix() + &delta, &tol)?;
        println!(
            "Q in P(A,S): {}, Δ + Q in P(B,S): {}",
            is_member(&a, &s, &q, &tol)?,
            is_member(&b, &s, &moved, &tol)?
        );
    }
    Ok(())
}
