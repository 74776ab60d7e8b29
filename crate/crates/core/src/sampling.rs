//! Seeded random instance generators.
//!
//! Every generator takes an explicit RNG; [`case_rng`] derives an independent stream per
//! (seed, family, case) so batches give the same instances however they are scheduled.

use nalgebra::QR;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub use crate::numcore::Field;
use crate::numcore::{c64, hermitian_part, identity, ComplexMatrix, HermitianMatrix, ToleranceProfile};
use crate::projector::Projection;
use crate::subspace::Subspace;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent stream for one case of one family.
pub fn case_rng(seed: u64, family: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix(splitmix(seed ^ splitmix(family)) ^ index))
}

pub fn random_field<R: Rng>(rng: &mut R) -> Field {
    if rng.random::<bool>() {
        Field::Real
    } else {
        Field::Complex
    }
}

/// Entries `(x + iy) / sqrt(2)` with independent standard normal parts.
pub fn complex_gaussian<R: Rng>(rng: &mut R, m: usize, n: usize) -> ComplexMatrix {
    gaussian(rng, m, n, Field::Complex)
}

pub fn gaussian<R: Rng>(rng: &mut R, m: usize, n: usize, field: Field) -> ComplexMatrix {
    ComplexMatrix::from_fn(m, n, |_, _| match field {
        Field::Real => c64(rng.sample(StandardNormal), 0.0),
        Field::Complex => {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            c64(re, im) * std::f64::consts::FRAC_1_SQRT_2
        }
    })
}

/// Haar-like unitary from the QR factor of a Gaussian matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize, field: Field) -> ComplexMatrix {
    if n == 0 {
        return identity(0);
    }
    QR::new(gaussian(rng, n, n, field)).q()
}

pub fn random_subspace<R: Rng>(
    rng: &mut R,
    n: usize,
    k: usize,
    field: Field,
    tol: &ToleranceProfile,
) -> Subspace {
    let u = random_unitary(rng, n, field);
    Subspace::from_orthonormal(u.columns(0, k).into_owned(), tol).expect("QR factor has orthonormal columns")
}

/// `G G*` with `G` of shape `n x rank`.
pub fn random_psd<R: Rng>(rng: &mut R, n: usize, rank: usize, field: Field) -> HermitianMatrix {
    let g = gaussian(rng, n, rank, field);
    HermitianMatrix::assume_psd(&g * g.adjoint())
}

/// `U diag(λ) U*` of the given rank with nonzero eigenvalues drawn from `[0.5, 2]`, so that
/// rank decisions on `A` and its powers agree.
pub fn conditioned_psd<R: Rng>(rng: &mut R, n: usize, rank: usize, field: Field) -> HermitianMatrix {
    let u = random_unitary(rng, n, field);
    let mut a = ComplexMatrix::zeros(n, n);
    for j in 0..rank {
        let v = u.column(j);
        a += (v * v.adjoint()).scale(rng.random_range(0.5..2.0));
    }
    HermitianMatrix::assume_psd(a)
}

/// `G G* / n + I / 2`, well conditioned.
pub fn random_pd<R: Rng>(rng: &mut R, n: usize, field: Field) -> HermitianMatrix {
    let g = gaussian(rng, n, n, field);
    HermitianMatrix::assume_psd((&g * g.adjoint()).unscale(n as f64) + identity(n).scale(0.5))
}

pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize, field: Field) -> HermitianMatrix {
    let g = gaussian(rng, n, n, field);
    HermitianMatrix::new(hermitian_part(&g), &ToleranceProfile::default())
        .expect("Hermitian part is Hermitian")
}

/// Hermitian `A` and subspace `S` built in a random frame `[B_S | B_S⊥]` whose `S`-block
/// `a` is singular. With `leak` set, the off-diagonal block `b` gets a unit-size component
/// in `ker a`, which makes the pair incompatible; otherwise `R(b) ⊆ R(a)`.
///
/// Requires `1 <= k < n`.
pub fn singular_block_instance<R: Rng>(
    rng: &mut R,
    n: usize,
    k: usize,
    field: Field,
    leak: bool,
    tol: &ToleranceProfile,
) -> (HermitianMatrix, Subspace) {
    assert!(k >= 1 && k < n, "need 1 <= k < n");
    let frame = random_unitary(rng, n, field);
    let inner = random_unitary(rng, k, field);
    let r = rng.random_range(0..k);
    let mut a = ComplexMatrix::zeros(k, k);
    for j in 0..r {
        let magnitude = rng.random_range(0.5..2.0);
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let v = inner.column(j);
        a += (v * v.adjoint()).scale(sign * magnitude);
    }
    let range_a = inner.columns(0, r).into_owned();
    let ker_a = inner.columns(r, k - r).into_owned();
    let mut b = &range_a * gaussian(rng, r, n - k, field);
    if leak {
        let mut leak_part = gaussian(rng, k - r, n - k, field);
        let size = crate::numcore::operator_norm(&leak_part);
        leak_part.unscale_mut(size);
        b += &ker_a * leak_part;
    }
    let c = hermitian_part(&gaussian(rng, n - k, n - k, field));
    let mut block = ComplexMatrix::zeros(n, n);
    block.view_mut((0, 0), (k, k)).copy_from(&a);
    block.view_mut((0, k), (k, n - k)).copy_from(&b);
    block.view_mut((k, 0), (n - k, k)).copy_from(&b.adjoint());
    block.view_mut((k, k), (n - k, n - k)).copy_from(&c);
    let a_full = &frame * block * frame.adjoint();
    let s = Subspace::from_orthonormal(frame.columns(0, k).into_owned(), tol)
        .expect("frame columns are orthonormal");
    let h = HermitianMatrix::new(hermitian_part(&a_full), tol).expect("conjugated Hermitian");
    (h, s)
}

pub fn random_orth_projection<R: Rng>(
    rng: &mut R,
    n: usize,
    k: usize,
    field: Field,
    tol: &ToleranceProfile,
) -> Projection {
    Projection::orthogonal(&random_subspace(rng, n, k, field, tol))
}

/// Orthogonal projections `(Q, P)` where `R(P)` contains an `nontrivial`-dimensional piece
/// of `ker Q`, so `ker Q ∩ R(P)` is generically exactly that piece.
///
/// Requires `nontrivial <= ker_dim`, `ker_dim < n` and `nontrivial + extra <= n`.
pub fn projection_pair_with_common_kernel<R: Rng>(
    rng: &mut R,
    n: usize,
    ker_dim: usize,
    nontrivial: usize,
    extra: usize,
    field: Field,
    tol: &ToleranceProfile,
) -> (Projection, Projection) {
    assert!(nontrivial <= ker_dim && ker_dim < n && nontrivial + extra <= n);
    let frame = random_unitary(rng, n, field);
    let range_q = Subspace::from_orthonormal(frame.columns(ker_dim, n - ker_dim).into_owned(), tol)
        .expect("frame columns are orthonormal");
    let mut spanning = ComplexMatrix::zeros(n, nontrivial + extra);
    spanning
        .columns_mut(0, nontrivial)
        .copy_from(&frame.columns(0, nontrivial));
    spanning
        .columns_mut(nontrivial, extra)
        .copy_from(&gaussian(rng, n, extra, field));
    let range_p = Subspace::from_spanning(&spanning, tol).expect("svd converges");
    (Projection::orthogonal(&range_q), Projection::orthogonal(&range_p))
}
