//! 2x2 block representations relative to a subspace `S`.
//!
//! The unitary `U = [B_S | B_S⊥]` turns an operator into `U* A U = (a b; b' c)` where `a`
//! acts on `S`. Every block formula is a conjugation by `U`.

use crate::error::Result;
use crate::numcore::{identity, ComplexMatrix};
use crate::subspace::Subspace;

#[derive(Debug, Clone)]
pub struct BlockFrame {
    unitary: ComplexMatrix,
    k: usize,
}

/// The four blocks of an operator in a [`BlockFrame`].
#[derive(Debug, Clone)]
pub struct Blocks {
    /// `S -> S`.
    pub a: ComplexMatrix,
    /// `S⊥ -> S`.
    pub b: ComplexMatrix,
    /// `S -> S⊥`.
    pub b_lower: ComplexMatrix,
    /// `S⊥ -> S⊥`.
    pub c: ComplexMatrix,
}

impl BlockFrame {
    pub fn new(s: &Subspace) -> Result<Self> {
        let n = s.ambient_dim();
        let k = s.dim();
        let perp = s.complement()?;
        let mut unitary = ComplexMatrix::zeros(n, n);
        unitary.columns_mut(0, k).copy_from(s.basis());
        unitary.columns_mut(k, n - k).copy_from(perp.basis());
        Ok(Self { unitary, k })
    }

    pub fn n(&self) -> usize {
        self.unitary.nrows()
    }

    /// `dim S`.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn s_basis(&self) -> ComplexMatrix {
        self.unitary.columns(0, self.k).into_owned()
    }

    pub fn perp_basis(&self) -> ComplexMatrix {
        self.unitary.columns(self.k, self.n() - self.k).into_owned()
    }

    pub fn split(&self, m: &ComplexMatrix) -> Blocks {
        let (n, k) = (self.n(), self.k);
        let t = self.unitary.adjoint() * m * &self.unitary;
        Blocks {
            a: t.view((0, 0), (k, k)).into_owned(),
            b: t.view((0, k), (k, n - k)).into_owned(),
            b_lower: t.view((k, 0), (n - k, k)).into_owned(),
            c: t.view((k, k), (n - k, n - k)).into_owned(),
        }
    }

    pub fn assemble(&self, blocks: &Blocks) -> ComplexMatrix {
        let (n, k) = (self.n(), self.k);
        let mut t = ComplexMatrix::zeros(n, n);
        t.view_mut((0, 0), (k, k)).copy_from(&blocks.a);
        t.view_mut((0, k), (k, n - k)).copy_from(&blocks.b);
        t.view_mut((k, 0), (n - k, k)).copy_from(&blocks.b_lower);
        t.view_mut((k, k), (n - k, n - k)).copy_from(&blocks.c);
        &self.unitary * t * self.unitary.adjoint()
    }

    /// `(1 x; 0 0)`, the general idempotent with range `S`.
    pub fn range_s_idempotent(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let (n, k) = (self.n(), self.k);
        self.assemble(&Blocks {
            a: identity(k),
            b: x.clone(),
            b_lower: ComplexMatrix::zeros(n - k, k),
            c: ComplexMatrix::zeros(n - k, n - k),
        })
    }

    /// `(0 x; 0 1)`, the general idempotent with kernel `S`.
    pub fn kernel_s_idempotent(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let (n, k) = (self.n(), self.k);
        self.assemble(&Blocks {
            a: ComplexMatrix::zeros(k, k),
            b: x.clone(),
            b_lower: ComplexMatrix::zeros(n - k, k),
            c: identity(n - k),
        })
    }

    /// Operator supported on `S⊥` with block `c` there.
    pub fn lower_corner(&self, c: &ComplexMatrix) -> ComplexMatrix {
        let (n, k) = (self.n(), self.k);
        self.assemble(&Blocks {
            a: ComplexMatrix::zeros(k, k),
            b: ComplexMatrix::zeros(k, n - k),
            b_lower: ComplexMatrix::zeros(n - k, k),
            c: c.clone(),
        })
    }
}
