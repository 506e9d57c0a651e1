//! Dense reference implementations built directly from Kronecker products.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C;
use paraion_core::fockspace::Operator;

pub type M = DMatrix<C>;

pub fn c(re: f64) -> C {
    C::new(re, 0.0)
}

pub fn lowering(d: usize) -> M {
    M::from_fn(d, d, |r, col| if col == r + 1 { c((col as f64).sqrt()) } else { c(0.0) })
}

/// Spin basis `(↓, ↑)`; `σ+ |↓⟩ = |↑⟩`.
pub fn sigma_plus() -> M {
    M::from_row_slice(2, 2, &[c(0.0), c(0.0), c(1.0), c(0.0)])
}

pub fn sigma_z() -> M {
    M::from_diagonal(&DVector::from_vec(vec![c(-1.0), c(1.0)]))
}

pub fn kron3(s: &M, x: &M, y: &M) -> M {
    s.kronecker(x).kronecker(y)
}

pub struct Ops {
    pub ax: M,
    pub ay: M,
    pub sp: M,
    pub sz: M,
    pub id: M,
}

pub fn ops(dx: usize, dy: usize) -> Ops {
    let (i2, ix, iy) = (M::identity(2, 2), M::identity(dx, dx), M::identity(dy, dy));
    Ops {
        ax: kron3(&i2, &lowering(dx), &iy),
        ay: kron3(&i2, &ix, &lowering(dy)),
        sp: kron3(&sigma_plus(), &ix, &iy),
        sz: kron3(&sigma_z(), &ix, &iy),
        id: M::identity(2 * dx * dy, 2 * dx * dy),
    }
}

pub fn adj(m: &M) -> M {
    m.adjoint()
}

pub fn para_fermi(o: &Ops) -> M {
    (&o.ax * &o.sp + adj(&o.ay) * adj(&o.sp)) * c(2f64.sqrt())
}

pub fn para_bose(o: &Ops) -> M {
    (&o.ax * adj(&o.sp) - &o.ay * &o.sp) * c(2f64.sqrt())
}

pub fn to_nalgebra(op: &Operator) -> M {
    let d = op.to_dense();
    M::from_fn(d.nrows(), d.ncols(), |r, col| d[(r, col)])
}

pub fn max_diff(a: &M, b: &M) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `exp(−iHt)ψ` through the eigendecomposition of a Hermitian `H`.
pub struct Propagator {
    values: DVector<f64>,
    vectors: M,
}

impl Propagator {
    pub fn new(h: &M) -> Self {
        let eig = h.clone().symmetric_eigen();
        Self { values: eig.eigenvalues, vectors: eig.eigenvectors }
    }

    pub fn apply(&self, psi: &[C], t: f64) -> Vec<C> {
        let v = DVector::from_column_slice(psi);
        let mut coeff = self.vectors.adjoint() * v;
        for (k, z) in coeff.iter_mut().enumerate() {
            *z *= C::from_polar(1.0, -self.values[k] * t);
        }
        (&self.vectors * coeff).iter().copied().collect()
    }
}
