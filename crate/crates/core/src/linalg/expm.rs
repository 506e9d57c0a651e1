//! Matrix exponentials.
//!
//! Dense propagators use Taylor scaling-and-squaring. Large sparse Hermitian
//! generators are applied to vectors through a Lanczos (Krylov) projection
//! with adaptive sub-stepping.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{vector, CMatrix, CsrMatrix};
use crate::math;

/// Largest 1-norm of the scaled matrix handed to the Taylor series.
const TAYLOR_NORM: f64 = 0.5;
const TAYLOR_MAX_TERMS: usize = 40;

/// `exp(A)` for a dense square matrix by scaling and squaring.
pub fn expm(a: &CMatrix) -> CMatrix {
    assert!(a.is_square(), "expm needs a square matrix");
    let n = a.nrows();
    let norm = a.norm_one();
    if norm == 0.0 {
        return CMatrix::identity(n);
    }
    let squarings = if norm > TAYLOR_NORM {
        math::ceil(math::log2(norm / TAYLOR_NORM)) as u32
    } else {
        0
    };
    let scaled = a.scaled(Complex64::new(libm::ldexp(1.0, -(squarings as i32)), 0.0));

    let mut sum = CMatrix::identity(n);
    let mut term = CMatrix::identity(n);
    for k in 1..=TAYLOR_MAX_TERMS {
        term = term.matmul(&scaled).scaled(Complex64::new(1.0 / k as f64, 0.0));
        sum.add_scaled_mut(&term, Complex64::new(1.0, 0.0));
        if term.max_abs() <= f64::EPSILON * 1e-3 * sum.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum);
    }
    sum
}

/// Settings for [`expm_multiply_hermitian`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KrylovOptions {
    /// Maximum Krylov subspace dimension.
    pub dimension: usize,
    /// Accepted error estimate per sub-step.
    pub tolerance: f64,
}

impl Default for KrylovOptions {
    fn default() -> Self {
        Self {
            dimension: 30,
            tolerance: 1e-13,
        }
    }
}

/// `exp(-i H t) psi` for Hermitian sparse `H`, via Lanczos projection.
pub fn expm_multiply_hermitian(
    h: &CsrMatrix,
    psi: &[Complex64],
    t: f64,
    opts: KrylovOptions,
) -> Vec<Complex64> {
    let n = psi.len();
    let mut v = psi.to_vec();
    if t == 0.0 || h.nnz() == 0 {
        return v;
    }
    let sign = if t < 0.0 { -1.0 } else { 1.0 };
    let mut remaining = math::abs(t);
    let h_norm = h.norm_inf();
    let m_max = opts.dimension.max(2).min(n);

    while remaining > 0.0 {
        let beta0 = vector::norm(&v);
        if beta0 == 0.0 {
            return v;
        }
        // Lanczos with full reorthogonalisation.
        let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(m_max);
        let mut alpha: Vec<f64> = Vec::with_capacity(m_max);
        let mut beta: Vec<f64> = Vec::with_capacity(m_max);
        let mut q = v.clone();
        vector::scale(Complex64::new(1.0 / beta0, 0.0), &mut q);
        basis.push(q);
        let mut w = vec![Complex64::new(0.0, 0.0); n];
        let mut breakdown = false;
        let mut residual_beta = 0.0;
        loop {
            let j = basis.len() - 1;
            h.mul_vec_into(&basis[j], &mut w);
            let a = vector::inner(&basis[j], &w).re;
            alpha.push(a);
            for _ in 0..2 {
                for b in &basis {
                    let proj = vector::inner(b, &w);
                    vector::axpy(-proj, b, &mut w);
                }
            }
            let b = vector::norm(&w);
            if b <= 1e-14 * h_norm.max(1.0) {
                breakdown = true;
                break;
            }
            if basis.len() == m_max {
                residual_beta = b;
                break;
            }
            beta.push(b);
            let mut next = w.clone();
            vector::scale(Complex64::new(1.0 / b, 0.0), &mut next);
            basis.push(next);
        }
        let m = basis.len();
        let tridiag = CMatrix::from_fn(m, m, |r, c| {
            if r == c {
                Complex64::new(alpha[r], 0.0)
            } else if r + 1 == c {
                Complex64::new(beta[r], 0.0)
            } else if c + 1 == r {
                Complex64::new(beta[c], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });

        let mut tau = remaining;
        let coeffs = loop {
            let small = expm(&tridiag.scaled(Complex64::new(0.0, -sign * tau)));
            let y: Vec<Complex64> = (0..m).map(|r| small[(r, 0)]).collect();
            let err = if breakdown {
                0.0
            } else {
                residual_beta * math::cabs(y[m - 1]) * beta0
            };
            if err <= opts.tolerance * beta0 || tau < remaining * 1e-12 {
                break y;
            }
            tau *= 0.5;
        };

        let mut next = vec![Complex64::new(0.0, 0.0); n];
        for (b, c) in basis.iter().zip(&coeffs) {
            vector::axpy(c * beta0, b, &mut next);
        }
        v = next;
        remaining -= tau;
        if remaining <= math::abs(t) * 1e-15 {
            break;
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expm_of_zero_is_identity() {
        let z = CMatrix::zeros(3, 3);
        assert_eq!(expm(&z), CMatrix::identity(3));
    }

    #[test]
    fn expm_of_pauli_rotation() {
        // exp(-i theta sigma_x) = cos(theta) I - i sin(theta) sigma_x
        let theta = 2.7;
        let a = CMatrix::from_fn(2, 2, |r, c| {
            if r != c {
                Complex64::new(0.0, -theta)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let u = expm(&a);
        assert!((u[(0, 0)] - Complex64::new(math::cos(theta), 0.0)).norm() < 1e-14);
        assert!((u[(0, 1)] - Complex64::new(0.0, -math::sin(theta))).norm() < 1e-14);
    }

    #[test]
    fn krylov_matches_dense_on_chain() {
        let n = 40;
        let h = CsrMatrix::from_triplets(
            n,
            n,
            (0..n - 1).flat_map(|i| {
                let v = Complex64::new(math::sqrt((i + 1) as f64), 0.0);
                [(i, i + 1, v), (i + 1, i, v)]
            }),
        );
        let mut psi = vec![Complex64::new(0.0, 0.0); n];
        psi[0] = Complex64::new(1.0, 0.0);
        let t = 1.3;
        let dense = expm(&h.to_dense().scaled(Complex64::new(0.0, -t))).mul_vec(&psi);
        let krylov = expm_multiply_hermitian(&h, &psi, t, KrylovOptions::default());
        assert!(vector::max_abs_diff(&dense, &krylov) < 1e-11);
    }
}
