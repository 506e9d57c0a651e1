use alloc::vec::Vec;

use num_complex::Complex64;

use super::CMatrix;
use crate::math;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a real symmetric `n x n` matrix (row-major), ascending.
///
/// Cyclic Jacobi rotations; intended for the modest sizes used in checks
/// (density matrices, normal equations).
pub fn symmetric_eigenvalues(n: usize, mut a: Vec<f64>) -> Vec<f64> {
    assert_eq!(a.len(), n * n);
    let scale = a.iter().map(|v| math::abs(*v)).fold(0.0, f64::max);
    if scale == 0.0 {
        return alloc::vec![0.0; n];
    }
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum();
        if math::sqrt(off) <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if math::abs(apq) <= 1e-300 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (math::abs(theta) + math::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / math::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// Uses the real embedding `[[Re, -Im], [Im, Re]]`, whose spectrum is the
/// Hermitian spectrum with every eigenvalue doubled.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    assert!(m.is_square());
    let n = m.nrows();
    let big = 2 * n;
    let mut a = alloc::vec![0.0; big * big];
    for r in 0..n {
        for c in 0..n {
            // symmetrise so tiny Hermiticity errors do not bias the result
            let z = (m[(r, c)] + m[(c, r)].conj()) * 0.5;
            a[r * big + c] = z.re;
            a[(r + n) * big + (c + n)] = z.re;
            a[r * big + (c + n)] = -z.im;
            a[(r + n) * big + c] = z.im;
        }
    }
    let all = symmetric_eigenvalues(big, a);
    all.chunks(2).map(|pair| 0.5 * (pair[0] + pair[1])).collect()
}

/// True when every eigenvalue of Hermitian `m` is at least `-tol`.
///
/// Attempts a Cholesky factorisation of `m + tol * I`, which succeeds exactly
/// when that shifted matrix is positive definite. Cheaper than a full
/// eigendecomposition for large density matrices.
pub fn is_positive_semidefinite(m: &CMatrix, tol: f64) -> bool {
    assert!(m.is_square());
    let n = m.nrows();
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = m[(j, j)].re + tol;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) {
            return false;
        }
        let djj = math::sqrt(d);
        l[(j, j)] = Complex64::new(djj, 0.0);
        for i in j + 1..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / djj;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_two_by_two() {
        let e = symmetric_eigenvalues(2, alloc::vec![2.0, 1.0, 1.0, 2.0]);
        assert!((e[0] - 1.0).abs() < 1e-14 && (e[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn hermitian_pauli_y() {
        let m = CMatrix::from_fn(2, 2, |r, c| match (r, c) {
            (0, 1) => Complex64::new(0.0, -1.0),
            (1, 0) => Complex64::new(0.0, 1.0),
            _ => Complex64::new(0.0, 0.0),
        });
        let e = hermitian_eigenvalues(&m);
        assert!((e[0] + 1.0).abs() < 1e-14 && (e[1] - 1.0).abs() < 1e-14);
        assert!(!is_positive_semidefinite(&m, 1e-8));
        assert!(is_positive_semidefinite(&CMatrix::identity(2), 0.0));
    }
}
