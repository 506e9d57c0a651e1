//! Slice helpers for complex state vectors.

use num_complex::Complex64;

use crate::math;

/// `<a|b>` with the first argument conjugated.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

pub fn norm(a: &[Complex64]) -> f64 {
    math::sqrt(norm_sqr(a))
}

/// `y += alpha * x`
pub fn axpy(alpha: Complex64, x: &[Complex64], y: &mut [Complex64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn scale(alpha: Complex64, x: &mut [Complex64]) {
    for xi in x {
        *xi *= alpha;
    }
}

/// Largest element-wise modulus of `a - b`.
pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| math::cabs(x - y))
        .fold(0.0, f64::max)
}

pub fn max_abs(a: &[Complex64]) -> f64 {
    a.iter().map(|x| math::cabs(*x)).fold(0.0, f64::max)
}
