//! Float helpers backed by `libm` so results do not depend on the platform libm.

pub(crate) const SQRT_2: f64 = core::f64::consts::SQRT_2;

use num_complex::Complex64;

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub(crate) fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub(crate) fn log2(x: f64) -> f64 {
    libm::log2(x)
}

#[inline]
pub(crate) fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

/// `e^{i theta}`.
#[inline]
pub(crate) fn cis(theta: f64) -> Complex64 {
    Complex64::new(cos(theta), sin(theta))
}

#[inline]
pub(crate) fn cabs(z: Complex64) -> f64 {
    hypot(z.re, z.im)
}
