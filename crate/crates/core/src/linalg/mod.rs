//! Complex linear algebra used by the simulator.
//!
//! Operators are stored as CSR sparse matrices ([`CsrMatrix`]); density
//! matrices and small propagators use the dense [`CMatrix`]. Everything here
//! is allocation-only and free of platform float dependencies.

mod dense;
mod eigen;
mod expm;
mod real;
mod sparse;
pub mod vector;

pub use dense::CMatrix;
pub use eigen::{hermitian_eigenvalues, is_positive_semidefinite, symmetric_eigenvalues};
pub use expm::{expm, expm_multiply_hermitian, KrylovOptions};
pub use real::RealMatrix;
pub use sparse::CsrMatrix;
