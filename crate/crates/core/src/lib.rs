//! Simulation core for para-particle oscillators realized with a trapped ion.
//!
//! A spin-1/2 coupled to two motional modes (x and y) carries representations
//! of para-Fermi and para-Bose ladder operators of even order. This crate
//! builds the truncated operators, checks the para-particle algebra, runs
//! unitary and Lindblad time evolution, and simulates the Fock-state
//! preparation and blue-sideband readout used to measure the dynamics.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, configuration
//! and the command line live in the `paraion` companion crate.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod dynamics;
pub mod error;
pub mod fockspace;
pub mod linalg;
mod math;
pub mod paraalgebra;
pub mod protocol;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use paraalgebra::{Branch, ParaKind, ParaModel};
pub use fockspace::{
    basis_state, make_space, mode_op, spin_op, DensityMatrix, Expectation, LadderKind, Mode,
    Operator, SpaceSpec, Spin, SpinKind, StateVector,
};

