//! Hamiltonians and time evolution.
//!
//! Units: ħ = 1, couplings are angular frequencies (rad/s) and times are seconds.

mod envelope;
mod hamiltonian;
mod master;
mod rwa;
mod trajectory;
mod unitary;

pub use envelope::{anisotropy_couplings, anisotropy_envelope, Envelope, EnvelopeConfig};
pub use hamiltonian::{
    build_hamiltonian, lamb_dicke, lamb_dicke_conventional, Drive, HamiltonianSpec, Sideband,
    ATOMIC_MASS_UNIT, HBAR, ZERO_POINT_FACTOR_CONVENTIONAL,
};
pub use master::{evolve_master, NoiseSpec};
pub use rwa::{rwa_check, RwaReport};
pub use trajectory::{
    leakage_population, observe_populations, EvolveOptions, Record, Snapshot, Trajectory,
    TrajectoryWarning, DEFAULT_LEAKAGE_THRESHOLD,
};
pub use unitary::{evolve_unitary, propagate, EvolutionMethod, DENSE_LIMIT};

use crate::error::{Error, Result};

/// Times must be non-negative and non-decreasing.
pub(crate) fn check_times(times: &[f64]) -> Result<()> {
    let mut prev = 0.0;
    for (index, &t) in times.iter().enumerate() {
        if !t.is_finite() || t < prev {
            return Err(Error::InvalidTimeGrid { index });
        }
        prev = t;
    }
    Ok(())
}
