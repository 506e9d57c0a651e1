use crate::error::{Error, Result};
use crate::fockspace::{Operator, SpaceSpec, StateVector};
use crate::paraalgebra::ParaKind;

use super::hamiltonian::{build_hamiltonian, HamiltonianSpec};
use super::trajectory::{EvolveOptions, Trajectory};
use super::unitary::evolve_unitary;

/// Everything except the coupling for a para-driven run.
#[derive(Clone, Debug)]
pub struct EnvelopeConfig<'a> {
    pub space: SpaceSpec,
    pub kind: ParaKind,
    pub initial: &'a StateVector,
    pub times: &'a [f64],
    pub options: EvolveOptions,
}

#[derive(Clone, Debug)]
pub struct Envelope {
    pub g_plus: f64,
    pub g_minus: f64,
    pub upper: Trajectory,
    pub lower: Trajectory,
}

/// `(g+, g−) = (Ω̄ + δ, Ω̄ − δ)` with `Ω̄ = (Ω_r + Ω_b)/2`, `δ = |Ω_r − Ω_b|/2`.
pub fn anisotropy_couplings(rabi_red: f64, rabi_blue: f64) -> Result<(f64, f64)> {
    for (name, value) in [("rabi_red", rabi_red), ("rabi_blue", rabi_blue)] {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::InvalidParameter { name, value });
        }
    }
    let mean = (rabi_red + rabi_blue) / 2.0;
    let delta = (rabi_red - rabi_blue).abs() / 2.0;
    Ok((mean + delta, mean - delta))
}

fn run(config: &EnvelopeConfig<'_>, coupling: f64) -> Result<Trajectory> {
    let h: Operator = build_hamiltonian(
        config.space,
        &HamiltonianSpec::ParaDriven {
            kind: config.kind,
            coupling,
        },
    )?;
    evolve_unitary(&h, config.initial, config.times, &config.options)
}

/// Runs the para-driven evolution at `g+` and `g−`.
pub fn anisotropy_envelope(
    config: &EnvelopeConfig<'_>,
    rabi_red: f64,
    rabi_blue: f64,
) -> Result<Envelope> {
    let (g_plus, g_minus) = anisotropy_couplings(rabi_red, rabi_blue)?;
    let upper = run(config, g_plus)?;
    let lower = if g_minus == g_plus {
        upper.clone()
    } else {
        run(config, g_minus)?
    };
    Ok(Envelope {
        g_plus,
        g_minus,
        upper,
        lower,
    })
}
