use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fockspace::{mode_op, spin_op, LadderKind, Mode, Operator, SpaceSpec, SpinKind};
use crate::math;
use crate::paraalgebra::{para_lowering, ParaKind};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Unified atomic mass unit, kg.
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;
/// Factor under the square root in the common `η = Δk √(ħ / (2 M ω))` form.
pub const ZERO_POINT_FACTOR_CONVENTIONAL: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Sideband {
    /// Jaynes–Cummings: `a σ+ + a† σ−`.
    Red,
    /// Anti-Jaynes–Cummings: `a σ− + a† σ+`.
    Blue,
}

/// One laser drive in the interaction picture.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Drive {
    /// `(Ω/2)(σ+ e^{iφ} + σ− e^{−iφ})`
    Carrier { rabi: f64, phase: f64 },
    /// `(ηΩ/2)(a σ± e^{iφ} + h.c.)` on one mode.
    Sideband {
        mode: Mode,
        sideband: Sideband,
        rabi: f64,
        lamb_dicke: f64,
        phase: f64,
    },
}

impl Drive {
    /// Sideband whose product `ηΩ` equals `strength`.
    pub fn sideband(mode: Mode, sideband: Sideband, strength: f64, phase: f64) -> Self {
        Drive::Sideband {
            mode,
            sideband,
            rabi: strength,
            lamb_dicke: 1.0,
            phase,
        }
    }
}

/// Which Hamiltonian to build.
#[derive(Clone, Debug, PartialEq)]
pub enum HamiltonianSpec {
    /// `(g/2)(A + A†)`
    ParaDriven { kind: ParaKind, coupling: f64 },
    /// `(Ω/2)[(a_x + a_y)σ+ + h.c.]`
    IonParaFermi { rabi: f64 },
    /// `(Ω/2)[(a_x† − a_y)σ+ + h.c.]`
    IonParaBose { rabi: f64 },
    /// Sum of simultaneous drives.
    Drives(Vec<Drive>),
}

impl HamiltonianSpec {
    /// Red sidebands on both modes, equal strength: the para-Fermi realization.
    pub fn para_fermi_sidebands(rabi: f64) -> Self {
        HamiltonianSpec::Drives(alloc::vec![
            Drive::sideband(Mode::X, Sideband::Red, rabi, 0.0),
            Drive::sideband(Mode::Y, Sideband::Red, rabi, 0.0),
        ])
    }

    /// Blue sideband on x with a red sideband on y; the relative minus sign is
    /// a π phase on the y drive.
    pub fn para_bose_sidebands(rabi: f64) -> Self {
        HamiltonianSpec::Drives(alloc::vec![
            Drive::sideband(Mode::X, Sideband::Blue, rabi, 0.0),
            Drive::sideband(Mode::Y, Sideband::Red, rabi, core::f64::consts::PI),
        ])
    }
}

fn check_rate(name: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value })
    }
}

fn check_phase(value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "phase",
            value,
        })
    }
}

pub fn build_hamiltonian(space: SpaceSpec, spec: &HamiltonianSpec) -> Result<Operator> {
    let h = match spec {
        HamiltonianSpec::ParaDriven { kind, coupling } => {
            check_rate("coupling", *coupling)?;
            let a = para_lowering(space, *kind);
            (&a + &a.adjoint()).scaled(coupling / 2.0)
        }
        HamiltonianSpec::IonParaFermi { rabi } => {
            check_rate("rabi", *rabi)?;
            let a = &mode_op(space, Mode::X, LadderKind::Annihilate)
                + &mode_op(space, Mode::Y, LadderKind::Annihilate);
            let term = &a * &spin_op(space, SpinKind::Raise);
            (&term + &term.adjoint()).scaled(rabi / 2.0)
        }
        HamiltonianSpec::IonParaBose { rabi } => {
            check_rate("rabi", *rabi)?;
            let a = &mode_op(space, Mode::X, LadderKind::Create)
                - &mode_op(space, Mode::Y, LadderKind::Annihilate);
            let term = &a * &spin_op(space, SpinKind::Raise);
            (&term + &term.adjoint()).scaled(rabi / 2.0)
        }
        HamiltonianSpec::Drives(drives) => {
            let mut total = Operator::zero(space);
            for drive in drives {
                total = &total + &drive_term(space, drive)?;
            }
            total
        }
    };
    h.ensure_hermitian()?;
    Ok(h)
}

fn drive_term(space: SpaceSpec, drive: &Drive) -> Result<Operator> {
    match *drive {
        Drive::Carrier { rabi, phase } => {
            check_rate("rabi", rabi)?;
            check_phase(phase)?;
            let term = spin_op(space, SpinKind::Raise).scaled_complex(math::cis(phase));
            Ok((&term + &term.adjoint()).scaled(rabi / 2.0))
        }
        Drive::Sideband {
            mode,
            sideband,
            rabi,
            lamb_dicke,
            phase,
        } => {
            check_rate("rabi", rabi)?;
            check_rate("lamb_dicke", lamb_dicke)?;
            check_phase(phase)?;
            let a = mode_op(space, mode, LadderKind::Annihilate);
            let spin = match sideband {
                Sideband::Red => spin_op(space, SpinKind::Raise),
                Sideband::Blue => spin_op(space, SpinKind::Lower),
            };
            let term = (&a * &spin).scaled_complex(math::cis(phase));
            Ok((&term + &term.adjoint()).scaled(lamb_dicke * rabi / 2.0))
        }
    }
}

/// `η = Δk √(ħ / (M ω))` with `Δk` in 1/m, `ω` in rad/s and `M` in kg.
pub fn lamb_dicke(delta_k: f64, mode_frequency: f64, mass: f64) -> Result<f64> {
    lamb_dicke_with_factor(delta_k, mode_frequency, mass, 1.0)
}

/// `η = Δk √(ħ / (2 M ω))`.
pub fn lamb_dicke_conventional(delta_k: f64, mode_frequency: f64, mass: f64) -> Result<f64> {
    lamb_dicke_with_factor(delta_k, mode_frequency, mass, ZERO_POINT_FACTOR_CONVENTIONAL)
}

fn lamb_dicke_with_factor(delta_k: f64, omega: f64, mass: f64, factor: f64) -> Result<f64> {
    if !(delta_k >= 0.0) || !delta_k.is_finite() {
        return Err(Error::InvalidParameter {
            name: "delta_k",
            value: delta_k,
        });
    }
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::InvalidParameter {
            name: "mode_frequency",
            value: omega,
        });
    }
    if !(mass > 0.0) || !mass.is_finite() {
        return Err(Error::InvalidParameter {
            name: "mass",
            value: mass,
        });
    }
    Ok(delta_k * math::sqrt(factor * HBAR / (mass * omega)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::make_space;

    #[test]
    fn para_driven_matches_ion_frame() {
        let space = make_space(4, 4).unwrap();
        let g = 1.7;
        let para = build_hamiltonian(space, &HamiltonianSpec::ParaDriven { kind: ParaKind::ParaFermi, coupling: g }).unwrap();
        let ion = build_hamiltonian(space, &HamiltonianSpec::IonParaFermi { rabi: math::SQRT_2 * g }).unwrap();
        assert!(para.max_abs_diff(&ion) < 1e-12);
        let para = build_hamiltonian(space, &HamiltonianSpec::ParaDriven { kind: ParaKind::ParaBose, coupling: g }).unwrap();
        let ion = build_hamiltonian(space, &HamiltonianSpec::IonParaBose { rabi: math::SQRT_2 * g }).unwrap();
        assert!(para.max_abs_diff(&ion) < 1e-12);
    }

    #[test]
    fn sideband_combinations_match_ion_frame() {
        let space = make_space(5, 5).unwrap();
        let rabi = 0.8;
        let pf = build_hamiltonian(space, &HamiltonianSpec::para_fermi_sidebands(rabi)).unwrap();
        let ion = build_hamiltonian(space, &HamiltonianSpec::IonParaFermi { rabi }).unwrap();
        assert!(pf.max_abs_diff(&ion) < 1e-12);
        let pb = build_hamiltonian(space, &HamiltonianSpec::para_bose_sidebands(rabi)).unwrap();
        let ion = build_hamiltonian(space, &HamiltonianSpec::IonParaBose { rabi }).unwrap();
        assert!(pb.max_abs_diff(&ion) < 1e-12);
    }

    #[test]
    fn red_sideband_transcription() {
        let space = make_space(3, 2).unwrap();
        let u = 0.35;
        let h = build_hamiltonian(
            space,
            &HamiltonianSpec::Drives(alloc::vec![Drive::Sideband {
                mode: Mode::X,
                sideband: Sideband::Red,
                rabi: 2.0 * u / 0.1,
                lamb_dicke: 0.1,
                phase: 0.0,
            }]),
        )
        .unwrap();
        let a = mode_op(space, Mode::X, LadderKind::Annihilate);
        let term = &a * &spin_op(space, SpinKind::Raise);
        let expected = (&term + &term.adjoint()).scaled(u);
        assert!(h.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn rejects_negative_rates() {
        let space = make_space(2, 2).unwrap();
        assert!(build_hamiltonian(space, &HamiltonianSpec::IonParaFermi { rabi: -1.0 }).is_err());
        assert!(build_hamiltonian(space, &HamiltonianSpec::Drives(alloc::vec![Drive::Carrier { rabi: 1.0, phase: f64::NAN }])).is_err());
    }

    #[test]
    fn lamb_dicke_scaling_and_zero() {
        let m = 171.0 * ATOMIC_MASS_UNIT;
        let w = 2.0 * core::f64::consts::PI * 3.05e6;
        let dk = 2.0 * 2.0 * core::f64::consts::PI / 355e-9;
        let eta = lamb_dicke(dk, w, m).unwrap();
        assert!((lamb_dicke(dk, 4.0 * w, m).unwrap() / eta - 0.5).abs() < 1e-14);
        assert_eq!(lamb_dicke(0.0, w, m).unwrap(), 0.0);
        assert!(lamb_dicke(dk, 0.0, m).is_err());
        assert!(lamb_dicke(dk, w, -1.0).is_err());
        let conv = lamb_dicke_conventional(dk, w, m).unwrap();
        assert!((eta / conv - math::SQRT_2).abs() < 1e-13);
    }
}
