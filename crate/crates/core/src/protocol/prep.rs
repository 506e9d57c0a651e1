use alloc::vec::Vec;

use crate::dynamics::{
    build_hamiltonian, leakage_population, propagate, Drive, HamiltonianSpec, Sideband,
    TrajectoryWarning, DEFAULT_LEAKAGE_THRESHOLD,
};
use crate::error::{Error, Result};
use crate::fockspace::{Mode, SpaceSpec, StateVector};
use crate::math;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PulseKind {
    Carrier,
    RsbX,
    RsbY,
    BsbX,
    BsbY,
}

impl PulseKind {
    pub fn sideband(mode: Mode, sideband: Sideband) -> Self {
        match (mode, sideband) {
            (Mode::X, Sideband::Red) => PulseKind::RsbX,
            (Mode::Y, Sideband::Red) => PulseKind::RsbY,
            (Mode::X, Sideband::Blue) => PulseKind::BsbX,
            (Mode::Y, Sideband::Blue) => PulseKind::BsbY,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PulseKind::Carrier => "carrier",
            PulseKind::RsbX => "rsb_x",
            PulseKind::RsbY => "rsb_y",
            PulseKind::BsbX => "bsb_x",
            PulseKind::BsbY => "bsb_y",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PulseStep {
    pub kind: PulseKind,
    #[cfg_attr(feature = "serde", serde(rename = "duration_s"))]
    pub duration: f64,
    #[cfg_attr(feature = "serde", serde(rename = "phase_rad"))]
    pub phase: f64,
}

impl PulseStep {
    /// Drive realizing this pulse. Sidebands use `ηΩ = 2Ω01` and the carrier `Ω = 2Ω01`,
    /// so every transition flops as `cos²(Ω01 √level · t)`.
    pub fn drive(&self, rabi_01: f64) -> Drive {
        let strength = 2.0 * rabi_01;
        let (mode, sideband) = match self.kind {
            PulseKind::Carrier => {
                return Drive::Carrier {
                    rabi: strength,
                    phase: self.phase,
                }
            }
            PulseKind::RsbX => (Mode::X, Sideband::Red),
            PulseKind::RsbY => (Mode::Y, Sideband::Red),
            PulseKind::BsbX => (Mode::X, Sideband::Blue),
            PulseKind::BsbY => (Mode::Y, Sideband::Blue),
        };
        Drive::sideband(mode, sideband, strength, self.phase)
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PrepPlan {
    pub mode: Mode,
    pub target: usize,
    pub rabi_01: f64,
    pub steps: Vec<PulseStep>,
}

/// π-pulse sequence walking `|↓,0⟩ → |↑,1⟩ → |↓,2⟩ → …` to `|↓,n⟩` on `mode`.
pub fn plan_fock_prep(space: SpaceSpec, mode: Mode, n: usize, rabi_01: f64) -> Result<PrepPlan> {
    if !(rabi_01 > 0.0) || !rabi_01.is_finite() {
        return Err(Error::InvalidParameter {
            name: "rabi_01",
            value: rabi_01,
        });
    }
    space.check_fock(mode, n)?;
    let pi_time = |level: usize| core::f64::consts::PI / (2.0 * rabi_01 * math::sqrt(level as f64));
    let mut steps = Vec::with_capacity(n + 1);
    for level in 1..=n {
        let sideband = if level % 2 == 1 {
            Sideband::Blue
        } else {
            Sideband::Red
        };
        steps.push(PulseStep {
            kind: PulseKind::sideband(mode, sideband),
            duration: pi_time(level),
            phase: 0.0,
        });
    }
    if n % 2 == 1 {
        steps.push(PulseStep {
            kind: PulseKind::Carrier,
            duration: pi_time(1),
            phase: 0.0,
        });
    }
    Ok(PrepPlan {
        mode,
        target: n,
        rabi_01,
        steps,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SequenceOutcome {
    pub state: StateVector,
    /// Largest top-two-level population after any step.
    pub max_leakage: f64,
    pub warnings: Vec<TrajectoryWarning>,
}

/// Applies `exp(−i H_step · duration)` for each step in order.
pub fn simulate_sequence(
    space: SpaceSpec,
    plan: &PrepPlan,
    initial: &StateVector,
    strict: bool,
) -> Result<SequenceOutcome> {
    if initial.space() != space {
        return Err(Error::SpaceMismatch);
    }
    let mut psi = initial.amplitudes().to_vec();
    let mut elapsed = 0.0;
    let mut max_leakage = 0.0f64;
    let mut first: Option<f64> = None;
    for step in &plan.steps {
        if !(step.duration > 0.0) || !step.duration.is_finite() {
            return Err(Error::InvalidParameter {
                name: "duration",
                value: step.duration,
            });
        }
        let h = build_hamiltonian(space, &HamiltonianSpec::Drives(alloc::vec![step.drive(plan.rabi_01)]))?;
        psi = propagate(&h, &psi, step.duration);
        elapsed += step.duration;
        let pops: Vec<f64> = psi.iter().map(|z| z.norm_sqr()).collect();
        let leak = leakage_population(space, &pops);
        if leak > DEFAULT_LEAKAGE_THRESHOLD && first.is_none() {
            if strict {
                return Err(Error::LeakageExceeded {
                    time: elapsed,
                    population: leak,
                });
            }
            first = Some(elapsed);
        }
        max_leakage = max_leakage.max(leak);
    }
    let warnings = first
        .map(|first_time| TrajectoryWarning::Leakage {
            threshold: DEFAULT_LEAKAGE_THRESHOLD,
            first_time,
            max_population: max_leakage,
        })
        .into_iter()
        .collect();
    Ok(SequenceOutcome {
        state: StateVector::normalized(space, psi)?,
        max_leakage,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::{basis_state, make_space, Spin};

    fn kinds(plan: &PrepPlan) -> Vec<PulseKind> {
        plan.steps.iter().map(|s| s.kind).collect()
    }

    #[test]
    fn plan_shapes() {
        let space = make_space(8, 8).unwrap();
        assert!(plan_fock_prep(space, Mode::X, 0, 1.0).unwrap().steps.is_empty());
        assert_eq!(kinds(&plan_fock_prep(space, Mode::X, 1, 1.0).unwrap()), [PulseKind::BsbX, PulseKind::Carrier]);
        assert_eq!(
            kinds(&plan_fock_prep(space, Mode::Y, 3, 1.0).unwrap()),
            [PulseKind::BsbY, PulseKind::RsbY, PulseKind::BsbY, PulseKind::Carrier]
        );
        assert!(plan_fock_prep(space, Mode::X, 8, 1.0).is_err());
    }

    #[test]
    fn prepares_fock_three() {
        let space = make_space(6, 3).unwrap();
        let plan = plan_fock_prep(space, Mode::X, 3, 2.0).unwrap();
        let start = basis_state(space, Spin::Down, 0, 0).unwrap();
        let out = simulate_sequence(space, &plan, &start, false).unwrap();
        let target = basis_state(space, Spin::Down, 3, 0).unwrap();
        assert!(out.state.fidelity(&target).unwrap() > 0.999);
    }

    #[test]
    fn doubled_pulses_return_home() {
        let space = make_space(4, 2).unwrap();
        let mut plan = plan_fock_prep(space, Mode::X, 1, 1.0).unwrap();
        for step in &mut plan.steps {
            step.duration *= 2.0;
        }
        let start = basis_state(space, Spin::Down, 0, 0).unwrap();
        let out = simulate_sequence(space, &plan, &start, false).unwrap();
        assert!(out.state.fidelity(&start).unwrap() > 0.999_999);
    }
}
