use alloc::string::String;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::fockspace::{mode_marginal, DensityMatrix, Mode, SpaceSpec};
use crate::linalg::CMatrix;
use crate::math;

const RESET_TOL: f64 = 1e-9;

/// Whether the readout signal keeps its printed sign or is complemented.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SignalPolarity {
    #[default]
    AsPrinted,
    Complemented,
}

impl SignalPolarity {
    /// `+1` or `−1`: the signal is `½(1 + sign · Σ …)`.
    pub fn sign(self) -> f64 {
        match self {
            SignalPolarity::AsPrinted => 1.0,
            SignalPolarity::Complemented => -1.0,
        }
    }
}

/// Binomial sampling of each point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Sampling {
    pub shots: u32,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReadoutScan {
    pub mode: Mode,
    pub times: Vec<f64>,
    pub p_up: Vec<f64>,
    /// `None` for the exact curve.
    pub shots: Option<u32>,
    pub seed: Option<u64>,
    pub polarity: SignalPolarity,
}

impl ReadoutScan {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Measures and discards the spin, then re-prepares `|↓⟩`. The motional state is untouched.
pub fn spin_reset(rho: &DensityMatrix) -> DensityMatrix {
    let space = rho.space();
    let block = space.d_x() * space.d_y();
    let m = rho.matrix();
    let out = CMatrix::from_fn(space.dim(), space.dim(), |r, c| {
        if r < block && c < block {
            m[(r, c)] + m[(r + block, c + block)]
        } else {
            num_complex::Complex64::new(0.0, 0.0)
        }
    });
    DensityMatrix::new_unchecked_positivity(space, out)
        .expect("reset of a valid density matrix is valid")
}

/// Readout signal `½(1 ± Σ_n P_n e^{−γ√(n+1)t} cos(Ω01 √(n+1) t))`.
pub fn readout_signal(populations: &[f64], rabi_01: f64, gamma: f64, t: f64, polarity: SignalPolarity) -> f64 {
    let sum: f64 = populations
        .iter()
        .enumerate()
        .map(|(n, p)| {
            let s = math::sqrt((n + 1) as f64);
            p * math::exp(-gamma * s * t) * math::cos(rabi_01 * s * t)
        })
        .sum();
    (0.5 * (1.0 + polarity.sign() * sum)).clamp(0.0, 1.0)
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Replaces each probability by the fraction of `shots` Bernoulli trials that succeed.
/// ChaCha8 seeded from `seed`; points are drawn in order.
pub fn sample_probabilities(probabilities: &[f64], sampling: Sampling) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
    probabilities
        .iter()
        .map(|&p| {
            let hits = (0..sampling.shots).filter(|_| uniform(&mut rng) < p).count();
            hits as f64 / sampling.shots as f64
        })
        .collect()
}

fn validate_rates(rabi_01: f64, gamma: f64) -> Result<()> {
    if !(rabi_01 > 0.0) || !rabi_01.is_finite() {
        return Err(Error::InvalidParameter {
            name: "rabi_01",
            value: rabi_01,
        });
    }
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
        });
    }
    Ok(())
}

pub(crate) fn check_scan_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::EmptyScan);
    }
    for (index, t) in times.iter().enumerate() {
        if !(*t >= 0.0) || !t.is_finite() {
            return Err(Error::InvalidTimeGrid { index });
        }
    }
    Ok(())
}

/// Blue-sideband readout of the motional populations of a spin-reset state.
pub fn simulate_bsb_scan(
    rho: &DensityMatrix,
    mode: Mode,
    rabi_01: f64,
    gamma: f64,
    times: &[f64],
    sampling: Option<Sampling>,
    polarity: SignalPolarity,
) -> Result<ReadoutScan> {
    validate_rates(rabi_01, gamma)?;
    check_scan_times(times)?;
    if let Some(s) = sampling {
        if s.shots == 0 {
            return Err(Error::InvalidArgument(String::from("shots must be at least 1")));
        }
    }
    let space: SpaceSpec = rho.space();
    let pops = rho.populations();
    let excited: f64 = pops[space.d_x() * space.d_y()..].iter().sum();
    if excited > RESET_TOL {
        return Err(Error::InvalidDensityMatrix(alloc::format!(
            "spin not reset before readout (P_up = {excited:e})"
        )));
    }
    let motional = mode_marginal(space, mode, &pops);
    let exact: Vec<f64> = times
        .iter()
        .map(|&t| readout_signal(&motional, rabi_01, gamma, t, polarity))
        .collect();
    let p_up = match sampling {
        Some(s) => sample_probabilities(&exact, s),
        None => exact,
    };
    Ok(ReadoutScan {
        mode,
        times: times.to_vec(),
        p_up,
        shots: sampling.map(|s| s.shots),
        seed: sampling.map(|s| s.seed),
        polarity,
    })
}
