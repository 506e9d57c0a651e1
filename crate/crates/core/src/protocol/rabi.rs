use alloc::vec::Vec;

use crate::dynamics::{build_hamiltonian, evolve_unitary, Drive, EvolveOptions, HamiltonianSpec, Sideband};
use crate::error::{Error, Result};
use crate::fockspace::{basis_state, Mode, SpaceSpec, Spin};
use crate::math;

use super::readout::{check_scan_times, sample_probabilities, Sampling};

const GRID_POINTS: usize = 4000;
const MAX_ITERATIONS: usize = 500;

/// Spin-flop scan of a prepared `|↓, level⟩` under the blue sideband.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FlopScan {
    pub level: usize,
    pub mode: Mode,
    pub times: Vec<f64>,
    /// Probability of remaining in `|↓⟩`.
    pub signal: Vec<f64>,
    pub shots: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FlopFit {
    pub level: usize,
    pub rabi: f64,
    pub gamma: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RabiReport {
    pub fits: Vec<FlopFit>,
    /// `Ω_{n,n+1} / Ω_{0,1}` in scan order.
    pub ratios: Vec<f64>,
}

/// Simulates the blue-sideband flop from `|↓, level⟩` with `ηΩ = 2Ω01`.
pub fn flop_scan(
    space: SpaceSpec,
    mode: Mode,
    level: usize,
    rabi_01: f64,
    times: &[f64],
    sampling: Option<Sampling>,
) -> Result<FlopScan> {
    check_scan_times(times)?;
    let h = build_hamiltonian(
        space,
        &HamiltonianSpec::Drives(alloc::vec![Drive::sideband(mode, Sideband::Blue, 2.0 * rabi_01, 0.0)]),
    )?;
    let (nx, ny) = match mode {
        Mode::X => (level, 0),
        Mode::Y => (0, level),
    };
    let psi = basis_state(space, Spin::Down, nx, ny)?;
    let traj = evolve_unitary(&h, &psi, times, &EvolveOptions::default())?;
    let exact: Vec<f64> = traj.records().iter().map(|r| 1.0 - r.p_up).collect();
    let signal = match sampling {
        Some(s) => sample_probabilities(&exact, s),
        None => exact,
    };
    Ok(FlopScan {
        level,
        mode,
        times: times.to_vec(),
        signal,
        shots: sampling.map(|s| s.shots),
    })
}

fn model(rabi: f64, gamma: f64, t: f64) -> f64 {
    let c = math::cos(rabi * t);
    math::exp(-gamma * t) * c * c
}

fn sse(times: &[f64], data: &[f64], rabi: f64, gamma: f64) -> f64 {
    times
        .iter()
        .zip(data)
        .map(|(&t, y)| {
            let r = model(rabi, gamma, t) - y;
            r * r
        })
        .sum()
}

/// Fits `e^{−γt} cos²(Ωt)` with `Ω` and `γ` free: grid search on `Ω`, then Levenberg–Marquardt.
pub fn fit_flop_scan(scan: &FlopScan, index: usize) -> Result<FlopFit> {
    check_scan_times(&scan.times)?;
    let (times, data) = (&scan.times, &scan.signal);
    let span = times.iter().fold(0.0f64, |m, &t| m.max(t));
    if times.len() < 3 || span <= 0.0 {
        return Err(Error::FitDidNotConverge { scan: index });
    }
    let spacing = span / (times.len() - 1) as f64;
    let lo = core::f64::consts::PI / (4.0 * span);
    let hi = core::f64::consts::PI / (2.0 * spacing);
    let mut rabi = lo;
    let mut best = f64::INFINITY;
    for k in 0..GRID_POINTS {
        let w = lo + (hi - lo) * k as f64 / (GRID_POINTS - 1) as f64;
        let e = sse(times, data, w, 0.0);
        if e < best {
            best = e;
            rabi = w;
        }
    }
    let mut gamma = 0.0;
    let mut lambda = 1e-3;
    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let (mut jtj, mut jtr) = ([[0.0f64; 2]; 2], [0.0f64; 2]);
        for (&t, y) in times.iter().zip(data) {
            let f = model(rabi, gamma, t);
            let d_rabi = -t * math::exp(-gamma * t) * math::sin(2.0 * rabi * t);
            let d_gamma = -t * f;
            let r = f - y;
            let j = [d_rabi, d_gamma];
            for a in 0..2 {
                jtr[a] += j[a] * r;
                for b in 0..2 {
                    jtj[a][b] += j[a] * j[b];
                }
            }
        }
        let m00 = jtj[0][0] * (1.0 + lambda);
        let m11 = jtj[1][1] * (1.0 + lambda);
        let det = m00 * m11 - jtj[0][1] * jtj[1][0];
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let step_rabi = -(m11 * jtr[0] - jtj[0][1] * jtr[1]) / det;
        let step_gamma = -(m00 * jtr[1] - jtj[1][0] * jtr[0]) / det;
        let trial = sse(times, data, rabi + step_rabi, gamma + step_gamma);
        if trial <= best {
            rabi += step_rabi;
            gamma += step_gamma;
            let improvement = best - trial;
            best = trial;
            lambda = (lambda / 3.0).max(1e-15);
            if math::abs(step_rabi) <= 1e-12 * math::abs(rabi) && math::abs(step_gamma) <= 1e-12 * (rabi + math::abs(gamma))
                || improvement <= 1e-15 * best.max(f64::MIN_POSITIVE)
            {
                converged = true;
                break;
            }
        } else {
            lambda *= 4.0;
            if lambda > 1e12 {
                converged = true;
                break;
            }
        }
    }
    if !converged || !rabi.is_finite() || !gamma.is_finite() {
        return Err(Error::FitDidNotConverge { scan: index });
    }
    Ok(FlopFit {
        level: scan.level,
        rabi,
        gamma,
        residual: math::sqrt(best / times.len() as f64),
    })
}

/// Fits each scan and reports frequencies relative to the `level = 0` scan.
pub fn rabi_ratio_report(scans: &[FlopScan]) -> Result<RabiReport> {
    let fits = scans
        .iter()
        .enumerate()
        .map(|(i, s)| fit_flop_scan(s, i))
        .collect::<Result<Vec<_>>>()?;
    let base = fits
        .iter()
        .find(|f| f.level == 0)
        .ok_or_else(|| Error::InvalidArgument(alloc::string::String::from("no scan for level 0")))?
        .rabi;
    let ratios = fits.iter().map(|f| f.rabi / base).collect();
    Ok(RabiReport { fits, ratios })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::make_space;

    #[test]
    fn ideal_ratios_follow_square_root() {
        let space = make_space(8, 1).unwrap();
        let rabi_01 = 2.0;
        let times: Vec<f64> = (0..60).map(|i| 3.0 * core::f64::consts::PI / rabi_01 * i as f64 / 59.0).collect();
        let scans: Vec<FlopScan> = (0..4).map(|n| flop_scan(space, Mode::X, n, rabi_01, &times, None).unwrap()).collect();
        let report = rabi_ratio_report(&scans).unwrap();
        for (n, r) in report.ratios.iter().enumerate() {
            assert!((r - libm::sqrt((n + 1) as f64)).abs() < 1e-6, "{n}: {r}");
        }
        assert!((report.fits[0].rabi - rabi_01).abs() < 1e-8);
    }

    #[test]
    fn missing_ground_scan_is_an_error() {
        let space = make_space(4, 1).unwrap();
        let times: Vec<f64> = (0..20).map(|i| 0.1 * i as f64).collect();
        let scan = flop_scan(space, Mode::X, 1, 1.0, &times, None).unwrap();
        assert!(rabi_ratio_report(&[scan]).is_err());
    }
}
