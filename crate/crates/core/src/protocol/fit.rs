use alloc::vec::Vec;

use crate::error::Result;
use crate::linalg::RealMatrix;
use crate::math;

use super::nnls::capped_nnls;
use super::readout::{check_scan_times, readout_signal, ReadoutScan};

/// Design-matrix condition number above which a fit is flagged.
pub const ILL_CONDITIONED: f64 = 1e6;

const DEFAULT_CUMULATIVE: f64 = 0.999;

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum FitWarning {
    IllConditioned { condition_number: f64 },
}

impl core::fmt::Display for FitWarning {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            FitWarning::IllConditioned { condition_number } => write!(
                f,
                "design matrix is ill-conditioned (condition number {condition_number:e}); reduce n_max or extend the scan"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PopulationFit {
    pub populations: Vec<f64>,
    /// Root-mean-square misfit of the signal.
    pub residual: f64,
    pub rabi_01: f64,
    pub gamma: f64,
    pub condition_number: f64,
    pub warnings: Vec<FitWarning>,
}

/// Smallest `n` whose cumulative population exceeds 0.999, capped at `truncation − 1`.
pub fn default_n_max(populations: &[f64], truncation: usize) -> usize {
    let cap = truncation.saturating_sub(1);
    let mut cumulative = 0.0;
    for (n, p) in populations.iter().enumerate() {
        cumulative += p;
        if cumulative > DEFAULT_CUMULATIVE {
            return n.min(cap);
        }
    }
    cap
}

/// Fits `{P_n}` for `n ≤ n_max` with fixed `Ω01` and `γ` by nonnegative least squares
/// under `Σ P_n ≤ 1`.
pub fn fit_populations(scan: &ReadoutScan, rabi_01: f64, gamma: f64, n_max: usize) -> Result<PopulationFit> {
    check_scan_times(&scan.times)?;
    let k = n_max + 1;
    let sign = scan.polarity.sign();
    let design = RealMatrix::from_fn(scan.len(), k, |i, n| {
        let s = math::sqrt((n + 1) as f64);
        let t = scan.times[i];
        math::exp(-gamma * s * t) * math::cos(rabi_01 * s * t)
    });
    let target: Vec<f64> = scan.p_up.iter().map(|p| sign * (2.0 * p - 1.0)).collect();
    let populations = capped_nnls(&design, &target);
    let residual = math::sqrt(
        scan.times
            .iter()
            .zip(&scan.p_up)
            .map(|(&t, p)| {
                let d = readout_signal(&populations, rabi_01, gamma, t, scan.polarity) - p;
                d * d
            })
            .sum::<f64>()
            / scan.len() as f64,
    );
    let condition_number = design.condition_number();
    let mut warnings = Vec::new();
    if !(condition_number <= ILL_CONDITIONED) {
        warnings.push(FitWarning::IllConditioned { condition_number });
    }
    Ok(PopulationFit {
        populations,
        residual,
        rabi_01,
        gamma,
        condition_number,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::Mode;
    use crate::protocol::readout::SignalPolarity;

    fn scan_from(pops: &[f64], rabi: f64, gamma: f64, polarity: SignalPolarity) -> ReadoutScan {
        let period = 2.0 * core::f64::consts::PI / rabi;
        let times: Vec<f64> = (0..40).map(|i| 3.0 * period * i as f64 / 39.0).collect();
        let p_up = times.iter().map(|&t| readout_signal(pops, rabi, gamma, t, polarity)).collect();
        ReadoutScan { mode: Mode::X, times, p_up, shots: None, seed: None, polarity }
    }

    #[test]
    fn single_component_exact() {
        let scan = scan_from(&[1.0], 1.3, 0.0, SignalPolarity::AsPrinted);
        let fit = fit_populations(&scan, 1.3, 0.0, 3).unwrap();
        assert!((fit.populations[0] - 1.0).abs() < 1e-10);
        assert!(fit.populations[1..].iter().all(|p| p.abs() < 1e-10));
        assert!(fit.residual < 1e-10);
    }

    #[test]
    fn three_components_both_polarities() {
        for polarity in [SignalPolarity::AsPrinted, SignalPolarity::Complemented] {
            let truth = [0.5, 0.3, 0.2];
            let scan = scan_from(&truth, 2.0, 0.05, polarity);
            let fit = fit_populations(&scan, 2.0, 0.05, 2).unwrap();
            for (g, t) in fit.populations.iter().zip(&truth) {
                assert!((g - t).abs() < 1e-6);
            }
            assert!(fit.warnings.is_empty());
        }
    }

    #[test]
    fn too_many_components_flags_conditioning() {
        let mut scan = scan_from(&[1.0], 1.0, 0.0, SignalPolarity::AsPrinted);
        scan.times.truncate(3);
        scan.p_up.truncate(3);
        let fit = fit_populations(&scan, 1.0, 0.0, 8).unwrap();
        assert!(!fit.warnings.is_empty());
        assert!(fit.populations.iter().sum::<f64>() <= 1.0 + 1e-9);
    }

    #[test]
    fn default_cutoff() {
        assert_eq!(default_n_max(&[0.5, 0.4, 0.0995, 0.0005], 10), 2);
        assert_eq!(default_n_max(&[0.9995, 0.0005], 10), 0);
        assert_eq!(default_n_max(&[0.1; 10], 4), 3);
    }
}
