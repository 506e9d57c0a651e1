use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fockspace::SpaceSpec;
use crate::linalg::vector;
use crate::math;
use crate::paraalgebra::{para_lowering, vacuum_state, ParaModel};

use super::check_times;
use super::hamiltonian::{build_hamiltonian, HamiltonianSpec};
use super::trajectory::{observe_populations, EvolveOptions, Record};
use super::unitary::{evolve_unitary, rk_substeps, RK_STEPS_PER_NORM};

/// Largest deviations between the driven lab-frame evolution and the resonant model.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RwaReport {
    pub p_up: f64,
    pub n_x: f64,
    pub n_y: f64,
}

impl RwaReport {
    pub fn max_deviation(&self) -> f64 {
        self.p_up.max(self.n_x).max(self.n_y)
    }
}

/// Integrates `g(A e^{−iωt} + A† e^{iωt}) cos(ω_d t)` from the vacuum and compares
/// against `(g/2)(A + A†)` at each time.
pub fn rwa_check(
    space: SpaceSpec,
    model: &ParaModel,
    omega: f64,
    omega_d: f64,
    times: &[f64],
) -> Result<RwaReport> {
    for (name, value) in [("omega", omega), ("omega_d", omega_d)] {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(Error::InvalidParameter { name, value });
        }
    }
    check_times(times)?;
    let g = model.coupling();
    let psi0 = vacuum_state(space, model)?;
    if g == 0.0 {
        return Ok(RwaReport::default());
    }
    let h_rwa = build_hamiltonian(
        space,
        &HamiltonianSpec::ParaDriven {
            kind: model.kind(),
            coupling: g,
        },
    )?;
    let reference = evolve_unitary(&h_rwa, &psi0, times, &EvolveOptions::default())?;

    let a = para_lowering(space, model.kind());
    let ad = a.adjoint();
    let h_norm = 2.0 * g * a.matrix().norm_inf().max(ad.matrix().norm_inf());
    let max_step = 1.0 / (RK_STEPS_PER_NORM * h_norm.max(omega + omega_d));
    let dim = space.dim();
    let mut buf_a = vec![Complex64::new(0.0, 0.0); dim];
    let mut buf_ad = vec![Complex64::new(0.0, 0.0); dim];
    let mut rhs = |t: f64, psi: &[Complex64], out: &mut [Complex64]| {
        a.matrix().mul_vec_into(psi, &mut buf_a);
        ad.matrix().mul_vec_into(psi, &mut buf_ad);
        let drive = g * math::cos(omega_d * t);
        // −i H(t) ψ
        let ca = math::cis(-omega * t) * Complex64::new(0.0, -drive);
        let cad = math::cis(omega * t) * Complex64::new(0.0, -drive);
        for i in 0..psi.len() {
            out[i] = ca * buf_a[i] + cad * buf_ad[i];
        }
    };

    let mut psi = psi0.amplitudes().to_vec();
    let mut k: [Vec<Complex64>; 5] = core::array::from_fn(|_| vec![Complex64::new(0.0, 0.0); dim]);
    let mut report = RwaReport::default();
    let mut t_prev = 0.0;
    for (&t, expected) in times.iter().zip(reference.records()) {
        let n = rk_substeps(t - t_prev, max_step);
        let h = (t - t_prev) / n.max(1) as f64;
        for s in 0..n {
            let t0 = t_prev + h * s as f64;
            let [k1, k2, k3, k4, tmp] = &mut k;
            rhs(t0, &psi, k1);
            tmp.copy_from_slice(&psi);
            vector::axpy(Complex64::new(h / 2.0, 0.0), k1, tmp);
            rhs(t0 + h / 2.0, tmp, k2);
            tmp.copy_from_slice(&psi);
            vector::axpy(Complex64::new(h / 2.0, 0.0), k2, tmp);
            rhs(t0 + h / 2.0, tmp, k3);
            tmp.copy_from_slice(&psi);
            vector::axpy(Complex64::new(h, 0.0), k3, tmp);
            rhs(t0 + h, tmp, k4);
            for i in 0..dim {
                psi[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0);
            }
        }
        if !psi.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::StepFailure { time: t });
        }
        t_prev = t;
        let pops: Vec<f64> = psi.iter().map(|z| z.norm_sqr()).collect();
        let got: Record = observe_populations(space, t, &pops, None);
        report.p_up = report.p_up.max((got.p_up - expected.p_up).abs());
        report.n_x = report.n_x.max((got.n_x - expected.n_x).abs());
        report.n_y = report.n_y.max((got.n_y - expected.n_y).abs());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::make_space;

    fn period_grid() -> Vec<f64> {
        (0..=200).map(|i| core::f64::consts::PI * i as f64 / 200.0).collect()
    }

    #[test]
    fn deviation_shrinks_with_detuning_ratio() {
        let space = make_space(3, 3).unwrap();
        let model = ParaModel::para_fermi(2).unwrap().with_coupling(1.0).unwrap();
        let times = period_grid();
        let coarse = rwa_check(space, &model, 100.0, 100.0, &times).unwrap();
        let fine = rwa_check(space, &model, 1000.0, 1000.0, &times).unwrap();
        assert!(coarse.p_up < 0.02, "{coarse:?}");
        assert!(fine.p_up < 0.002, "{fine:?}");
        assert!(coarse.p_up / fine.p_up > 5.0);
    }

    #[test]
    fn zero_coupling_has_no_deviation() {
        let space = make_space(3, 3).unwrap();
        let model = ParaModel::para_fermi(2).unwrap().with_coupling(0.0).unwrap();
        let r = rwa_check(space, &model, 100.0, 100.0, &period_grid()).unwrap();
        assert_eq!(r.max_deviation(), 0.0);
    }
}
