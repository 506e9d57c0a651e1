use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fockspace::{Operator, StateVector};
use crate::linalg::{expm, expm_multiply_hermitian, vector, CMatrix, CsrMatrix, KrylovOptions};
use crate::math;

use super::check_times;
use super::trajectory::{observe_populations, EvolveOptions, Snapshot, Trajectory};

/// Largest dimension for which the dense propagator is formed.
pub const DENSE_LIMIT: usize = 512;

/// Steps per inverse Hamiltonian norm for the Runge–Kutta integrator.
pub(crate) const RK_STEPS_PER_NORM: f64 = 50.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum EvolutionMethod {
    /// Dense scaling-and-squaring up to [`DENSE_LIMIT`], Krylov above.
    #[default]
    MatrixExponential,
    /// Fixed-step classical Runge–Kutta.
    OdeRk,
}

fn ensure_finite(v: &[Complex64], time: f64) -> Result<()> {
    if v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::StepFailure { time })
    }
}

/// `exp(−iHt)ψ` for a single time.
pub fn propagate(h: &Operator, psi: &[Complex64], t: f64) -> Vec<Complex64> {
    if psi.len() <= DENSE_LIMIT {
        dense_propagator(h.matrix(), t).mul_vec(psi)
    } else {
        expm_multiply_hermitian(h.matrix(), psi, t, KrylovOptions::default())
    }
}

fn dense_propagator(h: &CsrMatrix, t: f64) -> CMatrix {
    expm(&h.to_dense().scaled(Complex64::new(0.0, -t)))
}

/// One RK4 step of `ψ' = −iHψ`.
fn rk4_step(h: &CsrMatrix, psi: &mut [Complex64], dt: f64, scratch: &mut [Vec<Complex64>; 5]) {
    let minus_i = Complex64::new(0.0, -1.0);
    let [k1, k2, k3, k4, tmp] = scratch;
    h.mul_vec_into(psi, k1);
    vector::scale(minus_i, k1);
    tmp.copy_from_slice(psi);
    vector::axpy(Complex64::new(dt / 2.0, 0.0), k1, tmp);
    h.mul_vec_into(tmp, k2);
    vector::scale(minus_i, k2);
    tmp.copy_from_slice(psi);
    vector::axpy(Complex64::new(dt / 2.0, 0.0), k2, tmp);
    h.mul_vec_into(tmp, k3);
    vector::scale(minus_i, k3);
    tmp.copy_from_slice(psi);
    vector::axpy(Complex64::new(dt, 0.0), k3, tmp);
    h.mul_vec_into(tmp, k4);
    vector::scale(minus_i, k4);
    for i in 0..psi.len() {
        psi[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (dt / 6.0);
    }
}

pub(crate) fn rk_substeps(interval: f64, max_step: f64) -> usize {
    if interval <= 0.0 {
        0
    } else if !max_step.is_finite() {
        1
    } else {
        (math::ceil(interval / max_step) as usize).max(1)
    }
}

/// Evolves `psi0` under time-independent `h`, recording observables at each time.
pub fn evolve_unitary(
    h: &Operator,
    psi0: &StateVector,
    times: &[f64],
    opts: &EvolveOptions,
) -> Result<Trajectory> {
    h.ensure_hermitian()?;
    if h.space() != psi0.space() {
        return Err(Error::SpaceMismatch);
    }
    check_times(times)?;
    let space = h.space();
    let dim = space.dim();
    let model = opts.model.as_ref();
    let mut psi = psi0.amplitudes().to_vec();
    let mut traj = Trajectory::new(space, opts.snapshots);
    let mut t_prev = 0.0;

    let h_norm = h.matrix().norm_inf();
    let max_step = if h_norm > 0.0 {
        1.0 / (RK_STEPS_PER_NORM * h_norm)
    } else {
        f64::INFINITY
    };
    let dense = opts.method == EvolutionMethod::MatrixExponential && dim <= DENSE_LIMIT;
    let mut cached: Option<(f64, CMatrix)> = None;
    let mut scratch: [Vec<Complex64>; 5] = core::array::from_fn(|_| alloc::vec![Complex64::new(0.0, 0.0); dim]);

    for &t in times {
        let dt = t - t_prev;
        if dt > 0.0 && h_norm > 0.0 {
            match opts.method {
                EvolutionMethod::MatrixExponential if dense => {
                    let reuse = matches!(&cached, Some((c, _)) if math::abs(c - dt) <= 1e-14 * dt);
                    if !reuse {
                        cached = Some((dt, dense_propagator(h.matrix(), dt)));
                    }
                    psi = cached.as_ref().map(|(_, u)| u.mul_vec(&psi)).unwrap_or(psi);
                }
                EvolutionMethod::MatrixExponential => {
                    psi = expm_multiply_hermitian(h.matrix(), &psi, dt, opts.krylov);
                }
                EvolutionMethod::OdeRk => {
                    let n = rk_substeps(dt, max_step);
                    let step = dt / n as f64;
                    for _ in 0..n {
                        rk4_step(h.matrix(), &mut psi, step, &mut scratch);
                    }
                }
            }
            ensure_finite(&psi, t)?;
        }
        t_prev = t;
        let pops: Vec<f64> = psi.iter().map(|z| z.norm_sqr()).collect();
        let record = observe_populations(space, t, &pops, model);
        traj.push(record, || Snapshot::Pure(psi.clone()));
    }
    traj.finish(opts.leakage_threshold, opts.strict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{build_hamiltonian, HamiltonianSpec};
    use crate::fockspace::{basis_state, make_space, Spin};
    use crate::paraalgebra::{vacuum_state, ParaKind, ParaModel};

    fn grid(n: usize, t_max: f64) -> Vec<f64> {
        (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn zero_hamiltonian_is_identity() {
        let space = make_space(3, 3).unwrap();
        let h = Operator::zero(space);
        let psi = basis_state(space, Spin::Up, 1, 2).unwrap();
        for method in [EvolutionMethod::MatrixExponential, EvolutionMethod::OdeRk] {
            let opts = EvolveOptions::default().with_method(method).with_snapshots(true);
            let traj = evolve_unitary(&h, &psi, &[0.0, 1.0, 7.5], &opts).unwrap();
            for s in traj.snapshots().unwrap() {
                match s {
                    Snapshot::Pure(v) => assert_eq!(v.as_slice(), psi.amplitudes()),
                    Snapshot::Mixed(_) => unreachable!(),
                }
            }
        }
    }

    #[test]
    fn para_fermi_order_two_closed_form() {
        let space = make_space(3, 3).unwrap();
        let model = ParaModel::para_fermi(2).unwrap();
        let g = 1.0;
        let h = build_hamiltonian(space, &HamiltonianSpec::ParaDriven { kind: ParaKind::ParaFermi, coupling: g }).unwrap();
        let psi = vacuum_state(space, &model).unwrap();
        let times = grid(101, core::f64::consts::PI);
        for method in [EvolutionMethod::MatrixExponential, EvolutionMethod::OdeRk] {
            let opts = EvolveOptions::default().with_method(method).with_model(model);
            let traj = evolve_unitary(&h, &psi, &times, &opts).unwrap();
            for r in traj.records() {
                let s = libm::sin(g * r.t);
                assert!((r.p_up - s * s / 2.0).abs() < 1e-8, "{method:?} t={} {}", r.t, r.p_up);
            }
            let last = traj.records().last().unwrap();
            assert!((last.n_x - 1.0).abs() < 1e-8);
            assert!(last.n_y.abs() < 1e-8);
        }
    }

    #[test]
    fn rejects_unsorted_times_and_mismatch() {
        let space = make_space(2, 2).unwrap();
        let h = Operator::zero(space);
        let psi = basis_state(space, Spin::Down, 0, 0).unwrap();
        let opts = EvolveOptions::default();
        assert!(matches!(
            evolve_unitary(&h, &psi, &[0.0, 2.0, 1.0], &opts),
            Err(Error::InvalidTimeGrid { index: 2 })
        ));
        assert!(evolve_unitary(&h, &psi, &[-1.0], &opts).is_err());
        let other = basis_state(make_space(3, 2).unwrap(), Spin::Down, 0, 0).unwrap();
        assert!(matches!(evolve_unitary(&h, &other, &[0.0], &opts), Err(Error::SpaceMismatch)));
    }

    #[test]
    fn strict_leakage_is_an_error() {
        let space = make_space(3, 3).unwrap();
        let h = Operator::zero(space);
        let psi = basis_state(space, Spin::Down, 2, 0).unwrap();
        let traj = evolve_unitary(&h, &psi, &[0.0], &EvolveOptions::default()).unwrap();
        assert_eq!(traj.warnings().len(), 1);
        let strict = EvolveOptions::default().strict(true);
        assert!(matches!(
            evolve_unitary(&h, &psi, &[0.0], &strict),
            Err(Error::LeakageExceeded { .. })
        ));
    }
}
