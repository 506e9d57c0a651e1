mod common;

use common::*;
use nalgebra::DVector;
use paraion_core::dynamics::{build_hamiltonian, evolve_master, EvolveOptions, HamiltonianSpec, NoiseSpec, Snapshot};
use paraion_core::fockspace::Operator;
use paraion_core::linalg::hermitian_eigenvalues;
use paraion_core::paraalgebra::{vacuum_state, ParaKind, ParaModel};
use paraion_core::{basis_state, make_space, Spin};

/// Column-stacked superoperator of `−i[H,·] + Σ κ (2O·O† − O†O· − ·O†O)`.
fn liouvillian(h: &M, channels: &[(f64, M)]) -> M {
    let n = h.nrows();
    let id = M::identity(n, n);
    let minus_i = num_complex::Complex64::new(0.0, -1.0);
    let mut l = (id.kronecker(h) - h.transpose().kronecker(&id)) * minus_i;
    for (kappa, o) in channels {
        let od = o.adjoint();
        let odo = &od * o;
        l += (o.conjugate().kronecker(o) * c(2.0) - id.kronecker(&odo) - odo.transpose().kronecker(&id)) * c(*kappa);
    }
    l
}

#[test]
fn matches_superoperator_exponential() {
    let (dx, dy) = (3, 2);
    let space = make_space(dx, dy).unwrap();
    let model = ParaModel::para_fermi(2).unwrap();
    let o = ops(dx, dy);
    let a = para_fermi(&o);
    let h_ref = (&a + adj(&a)) * c(0.5 * 1e3);
    let noise = NoiseSpec { heating_rate_x: 70.0, heating_rate_y: 30.0, thermal_occupation: Some(3.0) };
    let (ux, dxk) = noise.coefficients(paraion_core::fockspace::Mode::X);
    let (uy, dyk) = noise.coefficients(paraion_core::fockspace::Mode::Y);
    let l = liouvillian(&h_ref, &[(ux, adj(&o.ax)), (dxk, o.ax.clone()), (uy, adj(&o.ay)), (dyk, o.ay.clone())]);

    let h = build_hamiltonian(space, &HamiltonianSpec::ParaDriven { kind: ParaKind::ParaFermi, coupling: 1e3 }).unwrap();
    let rho0 = vacuum_state(space, &model).unwrap().to_density();
    let times = [0.0, 5e-4, 1.3e-3, 3e-3];
    let opts = EvolveOptions::default().with_snapshots(true);
    let traj = evolve_master(&h, &rho0, &times, &noise, &opts).unwrap();
    let n = space.dim();
    let v0 = DVector::from_iterator(n * n, (0..n * n).map(|k| rho0.matrix()[(k % n, k / n)]));
    for (t, snap) in times.iter().zip(traj.snapshots().unwrap()) {
        let Snapshot::Mixed(rho) = snap else { unreachable!() };
        let vt = (&l * c(*t)).exp() * &v0;
        let err = (0..n * n).map(|k| (rho[(k % n, k / n)] - vt[k]).norm()).fold(0.0, f64::max);
        assert!(err < 1e-8, "t={t} err={err}");
    }
}

#[test]
fn invariants_hold_under_heating() {
    let space = make_space(6, 6).unwrap();
    let h = Operator::zero(space);
    let rho0 = basis_state(space, Spin::Down, 0, 0).unwrap().to_density();
    let times: Vec<f64> = (0..=20).map(|i| 5e-5 * i as f64).collect();
    let opts = EvolveOptions::default().with_snapshots(true);
    let traj = evolve_master(&h, &rho0, &times, &NoiseSpec::uniform(70.0), &opts).unwrap();
    for (r, snap) in traj.records().iter().zip(traj.snapshots().unwrap()) {
        let Snapshot::Mixed(rho) = snap else { unreachable!() };
        assert!((rho.trace().re - 1.0).abs() < 1e-6);
        assert!(rho.hermiticity_residual() < 1e-8);
        assert!(hermitian_eigenvalues(rho)[0] >= -1e-6);
        assert!((r.n_x - 70.0 * r.t).abs() <= 0.02 * 70.0 * r.t + 1e-12);
    }
}
