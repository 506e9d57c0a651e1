use proptest::prelude::*;

use paraion_core::dynamics::{build_hamiltonian, evolve_unitary, lamb_dicke, Drive, EvolveOptions, HamiltonianSpec, Sideband};
use paraion_core::fockspace::{mode_marginal, mode_op, LadderKind, Mode};
use paraion_core::paraalgebra::{ladder_states, number_operator, ParaKind, ParaModel};
use paraion_core::protocol::{
    fit_populations, plan_fock_prep, readout_signal, simulate_bsb_scan, simulate_sequence, spin_reset, ReadoutScan,
    Sampling, SignalPolarity,
};
use paraion_core::{basis_state, make_space, Complex64, DensityMatrix, Expectation, SpaceSpec, Spin, StateVector};

fn random_state(space: SpaceSpec, raw: &[(f64, f64)]) -> StateVector {
    let amps: Vec<Complex64> = (0..space.dim()).map(|i| {
        let (re, im) = raw[i % raw.len()];
        Complex64::new(re + 1e-3 * i as f64, im)
    }).collect();
    StateVector::normalized(space, amps).unwrap()
}

fn amplitudes() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..40)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn canonical_commutator_below_top(dx in 2usize..7, dy in 1usize..5) {
        let space = make_space(dx, dy).unwrap();
        let a = mode_op(space, Mode::X, LadderKind::Annihilate);
        let comm = a.commutator(&a.adjoint());
        for (i, _, nx, _) in space.basis() {
            let expected = if nx + 1 < dx { 1.0 } else { -((dx - 1) as f64) };
            prop_assert!((comm.get(i, i).re - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn basis_is_orthonormal(dx in 1usize..5, dy in 1usize..5, a in 0usize..100, b in 0usize..100) {
        let space = make_space(dx, dy).unwrap();
        let (sa, xa, ya) = space.labels(a % space.dim());
        let (sb, xb, yb) = space.labels(b % space.dim());
        let u = basis_state(space, sa, xa, ya).unwrap();
        let v = basis_state(space, sb, xb, yb).unwrap();
        let overlap = u.inner(&v).unwrap();
        let expected = if a % space.dim() == b % space.dim() { 1.0 } else { 0.0 };
        prop_assert!((overlap - Complex64::new(expected, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn conserved_charges(raw in amplitudes(), g in 0.1f64..3.0, fermi in any::<bool>(), d in 2usize..6) {
        let space = make_space(d, d).unwrap();
        let kind = if fermi { ParaKind::ParaFermi } else { ParaKind::ParaBose };
        let h = build_hamiltonian(space, &HamiltonianSpec::ParaDriven { kind, coupling: g }).unwrap();
        let psi = random_state(space, &raw);
        let times: Vec<f64> = (0..12).map(|i| 0.4 * i as f64).collect();
        let traj = evolve_unitary(&h, &psi, &times, &EvolveOptions::default()).unwrap();
        let charge = |r: &paraion_core::dynamics::Record| {
            let sz_half = r.p_up - 0.5;
            if fermi { r.n_x + r.n_y + sz_half } else { r.n_x - r.n_y - sz_half }
        };
        let q0 = charge(&traj.records()[0]);
        for r in traj.records() {
            prop_assert!((charge(r) - q0).abs() < 1e-8);
        }
    }

    #[test]
    fn hamiltonians_are_hermitian(
        rabi in 0.0f64..10.0, eta in 0.0f64..1.0, phase in -6.3f64..6.3,
        red in any::<bool>(), on_x in any::<bool>(),
    ) {
        let space = make_space(4, 3).unwrap();
        let mode = if on_x { Mode::X } else { Mode::Y };
        let sideband = if red { Sideband::Red } else { Sideband::Blue };
        let spec = HamiltonianSpec::Drives(vec![
            Drive::Sideband { mode, sideband, rabi, lamb_dicke: eta, phase },
            Drive::Carrier { rabi, phase: -phase },
        ]);
        let h = build_hamiltonian(space, &spec).unwrap();
        prop_assert!(h.hermiticity_residual() < 1e-12);
    }

    #[test]
    fn lamb_dicke_square_root_law(dk in 1e5f64..1e8, w in 1e5f64..1e8, m in 1e-26f64..1e-24, f in 0.1f64..10.0) {
        let base = lamb_dicke(dk, w, m).unwrap();
        let scaled = lamb_dicke(dk, f * w, m).unwrap();
        prop_assert!((scaled / base - 1.0 / f.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn para_number_matches_ladder_weights(coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 3..7), order in 1u32..4) {
        let p = 2 * order;
        let space = make_space(p as usize / 2 + 2, p as usize / 2 + 2).unwrap();
        let model = ParaModel::para_fermi(p).unwrap();
        let family = ladder_states(space, &model, p as usize).unwrap();
        let mut amps = vec![Complex64::new(0.0, 0.0); space.dim()];
        for (k, state) in family.states.iter().enumerate() {
            let (re, im) = coeffs[k % coeffs.len()];
            for (a, s) in amps.iter_mut().zip(state.amplitudes()) {
                *a += Complex64::new(re + 0.01, im) * s;
            }
        }
        let psi = StateVector::normalized(space, amps).unwrap();
        let direct = psi.expectation(&number_operator(space, &model)).unwrap();
        prop_assert!((direct - family.number_expectation(psi.amplitudes())).abs() < 1e-8);
    }

    #[test]
    fn fit_round_trip(weights in prop::collection::vec(0.0f64..1.0, 1..5), gamma in 0.0f64..0.3) {
        let total: f64 = weights.iter().sum::<f64>() + 1e-3;
        let pops: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let rabi = 1.7;
        let times: Vec<f64> = (0..40).map(|i| 6.0 * std::f64::consts::PI / rabi * i as f64 / 39.0).collect();
        let p_up = times.iter().map(|&t| readout_signal(&pops, rabi, gamma, t, SignalPolarity::AsPrinted)).collect();
        let scan = ReadoutScan { mode: Mode::X, times, p_up, shots: None, seed: None, polarity: SignalPolarity::AsPrinted };
        let fit = fit_populations(&scan, rabi, gamma, pops.len() - 1).unwrap();
        for (g, t) in fit.populations.iter().zip(&pops) {
            prop_assert!((g - t).abs() < 1e-8, "{:?} vs {:?}", fit.populations, pops);
        }
    }

    #[test]
    fn spin_reset_idempotent_and_preserves_motion(raw in prop::collection::vec((0.01f64..1.0, amplitudes()), 1..10)) {
        let space = make_space(3, 2).unwrap();
        let states: Vec<(f64, StateVector)> = raw.iter().map(|(w, a)| (*w, random_state(space, a))).collect();
        let norm: f64 = states.iter().map(|s| s.0).sum();
        let states: Vec<(f64, StateVector)> = states.into_iter().map(|(w, s)| (w / norm, s)).collect();
        let rho = DensityMatrix::mixture(&states).unwrap();
        let once = spin_reset(&rho);
        prop_assert_eq!(&spin_reset(&once), &once);
        prop_assert!((once.trace().re - 1.0).abs() < 1e-12);
        for mode in [Mode::X, Mode::Y] {
            let before = rho.mode_populations(mode);
            let after = once.mode_populations(mode);
            for (b, a) in before.iter().zip(&after) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn scans_are_reproducible(seed in any::<u64>(), shots in 1u32..400) {
        let space = make_space(3, 1).unwrap();
        let rho = basis_state(space, Spin::Down, 1, 0).unwrap().to_density();
        let times: Vec<f64> = (0..15).map(|i| 0.2 * i as f64).collect();
        let sampling = Some(Sampling { shots, seed });
        let a = simulate_bsb_scan(&rho, Mode::X, 1.0, 0.1, &times, sampling, SignalPolarity::AsPrinted).unwrap();
        let b = simulate_bsb_scan(&rho, Mode::X, 1.0, 0.1, &times, sampling, SignalPolarity::AsPrinted).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn prep_has_no_cross_mode_coupling(n in 0usize..6, m in 0usize..3, on_x in any::<bool>()) {
        let space = make_space(8, 8).unwrap();
        let (mode, other) = if on_x { (Mode::X, Mode::Y) } else { (Mode::Y, Mode::X) };
        let plan = plan_fock_prep(space, mode, n, 1.0).unwrap();
        let (nx, ny) = if on_x { (0, m) } else { (m, 0) };
        let start = basis_state(space, Spin::Down, nx, ny).unwrap();
        let out = simulate_sequence(space, &plan, &start, false).unwrap();
        let before = mode_marginal(space, other, &start.probabilities());
        let after = mode_marginal(space, other, &out.state.probabilities());
        for (b, a) in before.iter().zip(&after) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn prep_fidelity_both_modes() {
    let space = make_space(7, 7).unwrap();
    for mode in [Mode::X, Mode::Y] {
        for n in 0..=5 {
            let plan = plan_fock_prep(space, mode, n, 3.0).unwrap();
            let start = basis_state(space, Spin::Down, 0, 0).unwrap();
            let out = simulate_sequence(space, &plan, &start, false).unwrap();
            let (nx, ny) = if mode == Mode::X { (n, 0) } else { (0, n) };
            let target = basis_state(space, Spin::Down, nx, ny).unwrap();
            assert!(out.state.fidelity(&target).unwrap() > 0.999);
        }
    }
}
