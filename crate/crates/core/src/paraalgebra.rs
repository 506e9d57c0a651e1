//! Para-Fermi and para-Bose ladder operators realized on the ion.
//!
//! `A_pF = √2 (a_x σ+ + a_y† σ−)` and `A_pB = √2 (a_x σ− − a_y σ+)`.
//! Number operators are `N_pF = n_x − n_y + p/2` and
//! `N_pB = n_x + n_y + 1 − p/2`; parity is `R = (−1)^N`.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fockspace::{
    mode_op, spin_op, LadderKind, Mode, Operator, SpaceSpec, Spin, SpinKind, StateVector,
};
use crate::linalg::vector;
use crate::math;

/// Residual tolerance for the algebraic identities.
pub const RELATION_TOL: f64 = 1e-9;

/// Hard cap on ladder length when walking up an unbounded para-Bose ladder.
const MAX_LADDER: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ParaKind {
    #[cfg_attr(feature = "serde", serde(alias = "pF"))]
    ParaFermi,
    #[cfg_attr(feature = "serde", serde(alias = "pB"))]
    ParaBose,
}

impl ParaKind {
    pub fn short_name(self) -> &'static str {
        match self {
            ParaKind::ParaFermi => "pF",
            ParaKind::ParaBose => "pB",
        }
    }
}

/// Which vacuum a para-Bose representation is built on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Branch {
    #[default]
    SpinDown,
    SpinUp,
}

/// A para-particle oscillator: kind, even order `p`, vacuum branch and drive coupling `g` (rad/s).
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ParaModel {
    kind: ParaKind,
    order: u32,
    branch: Branch,
    coupling: f64,
}

impl ParaModel {
    pub fn new(kind: ParaKind, order: u32, branch: Branch, coupling: f64) -> Result<Self> {
        if order < 2 || !order.is_multiple_of(2) {
            return Err(Error::InvalidOrder(order));
        }
        if kind == ParaKind::ParaFermi && branch != Branch::SpinDown {
            return Err(Error::InvalidBranch);
        }
        if !(coupling >= 0.0) || !coupling.is_finite() {
            return Err(Error::InvalidParameter {
                name: "coupling",
                value: coupling,
            });
        }
        Ok(Self {
            kind,
            order,
            branch,
            coupling,
        })
    }

    pub fn para_fermi(order: u32) -> Result<Self> {
        Self::new(ParaKind::ParaFermi, order, Branch::SpinDown, 0.0)
    }

    pub fn para_bose(order: u32, branch: Branch) -> Result<Self> {
        Self::new(ParaKind::ParaBose, order, branch, 0.0)
    }

    pub fn with_coupling(self, coupling: f64) -> Result<Self> {
        Self::new(self.kind, self.order, self.branch, coupling)
    }

    pub fn kind(&self) -> ParaKind {
        self.kind
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    fn half(&self) -> usize {
        (self.order / 2) as usize
    }

    /// Ion-frame labels `(spin, n_x, n_y)` of the vacuum.
    pub fn vacuum_labels(&self) -> (Spin, usize, usize) {
        let h = self.half();
        match (self.kind, self.branch) {
            (ParaKind::ParaFermi, _) => (Spin::Down, 0, h),
            (ParaKind::ParaBose, Branch::SpinDown) => (Spin::Down, h - 1, 0),
            (ParaKind::ParaBose, Branch::SpinUp) => (Spin::Up, 0, h - 1),
        }
    }

    /// Eigenvalue of the para number operator on `|spin, n_x, n_y>`.
    pub fn number_eigenvalue(&self, n_x: usize, n_y: usize) -> i64 {
        let h = self.half() as i64;
        match self.kind {
            ParaKind::ParaFermi => n_x as i64 - n_y as i64 + h,
            ParaKind::ParaBose => n_x as i64 + n_y as i64 + 1 - h,
        }
    }
}

/// `A` for the given kind, as an ion-frame operator.
pub fn para_lowering(space: SpaceSpec, kind: ParaKind) -> Operator {
    let ax = mode_op(space, Mode::X, LadderKind::Annihilate);
    let ay = mode_op(space, Mode::Y, LadderKind::Annihilate);
    let sp = spin_op(space, SpinKind::Raise);
    let sm = spin_op(space, SpinKind::Lower);
    let combo = match kind {
        ParaKind::ParaFermi => {
            let ay_dag = mode_op(space, Mode::Y, LadderKind::Create);
            &(&ax * &sp) + &(&ay_dag * &sm)
        }
        ParaKind::ParaBose => &(&ax * &sm) - &(&ay * &sp),
    };
    combo.scaled(math::SQRT_2)
}

/// `A†` for the given kind.
pub fn para_raising(space: SpaceSpec, kind: ParaKind) -> Operator {
    para_lowering(space, kind).adjoint()
}

/// `N_pF = n_x − n_y + p/2` or `N_pB = n_x + n_y + 1 − p/2`.
pub fn number_operator(space: SpaceSpec, model: &ParaModel) -> Operator {
    Operator::diagonal_fn(space, |_, nx, ny| model.number_eigenvalue(nx, ny) as f64)
}

/// `R = exp(−iπN) = (−1)^N`.
pub fn parity_operator(space: SpaceSpec, model: &ParaModel) -> Operator {
    Operator::diagonal_fn(space, |_, nx, ny| {
        if model.number_eigenvalue(nx, ny).rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        }
    })
}

pub fn vacuum_state(space: SpaceSpec, model: &ParaModel) -> Result<StateVector> {
    let (spin, nx, ny) = model.vacuum_labels();
    for (mode, n) in [(Mode::X, nx), (Mode::Y, ny)] {
        if n >= space.truncation(mode) {
            return Err(Error::TruncationTooSmall {
                mode,
                needed: n + 1,
                available: space.truncation(mode),
            });
        }
    }
    crate::fockspace::basis_state(space, spin, nx, ny)
}

/// True when the truncated `A†` acts on `state` exactly as the untruncated one,
/// i.e. no amplitude sits where a mode creation operator hits the top level.
pub fn raise_is_exact(space: SpaceSpec, kind: ParaKind, state: &[Complex64]) -> bool {
    let (tx, ty) = (space.d_x() - 1, space.d_y() - 1);
    space.basis().all(|(i, spin, nx, ny)| {
        let hazardous = match (kind, spin) {
            // a_x† σ−
            (ParaKind::ParaFermi, Spin::Up) => nx == tx,
            (ParaKind::ParaFermi, Spin::Down) => false,
            // a_x† σ+ and a_y† σ−
            (ParaKind::ParaBose, Spin::Down) => nx == tx,
            (ParaKind::ParaBose, Spin::Up) => ny == ty,
        };
        !hazardous || state[i] == Complex64::new(0.0, 0.0)
    })
}

/// Ladder `|p;0>, |p;1>, …` built by repeated `A†` with normalization.
#[derive(Clone, Debug)]
pub struct LadderFamily {
    pub model: ParaModel,
    pub states: Vec<StateVector>,
    /// `A†|p;k> = c_k |p;k+1>`.
    pub step_coefficients: Vec<f64>,
}

impl LadderFamily {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `Σ_k k |<p;k|ψ>|²`
    pub fn number_expectation(&self, psi: &[Complex64]) -> f64 {
        self.states
            .iter()
            .enumerate()
            .map(|(k, s)| k as f64 * vector::inner(s.amplitudes(), psi).norm_sqr())
            .sum()
    }

    /// Total weight of `psi` inside the ladder span.
    pub fn weight(&self, psi: &[Complex64]) -> f64 {
        self.states
            .iter()
            .map(|s| vector::inner(s.amplitudes(), psi).norm_sqr())
            .sum()
    }
}

/// Builds `depth + 1` ladder states starting at the vacuum.
pub fn ladder_states(space: SpaceSpec, model: &ParaModel, depth: usize) -> Result<LadderFamily> {
    if model.kind == ParaKind::ParaFermi && depth > model.order as usize {
        return Err(Error::LadderDepth {
            depth,
            max: model.order as usize,
        });
    }
    let raising = para_raising(space, model.kind);
    let mut states = vec![vacuum_state(space, model)?];
    let mut coefficients = Vec::with_capacity(depth);
    for rung in 0..depth {
        let current = &states[rung];
        if !raise_is_exact(space, model.kind, current.amplitudes()) {
            return Err(Error::TruncationOverflow { rung });
        }
        let next = raising.apply_slice(current.amplitudes());
        let c = vector::norm(&next);
        if c < 1e-12 {
            return Err(Error::LadderDepth {
                depth,
                max: rung,
            });
        }
        coefficients.push(c);
        states.push(StateVector::normalized(space, next)?);
    }
    Ok(LadderFamily {
        model: *model,
        states,
        step_coefficients: coefficients,
    })
}

/// Ladder states on which every identity can be checked without truncation
/// artifacts: all of them for para-Fermi, and all but the last two exact
/// rungs for para-Bose.
pub fn guarded_ladder(space: SpaceSpec, model: &ParaModel) -> Result<Vec<StateVector>> {
    guarded_ladder_with(space, model, &para_raising(space, model.kind))
}

/// Default depth used by [`ladder_states`] callers that do not pick one.
pub fn default_depth(space: SpaceSpec, model: &ParaModel) -> Result<usize> {
    Ok(guarded_ladder(space, model)?.len().saturating_sub(1))
}

fn guarded_ladder_with(
    space: SpaceSpec,
    model: &ParaModel,
    raising: &Operator,
) -> Result<Vec<StateVector>> {
    let mut states = vec![vacuum_state(space, model)?];
    while states.len() < MAX_LADDER {
        let last = states.last().expect("ladder starts with the vacuum");
        if !raise_is_exact(space, model.kind, last.amplitudes()) {
            // the last state cannot be raised exactly, so neither it nor its
            // predecessor can host identities that raise twice
            states.truncate(states.len().saturating_sub(2));
            return Ok(states);
        }
        let next = raising.apply_slice(last.amplitudes());
        if vector::norm(&next) < 1e-12 {
            return Ok(states);
        }
        states.push(StateVector::normalized(space, next)?);
    }
    Ok(states)
}

/// One checked identity.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RelationCheck {
    pub name: String,
    pub residual: f64,
    pub passed: bool,
    /// Informational checks are reported but do not affect [`RelationReport::all_passed`].
    pub required: bool,
}

/// Residuals of the para-particle identities on the guarded ladder.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RelationReport {
    pub model: ParaModel,
    pub d_x: usize,
    pub d_y: usize,
    pub tolerance: f64,
    pub ladder_states_checked: usize,
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.required)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| c.required && !c.passed)
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn check(&self, name: &str) -> Option<&RelationCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn max_required_residual(&self) -> f64 {
        self.checks
            .iter()
            .filter(|c| c.required)
            .map(|c| c.residual)
            .fold(0.0, f64::max)
    }
}

pub fn verify_relations(space: SpaceSpec, model: &ParaModel) -> Result<RelationReport> {
    verify_relations_with(space, model, &para_lowering(space, model.kind))
}

/// Checks the identities for an arbitrary candidate lowering operator.
pub fn verify_relations_with(
    space: SpaceSpec,
    model: &ParaModel,
    lowering: &Operator,
) -> Result<RelationReport> {
    if lowering.space() != space {
        return Err(Error::SpaceMismatch);
    }
    let a = lowering;
    let ad = a.adjoint();
    let ladder = guarded_ladder_with(space, model, &ad)?;
    let p = f64::from(model.order);
    let n_op = number_operator(space, model);
    let r_op = parity_operator(space, model);
    let nx = mode_op(space, Mode::X, LadderKind::Number);
    let ny = mode_op(space, Mode::Y, LadderKind::Number);
    let sz = spin_op(space, SpinKind::Z);
    let id = Operator::identity(space);

    let comm = a.commutator(&ad); // [A, A†]
    let anti = a.anticommutator(&ad); // {A, A†} = {A†, A}

    let residual = |lhs: &Operator, rhs: &Operator| -> f64 {
        let diff = lhs - rhs;
        ladder
            .iter()
            .map(|s| vector::max_abs(&diff.apply_slice(s.amplitudes())))
            .fold(0.0, f64::max)
    };

    let mut checks: Vec<(String, f64, bool)> = Vec::new();
    let mut push = |name: &str, value: f64, required: bool| {
        checks.push((String::from(name), value, required));
    };

    match model.kind {
        ParaKind::ParaFermi => {
            // para-Fermi trilinear relations [[A†,A],A] = −2A and [[A†,A],A†] = 2A†
            let comm_rev = comm.scaled(-1.0);
            push("trilinear_pF", residual(&comm_rev.commutator(a), &a.scaled(-2.0)), true);
            push("trilinear_pF_dagger", residual(&comm_rev.commutator(&ad), &ad.scaled(2.0)), true);
            // with the commutator taken in the opposite order the signs flip;
            // reported so the orientation is visible
            push(
                "trilinear_pF_reversed_order",
                residual(&comm.commutator(a), &a.scaled(-2.0)),
                false,
            );
            push(
                "anticommutator_parity_pF",
                residual(&anti, &(&id.scaled(p + 1.0) - &r_op)),
                true,
            );
            // the same relation with the ion-frame parity −σz substituted for R
            push(
                "anticommutator_sigma_z_parity_pF",
                residual(&anti, &(&id.scaled(p + 1.0) + &sz)),
                true,
            );
            push(
                "commutator_parity_pF",
                residual(&comm.scaled(-1.0), &(&n_op.plus_identity(-p / 2.0) * &r_op).scaled(2.0)),
                true,
            );
            push(
                "ion_frame_commutator_pF",
                residual(&comm, &(&(&nx - &ny) * &sz).scaled(2.0)),
                true,
            );
            push(
                "ion_frame_anticommutator_pF",
                residual(&anti, &(&(&nx + &ny) + &sz).plus_identity(1.0).scaled(2.0)),
                true,
            );
            push("ion_frame_parity_pF", residual(&r_op, &sz.scaled(-1.0)), false);
        }
        ParaKind::ParaBose => {
            push("trilinear_pB", residual(&anti.commutator(a), &a.scaled(-2.0)), true);
            push("trilinear_pB_dagger", residual(&anti.commutator(&ad), &ad.scaled(2.0)), true);
            push(
                "commutator_parity_pB",
                residual(&comm, &r_op.scaled(p - 1.0).plus_identity(1.0)),
                true,
            );
            push(
                "half_anticommutator_number_pB",
                residual(&anti.scaled(0.5), &n_op.plus_identity(p / 2.0)),
                true,
            );
            push(
                "ion_frame_commutator_pB",
                residual(&comm, &(&(&ny - &nx) * &sz).scaled(2.0).plus_identity(2.0)),
                true,
            );
            push(
                "ion_frame_anticommutator_pB",
                residual(&anti, &(&nx + &ny).plus_identity(1.0).scaled(2.0)),
                true,
            );
            push("ion_frame_parity_pB", residual(&r_op, &sz), false);
        }
    }
    push("parity_anticommutes_lowering", residual(&r_op.anticommutator(a), &Operator::zero(space)), true);
    push("parity_anticommutes_raising", residual(&r_op.anticommutator(&ad), &Operator::zero(space)), true);
    push("parity_squared", residual(&(&r_op * &r_op), &id), true);

    let vac = &ladder[0];
    let aad_vac = (a * &ad).apply_slice(vac.amplitudes());
    let mut p_vac = vac.amplitudes().to_vec();
    vector::scale(Complex64::new(p, 0.0), &mut p_vac);
    push("vacuum_eigenvalue", vector::max_abs_diff(&aad_vac, &p_vac), true);
    push("vacuum_annihilated", vector::max_abs(&a.apply_slice(vac.amplitudes())), true);

    let checks = checks
        .into_iter()
        .map(|(name, residual, required)| RelationCheck {
            passed: residual < RELATION_TOL,
            name,
            residual,
            required,
        })
        .collect();
    Ok(RelationReport {
        model: *model,
        d_x: space.d_x(),
        d_y: space.d_y(),
        tolerance: RELATION_TOL,
        ladder_states_checked: ladder.len(),
        checks,
    })
}

impl core::fmt::Display for RelationReport {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        writeln!(
            f,
            "{} p={} on ({}, {}), {} ladder states",
            self.model.kind.short_name(),
            self.model.order,
            self.d_x,
            self.d_y,
            self.ladder_states_checked
        )?;
        for c in &self.checks {
            let status = match (c.passed, c.required) {
                (true, _) => "ok",
                (false, true) => "FAIL",
                (false, false) => "differs",
            };
            writeln!(f, "  {:<36} {:>10.3e}  {}", c.name, c.residual, status)?;
        }
        Ok(())
    }
}

/// Describes a check name for error messages.
pub fn describe_failures(report: &RelationReport) -> String {
    format!("{:?}", report.failures())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::{basis_state, make_space, Expectation};

    fn amp(space: SpaceSpec, spin: Spin, nx: usize, ny: usize) -> Vec<Complex64> {
        basis_state(space, spin, nx, ny).unwrap().into_amplitudes()
    }

    #[test]
    fn model_validation() {
        assert_eq!(ParaModel::para_fermi(3), Err(Error::InvalidOrder(3)));
        assert_eq!(ParaModel::para_fermi(0), Err(Error::InvalidOrder(0)));
        assert_eq!(
            ParaModel::new(ParaKind::ParaFermi, 2, Branch::SpinUp, 0.0),
            Err(Error::InvalidBranch)
        );
        assert!(ParaModel::para_bose(2, Branch::SpinUp).is_ok());
        assert!(ParaModel::para_fermi(2).unwrap().with_coupling(-1.0).is_err());
    }

    #[test]
    fn lowering_kills_order_two_vacua() {
        let space = make_space(3, 3).unwrap();
        let a_pf = para_lowering(space, ParaKind::ParaFermi);
        assert_eq!(vector::max_abs(&a_pf.apply_slice(&amp(space, Spin::Down, 0, 1))), 0.0);
        let a_pb = para_lowering(space, ParaKind::ParaBose);
        assert_eq!(vector::max_abs(&a_pb.apply_slice(&amp(space, Spin::Down, 0, 0))), 0.0);
    }

    #[test]
    fn raising_pf_from_vacuum() {
        let space = make_space(3, 3).unwrap();
        let out = para_raising(space, ParaKind::ParaFermi).apply_slice(&amp(space, Spin::Down, 0, 1));
        let mut expected = amp(space, Spin::Up, 0, 0);
        vector::scale(Complex64::new(math::SQRT_2, 0.0), &mut expected);
        assert!(vector::max_abs_diff(&out, &expected) < 1e-15);
    }

    #[test]
    fn vacua() {
        let space = make_space(4, 4).unwrap();
        let pf = ParaModel::para_fermi(2).unwrap();
        assert_eq!(vacuum_state(space, &pf).unwrap(), basis_state(space, Spin::Down, 0, 1).unwrap());
        let pb = ParaModel::para_bose(2, Branch::SpinDown).unwrap();
        assert_eq!(vacuum_state(space, &pb).unwrap(), basis_state(space, Spin::Down, 0, 0).unwrap());
        let pb_up = ParaModel::para_bose(6, Branch::SpinUp).unwrap();
        assert_eq!(vacuum_state(space, &pb_up).unwrap(), basis_state(space, Spin::Up, 0, 2).unwrap());
        let pf10 = ParaModel::para_fermi(10).unwrap();
        assert!(matches!(
            vacuum_state(space, &pf10),
            Err(Error::TruncationTooSmall { mode: Mode::Y, needed: 6, available: 4 })
        ));
    }

    #[test]
    fn ladder_order_two() {
        let space = make_space(3, 3).unwrap();
        let pf = ParaModel::para_fermi(2).unwrap();
        let ladder = ladder_states(space, &pf, 2).unwrap();
        let expected = [(Spin::Down, 0, 1), (Spin::Up, 0, 0), (Spin::Down, 1, 0)];
        for (s, (spin, nx, ny)) in ladder.states.iter().zip(expected) {
            let b = basis_state(space, spin, nx, ny).unwrap();
            assert!((s.fidelity(&b).unwrap() - 1.0).abs() < 1e-14);
        }
        for c in &ladder.step_coefficients {
            assert!((c - math::SQRT_2).abs() < 1e-14);
        }
        assert!(matches!(ladder_states(space, &pf, 3), Err(Error::LadderDepth { .. })));

        let pb = ParaModel::para_bose(2, Branch::SpinDown).unwrap();
        let ladder = ladder_states(space, &pb, 2).unwrap();
        let expected = [(Spin::Down, 0, 0), (Spin::Up, 1, 0), (Spin::Down, 1, 1)];
        for (s, (spin, nx, ny)) in ladder.states.iter().zip(expected) {
            let b = basis_state(space, spin, nx, ny).unwrap();
            assert!((s.fidelity(&b).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn pb_ladder_overflows_small_truncation() {
        let space = make_space(2, 2).unwrap();
        let pb = ParaModel::para_bose(2, Branch::SpinDown).unwrap();
        assert!(matches!(
            ladder_states(space, &pb, 5),
            Err(Error::TruncationOverflow { .. })
        ));
    }

    #[test]
    fn number_and_parity_examples() {
        let space = make_space(3, 3).unwrap();
        let pf = ParaModel::para_fermi(2).unwrap();
        let n = number_operator(space, &pf);
        assert_eq!(basis_state(space, Spin::Down, 0, 1).unwrap().expectation(&n).unwrap(), 0.0);
        assert_eq!(basis_state(space, Spin::Up, 0, 0).unwrap().expectation(&n).unwrap(), 1.0);
        let pb = ParaModel::para_bose(2, Branch::SpinDown).unwrap();
        let n = number_operator(space, &pb);
        assert_eq!(basis_state(space, Spin::Down, 1, 1).unwrap().expectation(&n).unwrap(), 2.0);

        let r = parity_operator(space, &pf);
        assert_eq!(basis_state(space, Spin::Down, 0, 1).unwrap().expectation(&r).unwrap(), 1.0);
        let r = parity_operator(space, &pb);
        assert_eq!(basis_state(space, Spin::Up, 1, 0).unwrap().expectation(&r).unwrap(), -1.0);
        assert_eq!(&r * &r, Operator::identity(space));
    }

    #[test]
    fn verify_pf_two_small_space() {
        let space = make_space(3, 3).unwrap();
        let report = verify_relations(space, &ParaModel::para_fermi(2).unwrap()).unwrap();
        assert!(report.all_passed(), "{report}");
        assert_eq!(report.ladder_states_checked, 3);
        assert!(report.check("ion_frame_parity_pF").unwrap().passed);
        // [[A,A†],A] equals +2A for this realization
        let reversed = report.check("trilinear_pF_reversed_order").unwrap();
        assert!((reversed.residual - 4.0 * math::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn corrupted_lowering_fails_trilinear() {
        let space = make_space(3, 3).unwrap();
        let model = ParaModel::para_fermi(2).unwrap();
        let bad = para_lowering(space, ParaKind::ParaFermi).scaled(1.01);
        let report = verify_relations_with(space, &model, &bad).unwrap();
        assert!(!report.all_passed());
        assert!(report.failures().contains(&"trilinear_pF"));
    }

    #[test]
    fn pb_parity_sign_depends_on_branch() {
        let space = make_space(12, 12).unwrap();
        let down = verify_relations(space, &ParaModel::para_bose(4, Branch::SpinDown).unwrap()).unwrap();
        let up = verify_relations(space, &ParaModel::para_bose(4, Branch::SpinUp).unwrap()).unwrap();
        assert!(down.all_passed() && up.all_passed());
        assert!(!down.check("ion_frame_parity_pB").unwrap().passed);
        assert!(up.check("ion_frame_parity_pB").unwrap().passed);
    }
}
