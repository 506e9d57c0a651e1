//! Truncated spin ⊗ mode-x ⊗ mode-y Hilbert space and its elementary operators.
//!
//! Basis ordering is spin-major, then `n_x`, then `n_y`:
//! `index = spin * (d_x * d_y) + n_x * d_y + n_y` with `↓ = 0`, `↑ = 1`.
//! Creation operators annihilate the top retained Fock level (hard truncation).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{is_positive_semidefinite, vector, CMatrix, CsrMatrix};
use crate::math;

const HERMITIAN_TOL: f64 = 1e-12;
const STATE_NORM_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-8;
const DENSITY_HERMITIAN_TOL: f64 = 1e-10;
const POSITIVITY_TOL: f64 = 1e-8;
const EXPECTATION_IMAG_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Mode {
    X,
    Y,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Spin {
    Down = 0,
    Up = 1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LadderKind {
    Annihilate,
    Create,
    Number,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinKind {
    Raise,
    Lower,
    Z,
}

/// Truncation of the two motional modes. Total dimension is `2 * d_x * d_y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpaceSpec {
    d_x: usize,
    d_y: usize,
}

pub fn make_space(d_x: usize, d_y: usize) -> Result<SpaceSpec> {
    SpaceSpec::new(d_x, d_y)
}

impl SpaceSpec {
    pub fn new(d_x: usize, d_y: usize) -> Result<Self> {
        if d_x == 0 || d_y == 0 {
            return Err(Error::InvalidTruncation { d_x, d_y });
        }
        Ok(Self { d_x, d_y })
    }

    pub fn d_x(&self) -> usize {
        self.d_x
    }

    pub fn d_y(&self) -> usize {
        self.d_y
    }

    pub fn truncation(&self, mode: Mode) -> usize {
        match mode {
            Mode::X => self.d_x,
            Mode::Y => self.d_y,
        }
    }

    pub fn dim(&self) -> usize {
        2 * self.d_x * self.d_y
    }

    /// Basis index of `|spin, n_x, n_y>`; panics when out of range.
    #[inline]
    pub fn index(&self, spin: Spin, n_x: usize, n_y: usize) -> usize {
        assert!(n_x < self.d_x && n_y < self.d_y, "Fock index out of range");
        spin as usize * self.d_x * self.d_y + n_x * self.d_y + n_y
    }

    /// Inverse of [`SpaceSpec::index`].
    #[inline]
    pub fn labels(&self, index: usize) -> (Spin, usize, usize) {
        let block = self.d_x * self.d_y;
        let spin = if index >= block { Spin::Up } else { Spin::Down };
        let rest = index % block;
        (spin, rest / self.d_y, rest % self.d_y)
    }

    /// Iterates `(index, spin, n_x, n_y)` over the whole basis.
    pub fn basis(&self) -> impl Iterator<Item = (usize, Spin, usize, usize)> + '_ {
        (0..self.dim()).map(move |i| {
            let (s, nx, ny) = self.labels(i);
            (i, s, nx, ny)
        })
    }

    pub fn check_fock(&self, mode: Mode, n: usize) -> Result<()> {
        let dim = self.truncation(mode);
        if n >= dim {
            return Err(Error::FockIndexOutOfRange { mode, n, dim });
        }
        Ok(())
    }
}

/// A linear operator on a [`SpaceSpec`], stored sparse.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    space: SpaceSpec,
    matrix: CsrMatrix,
}

impl Operator {
    pub fn new(space: SpaceSpec, matrix: CsrMatrix) -> Result<Self> {
        let dim = space.dim();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self { space, matrix })
    }

    /// Like [`Operator::new`] but also verifies `‖M − M†‖_max < 1e-12`.
    pub fn new_hermitian(space: SpaceSpec, matrix: CsrMatrix) -> Result<Self> {
        let op = Self::new(space, matrix)?;
        op.ensure_hermitian()?;
        Ok(op)
    }

    pub fn identity(space: SpaceSpec) -> Self {
        Self {
            space,
            matrix: CsrMatrix::identity(space.dim()),
        }
    }

    pub fn zero(space: SpaceSpec) -> Self {
        Self {
            space,
            matrix: CsrMatrix::zeros(space.dim(), space.dim()),
        }
    }

    /// Diagonal operator with entries `f(spin, n_x, n_y)`.
    pub fn diagonal_fn(space: SpaceSpec, f: impl Fn(Spin, usize, usize) -> f64) -> Self {
        let diag: Vec<Complex64> = space
            .basis()
            .map(|(_, s, nx, ny)| Complex64::new(f(s, nx, ny), 0.0))
            .collect();
        Self {
            space,
            matrix: CsrMatrix::from_diagonal(&diag),
        }
    }

    pub fn space(&self) -> SpaceSpec {
        self.space
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix.get(row, col)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            space: self.space,
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        self.scaled_complex(Complex64::new(alpha, 0.0))
    }

    pub fn scaled_complex(&self, alpha: Complex64) -> Self {
        Self {
            space: self.space,
            matrix: self.matrix.scaled(alpha),
        }
    }

    /// `self + alpha * 1`
    pub fn plus_identity(&self, alpha: f64) -> Self {
        self + &Operator::identity(self.space).scaled(alpha)
    }

    pub fn commutator(&self, other: &Operator) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn anticommutator(&self, other: &Operator) -> Self {
        &(self * other) + &(other * self)
    }

    pub fn apply(&self, state: &StateVector) -> Result<Vec<Complex64>> {
        if state.space != self.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(self.matrix.mul_vec(&state.amplitudes))
    }

    pub fn apply_slice(&self, amplitudes: &[Complex64]) -> Vec<Complex64> {
        self.matrix.mul_vec(amplitudes)
    }

    pub fn hermiticity_residual(&self) -> f64 {
        self.matrix.hermiticity_residual()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_residual() < HERMITIAN_TOL
    }

    pub fn ensure_hermitian(&self) -> Result<()> {
        let residual = self.hermiticity_residual();
        if residual < HERMITIAN_TOL {
            Ok(())
        } else {
            Err(Error::NotHermitian { residual })
        }
    }

    /// `max |A − B|` element-wise.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        (self - other).matrix.max_abs()
    }

    pub fn to_dense(&self) -> CMatrix {
        self.matrix.to_dense()
    }

    fn same_space(&self, other: &Operator) {
        assert_eq!(self.space, other.space, "operators act on different spaces");
    }
}

impl<'a> Mul<&'a Operator> for &'a Operator {
    type Output = Operator;

    fn mul(self, rhs: &'a Operator) -> Operator {
        self.same_space(rhs);
        Operator {
            space: self.space,
            matrix: self.matrix.matmul(&rhs.matrix),
        }
    }
}

impl<'a> Add<&'a Operator> for &'a Operator {
    type Output = Operator;

    fn add(self, rhs: &'a Operator) -> Operator {
        self.same_space(rhs);
        Operator {
            space: self.space,
            matrix: self.matrix.add_scaled(&rhs.matrix, Complex64::new(1.0, 0.0)),
        }
    }
}

impl<'a> Sub<&'a Operator> for &'a Operator {
    type Output = Operator;

    fn sub(self, rhs: &'a Operator) -> Operator {
        self.same_space(rhs);
        Operator {
            space: self.space,
            matrix: self.matrix.add_scaled(&rhs.matrix, Complex64::new(-1.0, 0.0)),
        }
    }
}

impl Neg for &Operator {
    type Output = Operator;

    fn neg(self) -> Operator {
        self.scaled(-1.0)
    }
}

/// Ladder operator of one mode, identity on the spin and the other mode.
pub fn mode_op(space: SpaceSpec, mode: Mode, kind: LadderKind) -> Operator {
    let dim = space.dim();
    let entries = space.basis().filter_map(|(i, s, nx, ny)| {
        let n = match mode {
            Mode::X => nx,
            Mode::Y => ny,
        };
        let shifted = |m: usize| match mode {
            Mode::X => space.index(s, m, ny),
            Mode::Y => space.index(s, nx, m),
        };
        match kind {
            // <n-1|a|n> = sqrt(n)
            LadderKind::Annihilate if n > 0 => {
                Some((shifted(n - 1), i, Complex64::new(math::sqrt(n as f64), 0.0)))
            }
            LadderKind::Create if n + 1 < space.truncation(mode) => {
                Some((shifted(n + 1), i, Complex64::new(math::sqrt((n + 1) as f64), 0.0)))
            }
            LadderKind::Number if n > 0 => Some((i, i, Complex64::new(n as f64, 0.0))),
            _ => None,
        }
    });
    Operator {
        space,
        matrix: CsrMatrix::from_triplets(dim, dim, entries),
    }
}

/// Spin operator, identity on both modes. `Z` has eigenvalue −1 on `|↓>`.
pub fn spin_op(space: SpaceSpec, kind: SpinKind) -> Operator {
    let dim = space.dim();
    let one = Complex64::new(1.0, 0.0);
    let entries = space.basis().filter_map(|(i, s, nx, ny)| match (kind, s) {
        (SpinKind::Raise, Spin::Down) => Some((space.index(Spin::Up, nx, ny), i, one)),
        (SpinKind::Lower, Spin::Up) => Some((space.index(Spin::Down, nx, ny), i, one)),
        (SpinKind::Z, Spin::Up) => Some((i, i, one)),
        (SpinKind::Z, Spin::Down) => Some((i, i, -one)),
        _ => None,
    });
    Operator {
        space,
        matrix: CsrMatrix::from_triplets(dim, dim, entries),
    }
}

/// Normalized state vector on a [`SpaceSpec`].
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    space: SpaceSpec,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes that must already be normalized within 1e-10.
    pub fn new(space: SpaceSpec, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                actual: amplitudes.len(),
            });
        }
        let norm = vector::norm(&amplitudes);
        if math::abs(norm - 1.0) > STATE_NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { space, amplitudes })
    }

    /// Normalizes the amplitudes first; fails only for the zero vector.
    pub fn normalized(space: SpaceSpec, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = vector::norm(&amplitudes);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        vector::scale(Complex64::new(1.0 / norm, 0.0), &mut amplitudes);
        Self::new(space, amplitudes)
    }

    pub fn space(&self) -> SpaceSpec {
        self.space
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        vector::norm(&self.amplitudes)
    }

    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(vector::inner(&self.amplitudes, &other.amplitudes))
    }

    /// `|<self|other>|^2`
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            space: self.space,
            matrix: CMatrix::outer(&self.amplitudes, &self.amplitudes),
        }
    }
}

pub fn basis_state(space: SpaceSpec, spin: Spin, n_x: usize, n_y: usize) -> Result<StateVector> {
    space.check_fock(Mode::X, n_x)?;
    space.check_fock(Mode::Y, n_y)?;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); space.dim()];
    amplitudes[space.index(spin, n_x, n_y)] = Complex64::new(1.0, 0.0);
    Ok(StateVector { space, amplitudes })
}

/// Density matrix: unit trace, Hermitian, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    space: SpaceSpec,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates trace (1e-8), Hermiticity (1e-10) and positivity (min eigenvalue ≥ −1e-8).
    pub fn new(space: SpaceSpec, matrix: CMatrix) -> Result<Self> {
        let rho = Self::new_unchecked_positivity(space, matrix)?;
        if !is_positive_semidefinite(&rho.matrix, POSITIVITY_TOL) {
            return Err(Error::InvalidDensityMatrix("negative eigenvalue".into()));
        }
        Ok(rho)
    }

    /// Trace and Hermiticity checks only; for matrices produced by a
    /// positivity-preserving map.
    pub(crate) fn new_unchecked_positivity(space: SpaceSpec, matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != space.dim() || !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                actual: matrix.nrows(),
            });
        }
        let tr = matrix.trace();
        if math::abs(tr.re - 1.0) > TRACE_TOL || math::abs(tr.im) > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr}")));
        }
        let herm = matrix.hermiticity_residual();
        if herm > DENSITY_HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "Hermiticity residual {herm:e}"
            )));
        }
        Ok(Self { space, matrix })
    }

    /// Incoherent mixture `Σ w_i |ψ_i><ψ_i|`; weights must be non-negative and sum to 1.
    pub fn mixture(states: &[(f64, StateVector)]) -> Result<Self> {
        let space = states
            .first()
            .map(|(_, s)| s.space)
            .ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
        let mut matrix = CMatrix::zeros(space.dim(), space.dim());
        for (w, s) in states {
            if s.space != space {
                return Err(Error::SpaceMismatch);
            }
            if !(*w >= 0.0) {
                return Err(Error::InvalidParameter {
                    name: "mixture weight",
                    value: *w,
                });
            }
            matrix.add_scaled_mut(
                &CMatrix::outer(&s.amplitudes, &s.amplitudes),
                Complex64::new(*w, 0.0),
            );
        }
        Self::new_unchecked_positivity(space, matrix)
    }

    pub fn space(&self) -> SpaceSpec {
        self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        self.matrix.hermiticity_residual()
    }

    /// Smallest eigenvalue (full Hermitian eigendecomposition; use on small spaces).
    pub fn min_eigenvalue(&self) -> f64 {
        crate::linalg::hermitian_eigenvalues(&self.matrix)[0]
    }

    pub fn is_positive(&self, tol: f64) -> bool {
        is_positive_semidefinite(&self.matrix, tol)
    }

    /// Diagonal populations in the composite basis.
    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    /// Marginal Fock distribution of one mode.
    pub fn mode_populations(&self, mode: Mode) -> Vec<f64> {
        mode_marginal(self.space, mode, &self.populations())
    }

    /// `|<ψ|ρ|ψ>|`
    pub fn fidelity_with(&self, psi: &StateVector) -> Result<f64> {
        if psi.space != self.space {
            return Err(Error::SpaceMismatch);
        }
        let rho_psi = self.matrix.mul_vec(&psi.amplitudes);
        Ok(vector::inner(&psi.amplitudes, &rho_psi).re)
    }
}

/// Marginal Fock distribution of `mode` from composite-basis populations.
pub fn mode_marginal(space: SpaceSpec, mode: Mode, populations: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; space.truncation(mode)];
    for (i, _, nx, ny) in space.basis() {
        let n = match mode {
            Mode::X => nx,
            Mode::Y => ny,
        };
        out[n] += populations[i];
    }
    out
}

/// Real expectation values of Hermitian observables.
pub trait Expectation {
    fn space(&self) -> SpaceSpec;

    /// `<O>` without any Hermiticity check.
    fn expectation_complex(&self, obs: &Operator) -> Result<Complex64>;

    /// `<O>` for Hermitian `O`; the imaginary part must be below 1e-9.
    fn expectation(&self, obs: &Operator) -> Result<f64> {
        if obs.space() != self.space() {
            return Err(Error::SpaceMismatch);
        }
        obs.ensure_hermitian()?;
        let value = self.expectation_complex(obs)?;
        if math::abs(value.im) > EXPECTATION_IMAG_TOL {
            return Err(Error::InvalidArgument(format!(
                "expectation has imaginary part {:e}",
                value.im
            )));
        }
        Ok(value.re)
    }
}

impl Expectation for StateVector {
    fn space(&self) -> SpaceSpec {
        self.space
    }

    fn expectation_complex(&self, obs: &Operator) -> Result<Complex64> {
        let o_psi = obs.apply(self)?;
        Ok(vector::inner(&self.amplitudes, &o_psi))
    }
}

impl Expectation for DensityMatrix {
    fn space(&self) -> SpaceSpec {
        self.space
    }

    fn expectation_complex(&self, obs: &Operator) -> Result<Complex64> {
        if obs.space() != self.space {
            return Err(Error::SpaceMismatch);
        }
        // Tr(O ρ) = Σ_ij O_ij ρ_ji
        Ok(obs
            .matrix()
            .iter()
            .map(|(i, j, o)| o * self.matrix[(j, i)])
            .sum())
    }
}

/// Free-function form of [`Expectation::expectation`].
pub fn expectation<S: Expectation + ?Sized>(state: &S, obs: &Operator) -> Result<f64> {
    state.expectation(obs)
}
