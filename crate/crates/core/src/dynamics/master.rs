use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fockspace::{mode_op, DensityMatrix, LadderKind, Mode, Operator, SpaceSpec};
use crate::linalg::{CMatrix, CsrMatrix};

use super::check_times;
use super::trajectory::{observe_populations, EvolveOptions, Snapshot, Trajectory};
use super::unitary::{rk_substeps, RK_STEPS_PER_NORM};

const TRACE_TOL: f64 = 1e-6;

/// Motional heating. Rates are the observable `d⟨n⟩/dt` at the vacuum, in phonons/s.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NoiseSpec {
    pub heating_rate_x: f64,
    pub heating_rate_y: f64,
    /// Mean thermal occupation. `None` uses `γ(n_th + 1) ≈ γ n_th`.
    pub thermal_occupation: Option<f64>,
}

impl NoiseSpec {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn uniform(rate: f64) -> Self {
        Self {
            heating_rate_x: rate,
            heating_rate_y: rate,
            thermal_occupation: None,
        }
    }

    pub fn rate(&self, mode: Mode) -> f64 {
        match mode {
            Mode::X => self.heating_rate_x,
            Mode::Y => self.heating_rate_y,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("heating_rate_x", self.heating_rate_x),
            ("heating_rate_y", self.heating_rate_y),
        ] {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        if let Some(n) = self.thermal_occupation {
            if !(n > 0.0) || !n.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "thermal_occupation",
                    value: n,
                });
            }
        }
        Ok(())
    }

    /// Lindblad coefficients `(γ n_th, γ (n_th + 1))` for `L[a†]` and `L[a]`.
    pub fn coefficients(&self, mode: Mode) -> (f64, f64) {
        let up = self.rate(mode) / 2.0;
        let down = match self.thermal_occupation {
            Some(n) => up * (n + 1.0) / n,
            None => up,
        };
        (up, down)
    }

    pub fn is_zero(&self) -> bool {
        self.heating_rate_x == 0.0 && self.heating_rate_y == 0.0
    }
}

struct Liouvillian {
    /// `H − i Σ κ O†O`
    effective: CsrMatrix,
    /// `(2κ, O, O†)`
    jumps: Vec<(f64, CsrMatrix, CsrMatrix)>,
    norm: f64,
}

impl Liouvillian {
    fn new(h: &Operator, noise: &NoiseSpec) -> Self {
        let space = h.space();
        let mut effective = h.matrix().clone();
        let mut jumps = Vec::new();
        let mut norm = h.matrix().norm_inf();
        for mode in [Mode::X, Mode::Y] {
            let (up, down) = noise.coefficients(mode);
            for (kappa, kind) in [(up, LadderKind::Create), (down, LadderKind::Annihilate)] {
                if kappa == 0.0 {
                    continue;
                }
                let o = mode_op(space, mode, kind).matrix().clone();
                let od = o.adjoint();
                let odo = od.matmul(&o);
                effective = effective.add_scaled(&odo, Complex64::new(0.0, -kappa));
                norm += 2.0 * kappa * (odo.norm_inf() + o.norm_inf() * od.norm_inf());
                jumps.push((2.0 * kappa, o, od));
            }
        }
        Self {
            effective,
            jumps,
            norm,
        }
    }

    /// `−iKρ + iρK† + Σ 2κ OρO†`
    fn apply(&self, rho: &CMatrix) -> CMatrix {
        let mut m = self.effective.mul_dense(rho).scaled(Complex64::new(0.0, -1.0));
        let m_adj = m.adjoint();
        m.add_scaled_mut(&m_adj, Complex64::new(1.0, 0.0));
        for (weight, o, od) in &self.jumps {
            let jump = od.dense_mul(&o.mul_dense(rho));
            m.add_scaled_mut(&jump, Complex64::new(*weight, 0.0));
        }
        m
    }

    fn rk4_step(&self, rho: &mut CMatrix, dt: f64) {
        let k1 = self.apply(rho);
        let mut tmp = rho.clone();
        tmp.add_scaled_mut(&k1, Complex64::new(dt / 2.0, 0.0));
        let k2 = self.apply(&tmp);
        let mut tmp = rho.clone();
        tmp.add_scaled_mut(&k2, Complex64::new(dt / 2.0, 0.0));
        let k3 = self.apply(&tmp);
        let mut tmp = rho.clone();
        tmp.add_scaled_mut(&k3, Complex64::new(dt, 0.0));
        let k4 = self.apply(&tmp);
        let w = dt / 6.0;
        rho.add_scaled_mut(&k1, Complex64::new(w, 0.0));
        rho.add_scaled_mut(&k2, Complex64::new(2.0 * w, 0.0));
        rho.add_scaled_mut(&k3, Complex64::new(2.0 * w, 0.0));
        rho.add_scaled_mut(&k4, Complex64::new(w, 0.0));
    }
}

fn check_space(h: &Operator, rho: &DensityMatrix) -> Result<SpaceSpec> {
    if h.space() != rho.space() {
        return Err(Error::SpaceMismatch);
    }
    Ok(h.space())
}

/// Integrates the Lindblad equation with `L[O]ρ = 2OρO† − O†Oρ − ρO†O` by fixed-step RK4.
pub fn evolve_master(
    h: &Operator,
    rho0: &DensityMatrix,
    times: &[f64],
    noise: &NoiseSpec,
    opts: &EvolveOptions,
) -> Result<Trajectory> {
    h.ensure_hermitian()?;
    noise.validate()?;
    let space = check_space(h, rho0)?;
    check_times(times)?;
    let liouvillian = Liouvillian::new(h, noise);
    let max_step = if liouvillian.norm > 0.0 {
        1.0 / (RK_STEPS_PER_NORM * liouvillian.norm)
    } else {
        f64::INFINITY
    };
    let model = opts.model.as_ref();
    let mut rho = rho0.matrix().clone();
    let mut traj = Trajectory::new(space, opts.snapshots);
    let mut t_prev = 0.0;
    for &t in times {
        let n = if liouvillian.norm > 0.0 {
            rk_substeps(t - t_prev, max_step)
        } else {
            0
        };
        let step = (t - t_prev) / n.max(1) as f64;
        for k in 0..n {
            liouvillian.rk4_step(&mut rho, step);
            if !rho.all_finite() {
                return Err(Error::StepFailure {
                    time: t_prev + step * k as f64,
                });
            }
        }
        if (rho.trace() - Complex64::new(1.0, 0.0)).norm_sqr() > TRACE_TOL * TRACE_TOL {
            return Err(Error::StepFailure { time: t });
        }
        t_prev = t;
        let pops: Vec<f64> = rho.diagonal().iter().map(|z| z.re).collect();
        let record = observe_populations(space, t, &pops, model);
        traj.push(record, || Snapshot::Mixed(rho.clone()));
    }
    traj.finish(opts.leakage_threshold, opts.strict)
}
