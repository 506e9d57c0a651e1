use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fockspace::{SpaceSpec, Spin};
use crate::linalg::{CMatrix, KrylovOptions};
use crate::paraalgebra::ParaModel;

use super::unitary::EvolutionMethod;

/// Top-two-level population above which a trajectory is flagged.
pub const DEFAULT_LEAKAGE_THRESHOLD: f64 = 1e-4;

/// Observables at one output time.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Record {
    pub t: f64,
    pub p_up: f64,
    pub n_x: f64,
    pub n_y: f64,
    pub n_para: Option<f64>,
    /// Population in the top two Fock levels of either mode.
    pub leakage: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Snapshot {
    Pure(Vec<Complex64>),
    Mixed(CMatrix),
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum TrajectoryWarning {
    /// Leakage first exceeded `threshold` at `first_time`; `max_population` over the run.
    Leakage {
        threshold: f64,
        first_time: f64,
        max_population: f64,
    },
}

impl core::fmt::Display for TrajectoryWarning {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            TrajectoryWarning::Leakage {
                threshold,
                first_time,
                max_population,
            } => write!(
                f,
                "truncation leakage exceeded {threshold:e} at t = {first_time:e} s (max {max_population:e})"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    space: SpaceSpec,
    records: Vec<Record>,
    snapshots: Option<Vec<Snapshot>>,
    warnings: Vec<TrajectoryWarning>,
}

impl Trajectory {
    pub(crate) fn new(space: SpaceSpec, snapshots: bool) -> Self {
        Self {
            space,
            records: Vec::new(),
            snapshots: if snapshots { Some(Vec::new()) } else { None },
            warnings: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, record: Record, snapshot: impl FnOnce() -> Snapshot) {
        self.records.push(record);
        if let Some(s) = self.snapshots.as_mut() {
            s.push(snapshot());
        }
    }

    /// Applies the leakage policy: a warning, or an error when `strict`.
    pub(crate) fn finish(mut self, threshold: f64, strict: bool) -> Result<Self> {
        let first = self.records.iter().find(|r| r.leakage > threshold);
        if let Some(first) = first {
            if strict {
                return Err(Error::LeakageExceeded {
                    time: first.t,
                    population: first.leakage,
                });
            }
            let warning = TrajectoryWarning::Leakage {
                threshold,
                first_time: first.t,
                max_population: self.max_leakage(),
            };
            self.warnings.push(warning);
        }
        Ok(self)
    }

    pub fn space(&self) -> SpaceSpec {
        self.space
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t).collect()
    }

    pub fn snapshots(&self) -> Option<&[Snapshot]> {
        self.snapshots.as_deref()
    }

    pub fn warnings(&self) -> &[TrajectoryWarning] {
        &self.warnings
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn max_leakage(&self) -> f64 {
        self.records.iter().fold(0.0, |m, r| m.max(r.leakage))
    }

    pub fn p_up(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.p_up).collect()
    }

    pub fn n_x(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.n_x).collect()
    }

    pub fn n_y(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.n_y).collect()
    }

    /// Largest absolute difference in any recorded observable.
    pub fn max_observable_diff(&self, other: &Trajectory) -> f64 {
        self.records
            .iter()
            .zip(&other.records)
            .map(|(a, b)| {
                let para = match (a.n_para, b.n_para) {
                    (Some(x), Some(y)) => (x - y).abs(),
                    _ => 0.0,
                };
                (a.p_up - b.p_up)
                    .abs()
                    .max((a.n_x - b.n_x).abs())
                    .max((a.n_y - b.n_y).abs())
                    .max(para)
            })
            .fold(0.0, f64::max)
    }
}

/// Options shared by the unitary and master-equation integrators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolveOptions {
    pub method: EvolutionMethod,
    /// Model whose number operator is recorded as `n_para`.
    pub model: Option<ParaModel>,
    pub snapshots: bool,
    pub leakage_threshold: f64,
    pub strict: bool,
    pub krylov: KrylovOptions,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            method: EvolutionMethod::MatrixExponential,
            model: None,
            snapshots: false,
            leakage_threshold: DEFAULT_LEAKAGE_THRESHOLD,
            strict: false,
            krylov: KrylovOptions::default(),
        }
    }
}

impl EvolveOptions {
    pub fn with_model(mut self, model: ParaModel) -> Self {
        self.model = Some(model);
        self
    }

    pub fn with_method(mut self, method: EvolutionMethod) -> Self {
        self.method = method;
        self
    }

    pub fn with_snapshots(mut self, snapshots: bool) -> Self {
        self.snapshots = snapshots;
        self
    }

    pub fn strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }
}

/// Population of the top two Fock levels of either mode.
pub fn leakage_population(space: SpaceSpec, populations: &[f64]) -> f64 {
    let edge = |n: usize, d: usize| n + 2 >= d;
    space
        .basis()
        .filter(|&(_, _, nx, ny)| edge(nx, space.d_x()) || edge(ny, space.d_y()))
        .map(|(i, _, _, _)| populations[i])
        .sum()
}

/// Observables from basis-state populations (all recorded quantities are diagonal).
pub fn observe_populations(
    space: SpaceSpec,
    t: f64,
    populations: &[f64],
    model: Option<&ParaModel>,
) -> Record {
    let mut p_up = 0.0;
    let mut n_x = 0.0;
    let mut n_y = 0.0;
    let mut n_para = 0.0;
    for (i, spin, nx, ny) in space.basis() {
        let p = populations[i];
        if spin == Spin::Up {
            p_up += p;
        }
        n_x += p * nx as f64;
        n_y += p * ny as f64;
        if let Some(m) = model {
            n_para += p * m.number_eigenvalue(nx, ny) as f64;
        }
    }
    Record {
        t,
        p_up: p_up.clamp(0.0, 1.0),
        n_x: n_x.max(0.0),
        n_y: n_y.max(0.0),
        n_para: model.map(|_| n_para),
        leakage: leakage_population(space, populations).max(0.0),
    }
}
