//! JSON run configuration.

use std::collections::BTreeMap;

use paraion_core::dynamics::{
    anisotropy_couplings, EvolutionMethod, HamiltonianSpec, NoiseSpec,
};
use paraion_core::paraalgebra::vacuum_state;
use paraion_core::{basis_state, Branch, ParaKind, ParaModel, SpaceSpec, Spin, StateVector};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Heating rate used when noise is enabled without an explicit rate, phonons/s.
pub const DEFAULT_HEATING_RATE: f64 = 70.0;
pub const DEFAULT_SHOTS: u32 = 300;
/// Largest Hilbert-space dimension accepted for the dense master equation.
pub const MASTER_DIM_LIMIT: usize = 512;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub coupling: CouplingConfig,
    #[serde(default)]
    pub hamiltonian: HamiltonianForm,
    pub truncation: TruncationConfig,
    #[serde(default)]
    pub initial: InitialState,
    pub time: TimeConfig,
    #[serde(default)]
    pub method: EvolutionMethod,
    #[serde(default)]
    pub noise: NoiseConfig,
    #[serde(default)]
    pub sampling: SamplingConfig,
    #[serde(default)]
    pub outputs: OutputConfig,
    #[serde(default)]
    pub strict: bool,
    /// Free-form experimental settings echoed into the report.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, serde_json::Value>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub kind: ParaKind,
    pub order: u32,
    #[serde(default)]
    pub branch: Branch,
}

/// Either `g`, or the red and blue sideband Rabi frequencies (rad/s).
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rabi_red: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rabi_blue: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HamiltonianForm {
    #[default]
    ParaDriven,
    Ion,
    Sidebands,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationConfig {
    pub d_x: usize,
    pub d_y: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialState {
    Named(String),
    Basis(BasisConfig),
}

impl Default for InitialState {
    fn default() -> Self {
        InitialState::Named("vacuum".into())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisConfig {
    pub spin: Spin,
    pub n_x: usize,
    pub n_y: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeUnits {
    /// Dimensionless `g·t`.
    #[default]
    Gt,
    Seconds,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    #[serde(default)]
    pub units: TimeUnits,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    #[serde(default)]
    pub enabled: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heating_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heating_rate_x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heating_rate_y: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thermal_occupation: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingConfig {
    #[serde(default)]
    pub enabled: bool,
    #[serde(default = "default_shots")]
    pub shots: u32,
    #[serde(default)]
    pub seed: u64,
}

fn default_shots() -> u32 {
    DEFAULT_SHOTS
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self {
            enabled: false,
            shots: DEFAULT_SHOTS,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_csv")]
    pub csv: String,
    #[serde(default = "default_svg")]
    pub svg: Option<String>,
    #[serde(default)]
    pub json: Option<String>,
    #[serde(default)]
    pub snapshots: bool,
}

fn default_csv() -> String {
    "trajectory.csv".into()
}

fn default_svg() -> Option<String> {
    Some("trajectory.svg".into())
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            csv: default_csv(),
            svg: default_svg(),
            json: None,
            snapshots: false,
        }
    }
}

/// A validated configuration, resolved into simulator inputs.
#[derive(Clone, Debug)]
pub struct RunPlan {
    pub space: SpaceSpec,
    pub model: ParaModel,
    pub hamiltonian: HamiltonianSpec,
    /// `(g+, g−)` when sideband Rabi frequencies were given.
    pub envelope: Option<(f64, f64)>,
    pub initial: StateVector,
    pub times: Vec<f64>,
    pub noise: Option<NoiseSpec>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::field(if path == "." { "config".into() } else { path }, e.into_inner())
        })?;
        config.plan()?;
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Validates every field and resolves the run.
    pub fn plan(&self) -> CliResult<RunPlan> {
        let model = ParaModel::new(self.model.kind, self.model.order, self.model.branch, 0.0)
            .map_err(|e| match e {
                paraion_core::Error::InvalidOrder(_) => CliError::field("model.order", e),
                _ => CliError::field("model.branch", e),
            })?;
        let space = SpaceSpec::new(self.truncation.d_x, self.truncation.d_y)
            .map_err(|e| CliError::field("truncation", e))?;

        let c = self.coupling;
        let (g, envelope) = match (c.g, c.rabi_red, c.rabi_blue) {
            (Some(g), None, None) => {
                nonneg("coupling.g", g)?;
                (g, None)
            }
            (None, Some(r), Some(b)) => {
                let (gp, gm) = anisotropy_couplings(r, b).map_err(|e| CliError::field("coupling", e))?;
                ((gp + gm) / 2.0, Some((gp, gm)))
            }
            _ => {
                return Err(CliError::field(
                    "coupling",
                    "give either `g` or both `rabi_red` and `rabi_blue`",
                ))
            }
        };
        let model = model.with_coupling(g).map_err(|e| CliError::field("coupling", e))?;
        let hamiltonian = hamiltonian_spec(self.hamiltonian, model.kind(), g);

        let initial = match &self.initial {
            InitialState::Named(name) if name == "vacuum" => {
                vacuum_state(space, &model).map_err(|e| CliError::field("initial", e))?
            }
            InitialState::Named(name) => {
                return Err(CliError::field(
                    "initial",
                    format!("unknown initial state `{name}` (expected \"vacuum\" or {{spin, n_x, n_y}})"),
                ))
            }
            InitialState::Basis(b) => {
                basis_state(space, b.spin, b.n_x, b.n_y).map_err(|e| CliError::field("initial", e))?
            }
        };

        let times = self.resolve_times(g)?;

        let noise = if self.noise.enabled {
            let n = self.noise;
            let base = n.heating_rate.unwrap_or(DEFAULT_HEATING_RATE);
            let spec = NoiseSpec {
                heating_rate_x: n.heating_rate_x.unwrap_or(base),
                heating_rate_y: n.heating_rate_y.unwrap_or(base),
                thermal_occupation: n.thermal_occupation,
            };
            spec.validate().map_err(|e| CliError::field("noise", e))?;
            if space.dim() > MASTER_DIM_LIMIT {
                return Err(CliError::field(
                    "noise.enabled",
                    format!(
                        "master equation limited to dimension {MASTER_DIM_LIMIT}, truncation gives {}",
                        space.dim()
                    ),
                ));
            }
            Some(spec)
        } else {
            None
        };

        if self.sampling.enabled && self.sampling.shots == 0 {
            return Err(CliError::field("sampling.shots", "must be at least 1"));
        }
        if self.outputs.csv.is_empty() {
            return Err(CliError::field("outputs.csv", "must not be empty"));
        }

        Ok(RunPlan {
            space,
            model,
            hamiltonian,
            envelope,
            initial,
            times,
            noise,
        })
    }

    fn resolve_times(&self, g: f64) -> CliResult<Vec<f64>> {
        let t = &self.time;
        let raw: Vec<f64> = match (&t.times, t.t_max, t.points) {
            (Some(list), None, None) => {
                if list.is_empty() {
                    return Err(CliError::field("time.times", "must not be empty"));
                }
                list.clone()
            }
            (None, Some(t_max), Some(points)) => {
                nonneg("time.t_max", t_max)?;
                if points < 2 {
                    return Err(CliError::field("time.points", "must be at least 2"));
                }
                (0..points)
                    .map(|i| t_max * i as f64 / (points - 1) as f64)
                    .collect()
            }
            _ => {
                return Err(CliError::field(
                    "time",
                    "give either `times` or both `t_max` and `points`",
                ))
            }
        };
        for (i, w) in raw.windows(2).enumerate() {
            if !(w[1] >= w[0]) {
                return Err(CliError::field(format!("time.times[{}]", i + 1), "times must be sorted"));
            }
        }
        if let Some(i) = raw.iter().position(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(CliError::field(format!("time.times[{i}]"), "times must be finite and non-negative"));
        }
        match t.units {
            TimeUnits::Seconds => Ok(raw),
            TimeUnits::Gt if g > 0.0 => Ok(raw.iter().map(|v| v / g).collect()),
            TimeUnits::Gt => Err(CliError::field("time.units", "dimensionless `gt` needs a positive coupling")),
        }
    }
}

fn nonneg(path: &str, v: f64) -> CliResult<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::field(path, format!("must be finite and non-negative, got {v}")))
    }
}

/// All three forms produce the same operator for the same `g`.
pub fn hamiltonian_spec(form: HamiltonianForm, kind: ParaKind, g: f64) -> HamiltonianSpec {
    let rabi = std::f64::consts::SQRT_2 * g;
    match (form, kind) {
        (HamiltonianForm::ParaDriven, _) => HamiltonianSpec::ParaDriven { kind, coupling: g },
        (HamiltonianForm::Ion, ParaKind::ParaFermi) => HamiltonianSpec::IonParaFermi { rabi },
        (HamiltonianForm::Ion, ParaKind::ParaBose) => HamiltonianSpec::IonParaBose { rabi },
        (HamiltonianForm::Sidebands, ParaKind::ParaFermi) => HamiltonianSpec::para_fermi_sidebands(rabi),
        (HamiltonianForm::Sidebands, ParaKind::ParaBose) => HamiltonianSpec::para_bose_sidebands(rabi),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "model": {"kind": "para_fermi", "order": 2},
        "coupling": {"g": 1.0},
        "truncation": {"d_x": 3, "d_y": 3},
        "time": {"t_max": 6.283185307179586, "points": 5}
    }"#;

    fn error_path(text: &str) -> String {
        match RunConfig::from_json(text) {
            Err(CliError::Field { path, .. }) => path,
            other => panic!("expected a field error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_config_resolves() {
        let cfg = RunConfig::from_json(MINIMAL).unwrap();
        let plan = cfg.plan().unwrap();
        assert_eq!(plan.times.len(), 5);
        assert!(plan.noise.is_none() && plan.envelope.is_none());
        assert_eq!(cfg.outputs.csv, "trajectory.csv");
        let echoed = RunConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(echoed, cfg);
    }

    #[test]
    fn field_paths_in_errors() {
        assert_eq!(error_path(&MINIMAL.replace("\"order\": 2", "\"order\": 3")), "model.order");
        assert_eq!(error_path(&MINIMAL.replace("\"points\": 5", "\"points\": 1")), "time.points");
        assert_eq!(error_path(&MINIMAL.replace("\"d_x\": 3", "\"d_x\": \"three\"")), "truncation.d_x");
        assert_eq!(error_path(&MINIMAL.replace("\"g\": 1.0", "\"g\": -1.0")), "coupling.g");
        assert_eq!(error_path(&MINIMAL.replace("\"kind\": \"para_fermi\"", "\"kind\": \"boson\"")), "model.kind");
        assert_eq!(error_path(&MINIMAL.replace("\"g\": 1.0", "\"g\": 1.0, \"extra\": 1")), "coupling.extra");
        assert_eq!(error_path(&MINIMAL.replace("\"d_y\": 3", "\"d_y\": 1")), "initial");
    }

    #[test]
    fn rabi_pair_sets_envelope() {
        let text = MINIMAL
            .replace("para_fermi", "para_bose")
            .replace("{\"g\": 1.0}", "{\"rabi_red\": 1.1, \"rabi_blue\": 1.0}");
        let plan = RunConfig::from_json(&text).unwrap().plan().unwrap();
        let (gp, gm) = plan.envelope.unwrap();
        assert!((gp - 1.1).abs() < 1e-15 && (gm - 1.0).abs() < 1e-15);
        assert!((plan.model.coupling() - 1.05).abs() < 1e-15);
    }

    #[test]
    fn forms_agree() {
        let space = SpaceSpec::new(4, 4).unwrap();
        for kind in [ParaKind::ParaFermi, ParaKind::ParaBose] {
            let reference = paraion_core::dynamics::build_hamiltonian(space, &hamiltonian_spec(HamiltonianForm::ParaDriven, kind, 0.7)).unwrap();
            for form in [HamiltonianForm::Ion, HamiltonianForm::Sidebands] {
                let h = paraion_core::dynamics::build_hamiltonian(space, &hamiltonian_spec(form, kind, 0.7)).unwrap();
                assert!(h.max_abs_diff(&reference) < 1e-12);
            }
        }
    }
}
