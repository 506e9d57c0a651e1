use std::path::Path;
use std::time::Instant;

use paraion_core::dynamics::{build_hamiltonian, evolve_master, evolve_unitary, EvolveOptions, Trajectory};
use paraion_core::protocol::{sample_probabilities, Sampling};
use serde::Serialize;

use super::Context;
use crate::config::{hamiltonian_spec, RunConfig, RunPlan};
use crate::error::{CliError, CliResult};
use crate::output::{output_path, sampled_csv, trajectory_csv, trajectory_json, write_atomic, json_bytes};
use crate::svg::{Band, Chart, Series};

pub const REPORT_FILE: &str = "report.json";

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub files: Vec<String>,
    pub wall_time_s: f64,
    pub max_leakage: f64,
    pub warnings: Vec<String>,
}

struct Runs {
    main: Trajectory,
    envelope: Option<(Trajectory, Trajectory)>,
    noisy: Option<Trajectory>,
}

fn evolve_at(config: &RunConfig, plan: &RunPlan, g: f64, opts: &EvolveOptions) -> CliResult<Trajectory> {
    let spec = hamiltonian_spec(config.hamiltonian, plan.model.kind(), g);
    let h = build_hamiltonian(plan.space, &spec)?;
    Ok(evolve_unitary(&h, &plan.initial, &plan.times, opts)?)
}

fn run(config: &RunConfig, plan: &RunPlan) -> CliResult<Runs> {
    let opts = EvolveOptions {
        method: config.method,
        model: Some(plan.model),
        snapshots: config.outputs.snapshots,
        strict: config.strict,
        ..EvolveOptions::default()
    };
    let h = build_hamiltonian(plan.space, &plan.hamiltonian)?;
    let main = evolve_unitary(&h, &plan.initial, &plan.times, &opts)?;
    let envelope = match plan.envelope {
        Some((g_plus, g_minus)) => {
            let (upper, lower) = std::thread::scope(|s| {
                let upper = s.spawn(|| evolve_at(config, plan, g_plus, &opts));
                let lower = evolve_at(config, plan, g_minus, &opts);
                (upper.join().expect("evolution thread panicked"), lower)
            });
            Some((upper?, lower?))
        }
        None => None,
    };
    let noisy = match &plan.noise {
        Some(noise) => Some(evolve_master(&h, &plan.initial.to_density(), &plan.times, noise, &opts)?),
        None => None,
    };
    Ok(Runs { main, envelope, noisy })
}

fn stem(name: &str) -> &str {
    name.strip_suffix(".csv").unwrap_or(name)
}

fn chart(config: &RunConfig, runs: &Runs, sampled: Option<&[f64]>) -> Chart {
    let times = runs.main.times();
    let mut series = vec![Series { label: "P_up".into(), x: times.clone(), y: runs.main.p_up() }];
    if let Some(noisy) = &runs.noisy {
        series.push(Series { label: "P_up (heating)".into(), x: times.clone(), y: noisy.p_up() });
    }
    if let Some(p) = sampled {
        series.push(Series { label: "P_up (sampled)".into(), x: times.clone(), y: p.to_vec() });
    }
    let band = runs.envelope.as_ref().map(|(upper, lower)| {
        let (a, b) = (upper.p_up(), lower.p_up());
        Band {
            x: times.clone(),
            lower: a.iter().zip(&b).map(|(x, y)| x.min(*y)).collect(),
            upper: a.iter().zip(&b).map(|(x, y)| x.max(*y)).collect(),
        }
    });
    Chart {
        title: format!("{} p={}", config.model.kind.short_name(), config.model.order),
        x_label: "t (s)".into(),
        y_label: "P_up".into(),
        y_range: Some((0.0, 1.0)),
        series,
        band,
    }
}

pub fn simulate(ctx: &Context) -> CliResult<RunReport> {
    let started = Instant::now();
    let mut config = ctx
        .load_config()?
        .ok_or_else(|| CliError::Input("simulate needs --config PATH".into()))?;
    if let Some(seed) = ctx.seed {
        config.sampling.seed = seed;
    }
    config.strict |= ctx.strict;
    let plan = config.plan()?;
    let runs = run(&config, &plan)?;

    let out = &ctx.out;
    let mut files = Vec::new();
    let mut emit = |name: &str, bytes: &[u8]| -> CliResult<()> {
        let path = output_path(out, name);
        write_atomic(&path, bytes)?;
        files.push(path.display().to_string());
        Ok(())
    };
    let base = stem(&config.outputs.csv).to_string();
    emit(&config.outputs.csv, &trajectory_csv(&runs.main))?;
    if let Some((upper, lower)) = &runs.envelope {
        emit(&format!("{base}_g_plus.csv"), &trajectory_csv(upper))?;
        emit(&format!("{base}_g_minus.csv"), &trajectory_csv(lower))?;
    }
    if let Some(noisy) = &runs.noisy {
        emit(&format!("{base}_heating.csv"), &trajectory_csv(noisy))?;
    }
    let sampled = config.sampling.enabled.then(|| {
        let s = Sampling { shots: config.sampling.shots, seed: config.sampling.seed };
        sample_probabilities(&runs.main.p_up(), s)
    });
    if let Some(p) = &sampled {
        emit(&format!("{base}_sampled.csv"), &sampled_csv(&runs.main.times(), p, Some(config.sampling.shots)))?;
    }
    if let Some(json) = &config.outputs.json {
        emit(json, &trajectory_json(&runs.main))?;
    }
    if let Some(svg) = &config.outputs.svg {
        emit(svg, chart(&config, &runs, sampled.as_deref()).render().as_bytes())?;
    }

    let all = std::iter::once(&runs.main)
        .chain(runs.envelope.iter().flat_map(|(a, b)| [a, b]))
        .chain(runs.noisy.iter());
    let mut warnings = Vec::new();
    let mut max_leakage = 0.0f64;
    for traj in all {
        max_leakage = max_leakage.max(traj.max_leakage());
        warnings.extend(traj.warnings().iter().map(|w| w.to_string()));
    }
    for w in &warnings {
        ctx.warn(w);
    }
    let report_path = output_path(out, REPORT_FILE);
    files.push(report_path.display().to_string());
    let report = RunReport {
        config,
        files,
        wall_time_s: started.elapsed().as_secs_f64(),
        max_leakage,
        warnings,
    };
    write_atomic(&report_path, &json_bytes(&report))?;
    for f in &report.files {
        ctx.say(format!("wrote {}", Path::new(f).display()));
    }
    Ok(report)
}
