use paraion_core::fockspace::Mode;
use paraion_core::protocol::{plan_fock_prep, simulate_sequence, PrepPlan};
use paraion_core::{basis_state, SpaceSpec, Spin};
use serde::Serialize;

use super::Context;
use crate::cli::PrepArgs;
use crate::error::{CliError, CliResult};
use crate::output::{json_bytes, output_path, write_atomic};

pub const REPORT_FILE: &str = "prep.json";

#[derive(Clone, Debug, Serialize)]
pub struct PrepReport {
    pub plan: PrepPlan,
    pub fidelity: f64,
    pub max_leakage: f64,
    pub warnings: Vec<String>,
}

pub fn prep(ctx: &Context, args: &PrepArgs) -> CliResult<PrepReport> {
    let space = SpaceSpec::new(args.d_x, args.d_y)?;
    let mode: Mode = args.mode.into();
    let plan = plan_fock_prep(space, mode, args.n, args.rabi_01)
        .map_err(|e| CliError::field("n", e))?;
    let start = basis_state(space, Spin::Down, 0, 0)?;
    let outcome = simulate_sequence(space, &plan, &start, ctx.strict)?;
    let (nx, ny) = match mode {
        Mode::X => (args.n, 0),
        Mode::Y => (0, args.n),
    };
    let target = basis_state(space, Spin::Down, nx, ny)?;
    let report = PrepReport {
        fidelity: outcome.state.fidelity(&target)?,
        max_leakage: outcome.max_leakage,
        warnings: outcome.warnings.iter().map(|w| w.to_string()).collect(),
        plan,
    };
    write_atomic(&output_path(&ctx.out, REPORT_FILE), &json_bytes(&report))?;
    for w in &report.warnings {
        ctx.warn(w);
    }
    for (i, step) in report.plan.steps.iter().enumerate() {
        ctx.say(format!(
            "{:>2}  {:<8} {:.6e} s  phase {:.3}",
            i + 1,
            step.kind.name(),
            step.duration,
            step.phase
        ));
    }
    ctx.say(format!("fidelity {:.9}", report.fidelity));
    Ok(report)
}
