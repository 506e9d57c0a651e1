use paraion_core::protocol::{fit_populations, PopulationFit, ReadoutScan};

use super::Context;
use crate::cli::FitArgs;
use crate::error::{CliError, CliResult};
use crate::output::{json_bytes, output_path, read_table, write_atomic};

pub const REPORT_FILE: &str = "fit.json";

pub fn fit(ctx: &Context, args: &FitArgs) -> CliResult<PopulationFit> {
    let table = read_table(&args.scan)?;
    let times = table.column("t_s")?.to_vec();
    let p_up = table.column("P_up")?.to_vec();
    let shots = table.column("shots")?;
    if let Some(i) = p_up.iter().position(|p| !(0.0..=1.0).contains(p)) {
        return Err(CliError::Input(format!("row {}: P_up must lie in [0, 1]", i + 1)));
    }
    let shots = shots
        .iter()
        .find(|s| s.is_finite())
        .map(|&s| {
            if s >= 1.0 && s.fract() == 0.0 && s <= u32::MAX as f64 {
                Ok(s as u32)
            } else {
                Err(CliError::Input(format!("shots must be a positive integer, got {s}")))
            }
        })
        .transpose()?;
    let scan = ReadoutScan {
        mode: args.mode.into(),
        times,
        p_up,
        shots,
        seed: None,
        polarity: args.polarity.into(),
    };
    let fit = fit_populations(&scan, args.rabi_01, args.gamma, args.n_max)?;
    write_atomic(&output_path(&ctx.out, REPORT_FILE), &json_bytes(&fit))?;
    for w in &fit.warnings {
        ctx.warn(w.to_string());
    }
    for (n, p) in fit.populations.iter().enumerate() {
        ctx.say(format!("P_{n} = {p:.6}"));
    }
    ctx.say(format!("residual {:.3e}, condition number {:.3e}", fit.residual, fit.condition_number));
    Ok(fit)
}
