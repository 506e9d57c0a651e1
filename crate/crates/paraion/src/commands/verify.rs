use paraion_core::paraalgebra::{describe_failures, para_lowering, verify_relations_with, RelationReport};
use paraion_core::{ParaModel, SpaceSpec};

use super::Context;
use crate::cli::VerifyArgs;
use crate::error::{CliError, CliResult};
use crate::output::{json_bytes, output_path, write_atomic};

pub const REPORT_FILE: &str = "verify.json";

pub fn verify(ctx: &Context, args: &VerifyArgs) -> CliResult<RelationReport> {
    let config = ctx.load_config()?;
    let from_config = config.as_ref();
    let missing = |what: &str| CliError::Input(format!("verify needs --{what} (or --config)"));
    let kind = args
        .kind
        .map(Into::into)
        .or(from_config.map(|c| c.model.kind))
        .ok_or_else(|| missing("kind"))?;
    let order = args.order.or(from_config.map(|c| c.model.order)).ok_or_else(|| missing("order"))?;
    let branch = args
        .branch
        .map(Into::into)
        .or(from_config.map(|c| c.model.branch))
        .unwrap_or_default();
    let d_x = args.d_x.or(from_config.map(|c| c.truncation.d_x)).ok_or_else(|| missing("d-x"))?;
    let d_y = args.d_y.or(from_config.map(|c| c.truncation.d_y)).ok_or_else(|| missing("d-y"))?;

    let model = ParaModel::new(kind, order, branch, 0.0)?;
    let space = SpaceSpec::new(d_x, d_y)?;
    let mut lowering = para_lowering(space, kind);
    if let Some(factor) = args.corrupt_lowering {
        lowering = lowering.scaled(factor);
    }
    let report = verify_relations_with(space, &model, &lowering)?;
    write_atomic(&output_path(&ctx.out, REPORT_FILE), &json_bytes(&report))?;
    ctx.say(report.to_string());
    if report.all_passed() {
        Ok(report)
    } else {
        Err(CliError::Verification(describe_failures(&report)))
    }
}
