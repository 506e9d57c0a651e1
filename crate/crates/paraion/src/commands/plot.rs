use std::path::PathBuf;

use super::Context;
use crate::cli::PlotArgs;
use crate::error::{CliError, CliResult};
use crate::output::{output_path, read_table, write_atomic, Table};
use crate::svg::{Band, Chart, Series};

const PROBABILITY_COLUMNS: [&str; 2] = ["P_up", "leakage"];

pub fn plot(ctx: &Context, args: &PlotArgs) -> CliResult<PathBuf> {
    let tables: Vec<Table> = args.input.iter().map(|p| read_table(p)).collect::<CliResult<_>>()?;
    if args.columns.is_empty() {
        return Err(CliError::Input("no columns selected".into()));
    }
    let multiple = tables.len() > 1;
    let mut series = Vec::new();
    for (path, table) in args.input.iter().zip(&tables) {
        let x = table.column("t_s")?;
        for col in &args.columns {
            let label = if multiple {
                format!("{} {col}", path.file_stem().map(|s| s.to_string_lossy()).unwrap_or_default())
            } else {
                col.clone()
            };
            series.push(Series { label, x: x.to_vec(), y: table.column(col)?.to_vec() });
        }
    }
    let band = if args.band {
        if tables.len() != 2 || args.columns.len() != 1 {
            return Err(CliError::Input("--band needs two inputs and one column".into()));
        }
        let (a, b) = (&series[0], &series[1]);
        if a.x != b.x {
            return Err(CliError::Input("--band inputs must share the same t_s column".into()));
        }
        Some(Band {
            x: a.x.clone(),
            lower: a.y.iter().zip(&b.y).map(|(p, q)| p.min(*q)).collect(),
            upper: a.y.iter().zip(&b.y).map(|(p, q)| p.max(*q)).collect(),
        })
    } else {
        None
    };
    let probability = args.columns.iter().all(|c| PROBABILITY_COLUMNS.contains(&c.as_str()));
    let chart = Chart {
        title: args.title.clone().unwrap_or_else(|| args.columns.join(", ")),
        x_label: "t (s)".into(),
        y_label: args.columns.join(", "),
        y_range: probability.then_some((0.0, 1.0)),
        series,
        band,
    };
    let path = args.output.clone().unwrap_or_else(|| output_path(&ctx.out, "plot.svg"));
    write_atomic(&path, chart.render().as_bytes())?;
    ctx.say(format!("wrote {}", path.display()));
    Ok(path)
}
