mod fit;
mod plot;
mod prep;
mod simulate;
mod verify;

use std::path::{Path, PathBuf};

pub use fit::fit;
pub use plot::plot;
pub use prep::prep;
pub use simulate::{simulate, RunReport};
pub use verify::verify;

use crate::cli::Cli;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

/// Global flags shared by every subcommand.
#[derive(Clone, Debug)]
pub struct Context {
    pub config: Option<PathBuf>,
    pub out: PathBuf,
    pub seed: Option<u64>,
    pub strict: bool,
    pub quiet: bool,
}

impl Context {
    pub fn from_cli(cli: &Cli) -> Self {
        Self {
            config: cli.config.clone(),
            out: cli.out.clone(),
            seed: cli.seed,
            strict: cli.strict,
            quiet: cli.quiet,
        }
    }

    pub fn load_config(&self) -> CliResult<Option<RunConfig>> {
        self.config.as_deref().map(load_config).transpose()
    }

    pub fn say(&self, line: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", line.as_ref());
        }
    }

    pub fn warn(&self, line: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("warning: {}", line.as_ref());
        }
    }
}

pub fn load_config(path: &Path) -> CliResult<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    RunConfig::from_json(&text)
}
