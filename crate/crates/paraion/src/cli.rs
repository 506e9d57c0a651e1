use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use paraion_core::fockspace::Mode;
use paraion_core::protocol::SignalPolarity;
use paraion_core::{Branch, ParaKind};

#[derive(Debug, Parser)]
#[command(name = "paraion", version, about = "Para-particle oscillators on a trapped ion")]
pub struct Cli {
    /// Run configuration (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
    /// Overrides the sampling seed.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Treat truncation leakage as an error.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Suppress progress and warnings on the terminal
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Time evolution from a run configuration.
    Simulate,
    /// Check the para-particle identities on the truncated space.
    Verify(VerifyArgs),
    /// Plan and simulate Fock-state preparation.
    Prep(PrepArgs),
    /// Fit Fock populations to a blue-sideband scan.
    Fit(FitArgs),
    /// Render CSV columns to SVG.
    Plot(PlotArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    #[value(name = "pF", alias = "para_fermi")]
    ParaFermi,
    #[value(name = "pB", alias = "para_bose")]
    ParaBose,
}

impl From<KindArg> for ParaKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::ParaFermi => ParaKind::ParaFermi,
            KindArg::ParaBose => ParaKind::ParaBose,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    SpinDown,
    SpinUp,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::SpinDown => Branch::SpinDown,
            BranchArg::SpinUp => Branch::SpinUp,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    X,
    Y,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::X => Mode::X,
            ModeArg::Y => Mode::Y,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolarityArg {
    AsPrinted,
    Complemented,
}

impl From<PolarityArg> for SignalPolarity {
    fn from(p: PolarityArg) -> Self {
        match p {
            PolarityArg::AsPrinted => SignalPolarity::AsPrinted,
            PolarityArg::Complemented => SignalPolarity::Complemented,
        }
    }
}

/// Model and truncation default to those of `--config` when omitted.
#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Para-particle family
    #[arg(long)]
    pub kind: Option<KindArg>,
    /// Even order p
    #[arg(long, short = 'p')]
    pub order: Option<u32>,
    /// Fock levels kept in x
    #[arg(long)]
    pub d_x: Option<usize>,
    /// Fock levels kept in y
    #[arg(long)]
    pub d_y: Option<usize>,
    /// Vacuum branch (pB only)
    #[arg(long)]
    pub branch: Option<BranchArg>,
    /// Scales the lowering operator before checking (negative control).
    #[arg(long, hide = true)]
    pub corrupt_lowering: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PrepArgs {
    #[arg(long, value_enum, default_value = "x")]
    pub mode: ModeArg,
    /// Target Fock level.
    #[arg(long, short = 'n')]
    pub n: usize,
    /// Base Rabi frequency Ω01 (rad/s).
    #[arg(long, default_value_t = 2.0 * std::f64::consts::PI * 10e3)]
    pub rabi_01: f64,
    /// Fock levels kept in x
    #[arg(long, default_value_t = 8)]
    pub d_x: usize,
    /// Fock levels kept in y
    #[arg(long, default_value_t = 8)]
    pub d_y: usize,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Scan CSV with columns t_s, P_up, shots.
    #[arg(long, value_name = "PATH")]
    pub scan: PathBuf,
    /// Base Rabi frequency Ω01 (rad/s).
    #[arg(long)]
    pub rabi_01: f64,
    /// Decay rate γ (1/s).
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    /// Highest Fock level in the fit
    #[arg(long)]
    pub n_max: usize,
    #[arg(long, value_enum, default_value = "as-printed")]
    pub polarity: PolarityArg,
    #[arg(long, value_enum, default_value = "x")]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// One CSV, or two for a band.
    #[arg(long, required = true, num_args = 1..=2, value_name = "PATH")]
    pub input: Vec<PathBuf>,
    /// Columns to draw against `t_s`.
    #[arg(long, value_delimiter = ',', default_value = "P_up")]
    pub columns: Vec<String>,
    /// Shade between the two inputs.
    #[arg(long)]
    pub band: bool,
    /// Output SVG; defaults to `plot.svg` in the output directory.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Chart title
    #[arg(long)]
    pub title: Option<String>,
}
