use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;

#[derive(Parser, Debug, Clone)]
#[command(name = "sobolev", version, about = "Spectral eigensolvers for -Δu + c²/|x|² u = λu with Dirichlet conditions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Exact eigenvalues from Bessel zeros, or tabulated values for square/lshape.
    Reference(RunArgs),
    /// Solve once and compare against the reference when one is known.
    Solve(RunArgs),
    /// Error sweep over K (or the mortar path index) with fitted slopes.
    Convergence(RunArgs),
    /// Run the oracle suites.
    Validate(ValidateArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RunArgs {
    /// disk, ball3, balld:<d>, sector, square or lshape
    #[arg(long, default_value = "disk")]
    pub geometry: String,
    /// Defaults to II on disks, balls and sectors and msem on square/lshape.
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub c: f64,
    /// Sector opening parameter; the angle is π/γ.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub gamma: f64,
    /// Interface radius (default 0.3 on the square, 0.5 on the L-shape).
    #[arg(long = "R")]
    pub r: Option<f64>,
    #[arg(long = "K", default_value_t = 16)]
    pub k: usize,
    /// Largest harmonic/angular degree (default: enough for --count).
    #[arg(long = "N")]
    pub n: Option<usize>,
    /// k0,n0,k1,n1,...,k4,n4: disk block then the four quads.
    #[arg(long)]
    pub quad_degrees: Option<String>,
    #[arg(long, default_value_t = 5)]
    pub count: usize,
    /// K=a:b:step, or K=a:b:xF for a geometric sweep.
    #[arg(long)]
    pub sweep: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ValidateArgs {
    #[arg(long, value_enum)]
    pub module: Option<ModuleArg>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MethodArg {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
    #[value(name = "classic")]
    Classic,
    #[value(name = "poly")]
    Poly,
    #[value(name = "msem")]
    Msem,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModuleArg {
    Orthopoly,
    Specfun,
    Eiglin,
    Ball,
    Sector,
    Mortar,
}
