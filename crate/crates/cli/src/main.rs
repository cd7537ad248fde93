use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;

/// Kernels, spectra, polynomials, 9-j symbols and simulations of the
/// two-colour dice chain, as JSON documents on stdout.
///
/// Exit codes: 0 when every requested check passes, 1 when a check fails,
/// 2 on bad input.
#[derive(Parser, Debug)]
#[command(name = "bikraw", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Transition kernel on the states i1 + i2 <= N.
    Kernel(KernelArgs),
    /// Fixed points, analytic eigenvalue candidates and the numeric spectrum.
    Spectrum(SpectrumArgs),
    /// Table of P_{m,n}(x, y), plus R_{m,n} and orthonormality with --p.
    Poly(PolyArgs),
    /// One 9-j symbol, or the orthogonality sweep.
    Ninej(NinejArgs),
    /// Seeded Monte Carlo estimates compared with the exact kernel or law.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Evaluator {
    Conv,
    Closed,
    F3,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SimMode {
    Kernel,
    Stationary,
}

/// Chain parameters. Probabilities accept `a/b`, integers or decimals; the
/// exact backend is chosen when every value is written as `a/b` or an
/// integer, unless --backend says otherwise.
#[derive(Args, Debug, Clone)]
pub struct ChainFlags {
    /// Number of dice N.
    #[arg(long)]
    pub n: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha1: String,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha2: String,
    #[arg(long, allow_hyphen_values = true)]
    pub beta1: String,
    #[arg(long, allow_hyphen_values = true)]
    pub beta2: String,
    #[arg(long, value_enum)]
    pub backend: Option<BackendArg>,
}

#[derive(Args, Debug)]
pub struct KernelArgs {
    #[command(flatten)]
    pub chain: ChainFlags,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, value_enum, default_value = "closed")]
    pub evaluator: Evaluator,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub chain: ChainFlags,
    /// Diagonalize the symmetrized kernel and match the candidates.
    #[arg(long)]
    pub arbitrate: bool,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("params").required(true).args(["p", "tuvw"])))]
pub struct PolyArgs {
    /// p1,p2,p3,p4 (positive).
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<String>,
    /// t,u,v,w.
    #[arg(long, allow_hyphen_values = true)]
    pub tuvw: Option<String>,
    #[arg(long)]
    pub n: u32,
    /// First degree m; with --mm restricts the table to one (m, n).
    #[arg(long, requires = "mm")]
    pub m: Option<u32>,
    /// Second degree n.
    #[arg(long, requires = "m")]
    pub mm: Option<u32>,
    #[arg(long, value_enum)]
    pub backend: Option<BackendArg>,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("mode").required(true).args(["args", "orthocheck"])))]
pub struct NinejArgs {
    /// Nine comma-separated 2j values, row-major.
    #[arg(long, allow_hyphen_values = true)]
    pub args: Option<String>,
    /// Run the orthogonality sweep up to this 2j.
    #[arg(long)]
    pub orthocheck: Option<u32>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub chain: ChainFlags,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Draws per source (kernel mode) or chain length (stationary mode), per replica.
    #[arg(long)]
    pub steps: u64,
    #[arg(long, default_value_t = 1)]
    pub replicas: u32,
    #[arg(long, value_enum)]
    pub mode: SimMode,
    /// Starting state for --mode stationary, as i1,i2; defaults to N,0.
    #[arg(long)]
    pub start: Option<String>,
    /// Worker threads (0 = default); never changes the output.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Total-variation tolerance for the pass/fail exit code.
    #[arg(long, default_value_t = 0.01)]
    pub tv_tol: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Kernel(a) => commands::kernel(&a),
        Command::Spectrum(a) => commands::spectrum(&a),
        Command::Poly(a) => commands::poly(&a),
        Command::Ninej(a) => commands::ninej(&a),
        Command::Simulate(a) => commands::simulate(&a),
    };
    match result {
        Ok(out) => {
            println!("{}", out.text);
            if out.checks_passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("bikraw: a requested check failed; see the document");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("bikraw: {e}");
            ExitCode::from(2)
        }
    }
}
