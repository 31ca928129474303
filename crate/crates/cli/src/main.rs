//! `lsq` — batch experiments for oscillator length-scale estimation.
//!
//! Every run is a pure function of its flags: seeds are explicit, reports
//! embed the resolved configuration, and identical invocations produce
//! byte-identical files.

mod format;
mod run;

use clap::{Args, Parser, Subcommand};
use std::process::ExitCode;

/// CLI-level failure with its process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or malformed input data (exit 2).
    Validation(String),
    /// Oracle disagreement beyond tolerance under `--verify` (exit 3).
    Tolerance(String),
    /// File-system failure (exit 4).
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Tolerance(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Tolerance(m) | CliError::Io(m) => m,
        }
    }
}

impl From<lsq_core::Error> for CliError {
    fn from(e: lsq_core::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "lsq", version, about = "Quantum estimation of the oscillator length-scale parameter d = L⁻²")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Quantum Fisher information of a probe state, by one or more engines.
    Qfi(QfiArgs),
    /// Draw position-measurement outcomes from a Fock probe into a CSV.
    Sample(SampleArgs),
    /// Point or posterior estimate of d from a sample CSV.
    Estimate(EstimateArgs),
    /// Monte Carlo estimator benchmark against the Cramér–Rao bound.
    Mc(McArgs),
    /// QFI scans over damping or thermal channel parameters.
    Channel(ChannelArgs),
    /// Entangled-probe QFI and moment-readout scans.
    Multimode(MultimodeArgs),
}

#[derive(Args)]
pub struct QfiArgs {
    /// fock | coherent | displaced-squeezed | damped | thermal | pair | sequence | ghz
    #[arg(long)]
    state: String,
    /// Excitation number (fock, damped, pair, sequence, ghz).
    #[arg(long, default_value_t = 0)]
    n: usize,
    /// Partner excitation for pair states.
    #[arg(long)]
    m: Option<usize>,
    /// Real displacement (coherent, displaced-squeezed).
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// Imaginary part of the displacement (coherent only).
    #[arg(long, default_value_t = 0.0)]
    alpha_im: f64,
    /// Squeezing strength D ≥ 1 (displaced-squeezed).
    #[arg(long, default_value_t = 1.0)]
    squeeze: f64,
    /// Loss parameter γ ∈ [0,1] (damped).
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    /// Thermal weight ξ ∈ [0,0.99) (thermal).
    #[arg(long, default_value_t = 0.0)]
    xi: f64,
    /// Pair kind: swap-sym | swap-antisym | super-plus | super-minus.
    #[arg(long, default_value = "super-minus")]
    kind: String,
    /// Superposition half-width ℓ (sequence).
    #[arg(long, default_value_t = 1)]
    ell: usize,
    /// Mode count N (ghz).
    #[arg(long, default_value_t = 2)]
    modes: usize,
    /// Length-scale parameter, single value or start:stop:step.
    #[arg(long, default_value = "1")]
    d: String,
    /// Engines to run (repeatable): auto | analytic | pure-numeric |
    /// sld-eigen | fidelity-fd | cfi-quadrature.
    #[arg(long, default_values_t = vec![String::from("auto")])]
    method: Vec<String>,
    /// Fock-space truncation override.
    #[arg(long)]
    cutoff: Option<usize>,
    /// Cross-check every engine against the family's reference value.
    #[arg(long)]
    verify: bool,
    /// Relative tolerance override for --verify.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Write a JSON report here (atomic).
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
pub struct SampleArgs {
    /// Probe excitation number.
    #[arg(long)]
    n: usize,
    /// True length-scale parameter.
    #[arg(long)]
    d: f64,
    /// Number of outcomes to draw.
    #[arg(long)]
    shots: usize,
    /// RNG seed (ChaCha12).
    #[arg(long)]
    seed: u64,
    /// Output CSV path (`index,q`).
    #[arg(long)]
    out: std::path::PathBuf,
    /// Optional JSON report path.
    #[arg(long)]
    report: Option<std::path::PathBuf>,
}

#[derive(Args)]
pub struct EstimateArgs {
    /// mom | mle | jeffreys
    #[arg(long)]
    estimator: String,
    /// Probe excitation number the samples were drawn with.
    #[arg(long)]
    n: usize,
    /// Input CSV path (`index,q`).
    #[arg(long = "in", value_name = "PATH")]
    input: std::path::PathBuf,
    /// Gamma prior shape (jeffreys uses the improper limit when absent).
    #[arg(long)]
    prior_shape: Option<f64>,
    /// Gamma prior rate.
    #[arg(long)]
    prior_rate: Option<f64>,
    /// Write a JSON report here (atomic).
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
pub struct McArgs {
    /// Probe excitation number.
    #[arg(long)]
    n: usize,
    /// True length-scale parameter.
    #[arg(long)]
    d: f64,
    /// Outcomes per replicate.
    #[arg(long)]
    shots: usize,
    /// Number of replicates.
    #[arg(long)]
    reps: usize,
    /// mom | mle | jeffreys
    #[arg(long)]
    estimator: String,
    /// Base RNG seed; replicate i uses seed + i.
    #[arg(long)]
    seed: u64,
    /// Write a JSON report here (atomic).
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
pub struct ChannelArgs {
    /// damping | thermal
    #[arg(long = "type", value_name = "KIND")]
    kind: String,
    /// Probe excitation number (damping).
    #[arg(long, default_value_t = 0)]
    n: usize,
    /// Loss parameter γ, single value or start:stop:step (damping).
    #[arg(long, default_value = "0")]
    gamma: String,
    /// Thermal weight ξ, single value or start:stop:step (thermal).
    #[arg(long, default_value = "0")]
    xi: String,
    /// Length-scale parameter.
    #[arg(long, default_value_t = 1.0)]
    d: f64,
    /// Write a JSON report here (atomic).
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
pub struct MultimodeArgs {
    /// Moment readout instead of a state QFI: bell | vacuum.
    #[arg(long)]
    readout: Option<String>,
    /// pair | sequence | ghz (ignored when --readout is set).
    #[arg(long, default_value = "pair")]
    state: String,
    /// Excitation number; a start:stop:step integer range for --readout vacuum.
    #[arg(long, default_value = "1")]
    n: String,
    /// Partner excitation for pair states.
    #[arg(long)]
    m: Option<usize>,
    /// Pair kind: swap-sym | swap-antisym | super-plus | super-minus.
    #[arg(long, default_value = "super-minus")]
    kind: String,
    /// Superposition half-width ℓ (sequence).
    #[arg(long, default_value_t = 1)]
    ell: usize,
    /// Mode count N (ghz).
    #[arg(long, default_value_t = 2)]
    modes: usize,
    /// Length-scale parameter.
    #[arg(long, default_value_t = 1.0)]
    d: f64,
    /// Fock-space truncation override.
    #[arg(long)]
    cutoff: Option<usize>,
    /// Write a JSON report here (atomic).
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Qfi(args) => run::cmd_qfi(&args),
        Command::Sample(args) => run::cmd_sample(&args),
        Command::Estimate(args) => run::cmd_estimate(&args),
        Command::Mc(args) => run::cmd_mc(&args),
        Command::Channel(args) => run::cmd_channel(&args),
        Command::Multimode(args) => run::cmd_multimode(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lsq: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
