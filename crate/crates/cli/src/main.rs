//! `phi4`: command-line access to the solvers, calibrations and the circuit
//! compiler.
//!
//! Exit codes: 0 success, 1 numerical or I/O failure, 2 promise violated
//! (probability inside the (1/3, 2/3) gap), 3 invalid input.

mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{write_json, Format, Report};

#[derive(Debug, Parser)]
#[command(name = "phi4", version, about = "Solvers, gate calibration and circuit compilation for source-driven scalar-field qubits")]
pub struct Cli {
    /// JSON file with the subcommand's base parameters; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for the ChaCha20 sampler.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Directory for the report and any artifacts; stdout only when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bound states of a one-dimensional potential.
    Eigensolve(EigensolveArgs),
    /// Driven two-level sweep in the lab or rotating frame.
    Passage(PassageArgs),
    /// Chirped-source spectrum with its region bound.
    Spectrum(SpectrumArgs),
    /// Gate calibration.
    Calibrate {
        #[command(subcommand)]
        gate: CalibrateGate,
    },
    /// Compile a logical circuit into source fields.
    Compile(CircuitArgs),
    /// Replay the compiled schedule through the gate models.
    Verify(VerifyArgs),
    /// Sample the Hadamard test on the ideal circuit unitary.
    Hadamard(HadamardArgs),
    /// Resource scalings from circuit size.
    EstimateResources(ResourceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    PoschlTeller,
    Qes,
    SquareBarrier,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Units {
    /// ħ = 1, explicit mass.
    Natural,
    /// ħ = 2m = 1.
    HbarTwoMassOne,
    /// ħ = m = 1.
    HbarMassOne,
}

#[derive(Debug, Args)]
pub struct EigensolveArgs {
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub g: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub height: Option<f64>,
    #[arg(long)]
    pub width: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long, value_enum, default_value_t = Units::HbarTwoMassOne)]
    pub units: Units,
    /// Largest number of states returned.
    #[arg(long, default_value_t = 4)]
    pub states: usize,
    /// Grid points; the default grid is sized from the potential.
    #[arg(long)]
    pub points: Option<usize>,
    /// Also write the wavefunctions (CSV) to the output directory.
    #[arg(long)]
    pub wavefunctions: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FrameArg {
    Lab,
    Rwa,
}

#[derive(Debug, Args)]
pub struct PassageArgs {
    #[arg(long)]
    pub omega0: Option<f64>,
    #[arg(long)]
    pub rabi: Option<f64>,
    #[arg(long)]
    pub bandwidth: Option<f64>,
    #[arg(long)]
    pub duration: Option<f64>,
    /// Take Ω, B, T from the ε-scaling (ω₀ = 1, unit matrix element).
    #[arg(long, conflicts_with_all = ["rabi", "bandwidth", "duration"])]
    pub epsilon: Option<f64>,
    /// Longest duration integrated directly; longer sweeps are time-rescaled.
    #[arg(long, default_value_t = 1e5)]
    pub max_duration: f64,
    #[arg(long, value_enum, default_value_t = FrameArg::Rwa)]
    pub frame: FrameArg,
    /// Trace points written to `<out>/trace.csv`.
    #[arg(long, default_value_t = 0)]
    pub trace: usize,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub omega0: Option<f64>,
    #[arg(long)]
    pub bandwidth: Option<f64>,
    #[arg(long)]
    pub duration: Option<f64>,
    /// Frequency range; defaults to ω₀ ± 1.5B.
    #[arg(long, allow_hyphen_values = true)]
    pub from: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub to: Option<f64>,
    #[arg(long, default_value_t = 1001)]
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    IncludeIdle,
    ExcludeIdle,
}

#[derive(Debug, Subcommand)]
pub enum CalibrateGate {
    /// Duration of the QES bump giving phase `target`.
    X {
        #[arg(long, default_value_t = 0.01)]
        g: f64,
        #[arg(long, default_value_t = 50.0)]
        beta: f64,
        #[arg(long, default_value_t = std::f64::consts::PI)]
        target: f64,
        #[arg(long, value_enum, default_value_t = ConventionArg::IncludeIdle)]
        convention: ConventionArg,
    },
    /// Depth-bump amplitude giving phase −θ.
    Z {
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 2.0)]
        lambda: f64,
        #[arg(long, default_value_t = 100.0)]
        tau: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha0: f64,
    },
    /// Bump schedule with closure tuned for zero leakage.
    Entangling {
        #[arg(long, default_value_t = 0.5)]
        b: f64,
        /// Interaction and shift amplitudes; or give --alpha/--beta instead.
        #[arg(long, allow_hyphen_values = true)]
        c: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        d: Option<f64>,
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["c", "d"])]
        alpha: Option<f64>,
        #[arg(long, allow_hyphen_values = true, requires = "alpha")]
        beta: Option<f64>,
        #[arg(long, default_value_t = 100.0)]
        duration: f64,
        #[arg(long, default_value_t = 1.0)]
        z_min: f64,
    },
}

#[derive(Debug, Args)]
pub struct CircuitArgs {
    /// Logical circuit JSON: {"n_qubits": n, "gates": [{"gate": "xrot", "qubit": 0, "theta": 1.0}, ...]}.
    #[arg(long)]
    pub circuit: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Circuit to compile and verify.
    #[arg(long, required_unless_present = "fields", conflicts_with = "fields")]
    pub circuit: Option<PathBuf>,
    /// Header of previously written fields.
    #[arg(long)]
    pub fields: Option<PathBuf>,
    /// Replay ideal gates instead of the calibrated models.
    #[arg(long)]
    pub ideal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PartArg {
    Re,
    Im,
}

#[derive(Debug, Args)]
pub struct HadamardArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    #[arg(long, value_enum, default_value_t = PartArg::Re)]
    pub part: PartArg,
    #[arg(long, default_value_t = 10_000)]
    pub shots: u64,
}

#[derive(Debug, Args)]
pub struct ResourceArgs {
    #[arg(long)]
    pub qubits: usize,
    #[arg(long)]
    pub gates: usize,
    #[arg(long)]
    pub depth: usize,
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 3,
            Failure::Runtime(_) => 1,
        }
    }
}

impl From<phi4_core::Error> for Failure {
    fn from(e: phi4_core::Error) -> Self {
        use phi4_core::Error::*;
        match e {
            InvalidParameter(_)
            | UnitsMismatch(..)
            | SolvabilityViolated { .. }
            | DimensionMismatch(..)
            | TooManyQubits(_)
            | BudgetExceeded { .. }
            | GridTooLarge { .. }
            | Format(_)
            | ZeroChirp => Failure::Invalid(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

/// Outcome of a subcommand: its report and whether a promise check failed.
pub struct Outcome {
    pub report: Report,
    pub promise_violated: bool,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Self {
            report,
            promise_violated: false,
        }
    }
}

fn emit(cli: &Cli, report: &Report) -> Result<(), Failure> {
    let ext = match cli.format {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    let mut sink: Box<dyn Write> = match &cli.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            Box::new(BufWriter::new(File::create(dir.join(format!("{}.{ext}", report.name)))?))
        }
        None => Box::new(io::stdout().lock()),
    };
    match cli.format {
        Format::Json => {
            write_json(&mut sink, &report.json)?;
            writeln!(sink)?;
        }
        Format::Csv => report.table.write(&mut sink)?,
    }
    sink.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(&cli).and_then(|o| emit(&cli, &o.report).map(|_| o.promise_violated)) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(f) => {
            let (Failure::Invalid(msg) | Failure::Runtime(msg)) = &f;
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}
