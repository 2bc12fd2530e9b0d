use std::fmt;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod input;

use input::SourceArgs;

#[derive(Debug, Parser)]
#[command(name = "bellnet", version, about = "Bell-pair engineering on invariant stratification spin networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Stratification, coefficients, spectrum and feasible strata
    Analyze {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 0)]
        origin: usize,
        /// Tolerance of the two-value row test
        #[arg(long, default_value_t = bellnet_core::bell::ROW_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Couplings that create a Bell pair between the origin and a stratum
    Design(DesignArgs),
    /// Sample stratum amplitudes and concurrence of a design as CSV
    Evolve {
        #[command(flatten)]
        design: DesignArgs,
        /// End of the time grid (defaults to tstar)
        #[arg(long)]
        tmax: Option<f64>,
        #[arg(long, default_value_t = 101)]
        samples: usize,
    },
    /// Intersection numbers and Bose-Mesner closure of the distance classes
    VerifyScheme {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Realise a design with pairwise Heisenberg couplings in the full spin space
    HeisenbergCheck(DesignArgs),
    /// Built-in graphs and coefficient presets
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogAction {
    /// One line per entry: name, kind, d, coefficients
    List {
        /// Worker threads (0 = all cores)
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write an entry as an edge list or coefficient file
    Emit {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
struct DesignArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = 0)]
    origin: usize,
    /// Target stratum (defaults to the last one)
    #[arg(long)]
    stratum: Option<usize>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    xi0: f64,
    /// Integer winding per eigenvalue, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    windings: Vec<i64>,
    #[arg(long, default_value_t = 1.0)]
    tstar: f64,
    #[arg(long, default_value_t = bellnet_core::bell::ROW_TOL)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Core(bellnet_core::Error),
    Usage(String),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Core(e) => write!(f, "{e}"),
            Self::Usage(m) | Self::Io(m) => f.write_str(m),
        }
    }
}

impl From<bellnet_core::Error> for CliError {
    fn from(e: bellnet_core::Error) -> Self {
        Self::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Core(_) => 1,
            Self::Usage(_) => 2,
            Self::Io(_) => 3,
        }
    }
}

/// Writes `text` to `out`, or to standard output.
fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { source, origin, tol, out } => {
            emit(out.as_ref(), &commands::analyze(&source.load()?, origin, tol)?)
        }
        Command::Design(args) => emit(args.out.as_ref(), &commands::design(&args)?),
        Command::Evolve { design, tmax, samples } => {
            emit(design.out.as_ref(), &commands::evolve(&design, tmax, samples)?)
        }
        Command::VerifyScheme { source, out } => emit(out.as_ref(), &commands::verify_scheme(&source.load()?)?),
        Command::HeisenbergCheck(args) => emit(args.out.as_ref(), &commands::heisenberg_check(&args)?),
        Command::Catalog { action: CatalogAction::List { jobs, out } } => {
            emit(out.as_ref(), &commands::catalog_list(jobs)?)
        }
        Command::Catalog { action: CatalogAction::Emit { name, out } } => {
            emit(out.as_ref(), &commands::catalog_emit(&name)?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bellnet: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
