#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use vacuum_core::summation::SeriesControl;
use vacuum_core::{BoundaryCondition, Geometry, VacuumError};

mod commands;
mod output;

use output::{Format, Table};

/// Vacuum energies, spectral densities and cylinder kernels for
/// one-dimensional intervals, the half-line and twisted circles.
#[derive(Parser, Debug)]
#[command(name = "vacuum", version = env!("VACUUM_BUILD"), about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    opts: Opts,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Opts {
    #[arg(long, value_enum, default_value_t = GeometryKind::Interval, global = true)]
    geometry: GeometryKind,
    #[arg(long, default_value_t = 1.0, global = true)]
    length: f64,
    /// Boundary condition at the left end (or at the origin of the half-line).
    #[arg(long, default_value = "D", global = true)]
    bc_left: BoundaryCondition,
    #[arg(long, default_value = "D", global = true)]
    bc_right: BoundaryCondition,
    /// Twist angle(s) for the circle; comma separated.
    #[arg(long, value_delimiter = ',', global = true)]
    theta: Vec<f64>,
    /// Regulator / kernel time(s); comma separated.
    #[arg(long, value_delimiter = ',', global = true)]
    t: Vec<f64>,
    /// Position(s); comma separated.
    #[arg(long, value_delimiter = ',', global = true)]
    x: Vec<f64>,
    #[arg(long, default_value_t = 10.0, global = true)]
    omega_max: f64,
    /// Conformal coupling in [0, 1/4].
    #[arg(long, default_value_t = 0.25, global = true)]
    xi: f64,
    /// Points in generated grids.
    #[arg(long, global = true)]
    grid_points: Option<usize>,
    /// Series tolerance; for `verify`, replaces every check tolerance.
    #[arg(long, env = "VACUUM_TOL", global = true)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 10_000, global = true)]
    max_terms: usize,
    /// Output format (default csv; json for verify).
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeometryKind {
    Interval,
    Halfline,
    Twisted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig1,
    Fig2,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eigenvalues, multiplicities and the counting function.
    Spectrum,
    /// Renormalized and regularized total energies.
    Energy,
    /// Energy density over positions.
    Density,
    /// Diagonal cylinder kernel by all three routes.
    Kernel,
    /// Data behind the two energy-density figures.
    Figure {
        #[arg(value_enum)]
        which: Figure,
    },
    /// Runs every self-check; exits 1 if any fails.
    Verify,
    /// Exact vs stationary-phase vs short-orbit energies.
    Compare,
}

/// Errors with a fixed exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameter values (exit 2).
    Config(String),
    /// The geometry or point is outside what the operation supports (exit 3).
    Domain(String),
    /// Some checks failed (exit 1); the report is still written.
    Verification(usize),
    Io(io::Error),
}

impl From<VacuumError> for CliError {
    fn from(e: VacuumError) -> Self {
        match e {
            VacuumError::ContinuousSpectrum(_)
            | VacuumError::OutOfDomain { .. }
            | VacuumError::AtEigenvalue { .. }
            | VacuumError::UnsupportedGeometry(_) => CliError::Domain(e.to_string()),
            VacuumError::InvalidParameter(_) => CliError::Config(e.to_string()),
            VacuumError::IllConditionedFit { .. } | VacuumError::NonConvergent { .. } => {
                CliError::Domain(e.to_string())
            }
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl Opts {
    pub fn geometry(&self) -> Result<Geometry, CliError> {
        Ok(match self.geometry {
            GeometryKind::Interval => Geometry::interval(self.length, self.bc_left, self.bc_right)?,
            GeometryKind::Halfline => Geometry::half_line(self.bc_left),
            GeometryKind::Twisted => Geometry::twisted_circle(self.length, self.single_theta()?)?,
        })
    }

    pub fn single_theta(&self) -> Result<f64, CliError> {
        match self.theta.as_slice() {
            [] => Ok(0.0),
            [th] => Ok(*th),
            _ => Err(CliError::Config("this command takes a single --theta".into())),
        }
    }

    pub fn control(&self) -> Result<SeriesControl, CliError> {
        let tol = self.tol.unwrap_or(SeriesControl::default().tol);
        Ok(SeriesControl::new(self.max_terms, tol, 0.0)?)
    }

    pub fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    pub fn grid_points(&self, default: usize) -> Result<usize, CliError> {
        match self.grid_points {
            Some(n) if n < 2 => Err(CliError::Config("--grid-points must be at least 2".into())),
            Some(n) => Ok(n),
            None => Ok(default),
        }
    }
}

fn emit(table: &Table, format: Format, path: Option<&PathBuf>) -> io::Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            table.write(format, &mut w)?;
            w.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            table.write(format, &mut lock)
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let o = &cli.opts;
    let (table, format, failures) = match &cli.command {
        Command::Spectrum => (commands::spectrum(o)?, o.format(Format::Csv), 0),
        Command::Energy => (commands::energy(o)?, o.format(Format::Csv), 0),
        Command::Density => (commands::density(o)?, o.format(Format::Csv), 0),
        Command::Kernel => (commands::kernel(o)?, o.format(Format::Csv), 0),
        Command::Figure { which } => (commands::figure(*which, o)?, o.format(Format::Csv), 0),
        Command::Compare => (commands::compare(o)?, o.format(Format::Csv), 0),
        Command::Verify => {
            let (t, failed) = commands::verify(o)?;
            (t, o.format(Format::Json), failed)
        }
    };
    emit(&table, format, o.output.as_ref())?;
    if failures > 0 {
        return Err(CliError::Verification(failures));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Verification(n)) => {
            eprintln!("vacuum: {n} check(s) failed");
            ExitCode::from(1)
        }
        Err(CliError::Config(msg)) => {
            eprintln!("vacuum: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("vacuum: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::Io(e)) => {
            eprintln!("vacuum: {e}");
            ExitCode::from(2)
        }
    }
}
