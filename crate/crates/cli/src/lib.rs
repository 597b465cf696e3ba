//! Command-line front end: reads matrix and evolution files, runs the
//! library, writes JSON reports.
//!
//! Exit codes: 0 success, 1 verification failure, 2 bad input, 3 matrix not
//! unitary, 4 non-generic matrix.

pub mod io;
pub mod report;
pub mod verify;

use std::path::PathBuf;

use bargmann_core::{
    constant_frame_evolution, engineered_swap_evolution, random_frame_evolution,
    random_generic_unitary, Error, PhaseOptions, Quadrature, Tolerances, UnitaryMatrix,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::io::{parse, read_input, EvolutionFile, MatrixFile};
use crate::verify::Suite;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{context}{source}")]
    Core { source: Error, context: String },
}

impl From<Error> for CliError {
    fn from(source: Error) -> Self {
        CliError::Core {
            source,
            context: String::new(),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core {
                source: Error::NotUnitary { .. },
                ..
            } => 3,
            CliError::Core {
                source: Error::NonGenericMatrix { .. },
                ..
            } => 4,
            _ => 2,
        }
    }

    pub(crate) fn context(self, what: &str) -> Self {
        match self {
            CliError::Core { source, context } => CliError::Core {
                source,
                context: format!("{what}: {context}"),
            },
            CliError::Parse(m) => CliError::Parse(format!("{what}: {m}")),
            other => other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuadratureArg {
    Pancharatnam,
    Trapezoid,
}

#[derive(Debug, Parser)]
#[command(name = "bargmann", version, about = "Canonical U(n) factorization, Bargmann invariants and (off-diagonal) geometric phases")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Threshold below which overlaps count as zero.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol_generic: f64,
    /// Accepted deviation max |M^H M - I|.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol_unitary: f64,
    #[arg(long, global = true, value_enum, default_value_t = QuadratureArg::Pancharatnam)]
    pub quadrature: QuadratureArg,
}

impl GlobalArgs {
    pub fn options(&self) -> Result<PhaseOptions, CliError> {
        let d = Tolerances::default();
        let tol = Tolerances::new(d.norm, self.tol_unitary, self.tol_generic, d.phase)?;
        let quadrature = match self.quadrature {
            QuadratureArg::Pancharatnam => Quadrature::Pancharatnam,
            QuadratureArg::Trapezoid => Quadrature::Trapezoid,
        };
        Ok(PhaseOptions { quadrature, tol })
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Canonical tower, invariants and the primitive Δ grid of a unitary.
    Decompose {
        /// Matrix file, or `-` for standard input.
        input: PathBuf,
    },
    /// Total, dynamical and geometric phase of every level.
    Phases {
        /// Evolution file, or `-` for standard input.
        input: PathBuf,
    },
    /// Off-diagonal phases γ; pairs are shown when no table is selected.
    Offdiag {
        input: PathBuf,
        #[arg(long)]
        pairs: bool,
        #[arg(long)]
        triples: bool,
        /// Compare every γ with its rebuild from Bargmann invariants.
        #[arg(long)]
        verify_identity: bool,
    },
    /// Seeded property checks; exit 1 if any fails.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Writes seeded input files.
    Generate {
        #[command(subcommand)]
        what: Generate,
    },
}

#[derive(Debug, Subcommand)]
pub enum Generate {
    /// Random generic unitary as a matrix file.
    Unitary {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Frame evolution as an evolution file.
    Evolution {
        #[arg(long, value_enum)]
        kind: EvolutionKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Levels rotated into each other by `swap` (0-based).
        #[arg(long, num_args = 2, default_values_t = [0, 1])]
        levels: Vec<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvolutionKind {
    Random,
    Swap,
    Constant,
}

/// A finished command: the document to print and the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub document: String,
    pub code: i32,
}

fn render<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("reports serialize");
    s.push('\n');
    s
}

fn ok<T: Serialize>(doc: &T) -> Outcome {
    Outcome {
        document: render(doc),
        code: 0,
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let opts = cli.global.options()?;
    let tol = &opts.tol;
    match &cli.command {
        Command::Decompose { input } => {
            let m: MatrixFile = parse(&read_input(input)?)?;
            Ok(ok(&report::decompose_report(&m.to_unitary(tol)?, tol)?))
        }
        Command::Phases { input } => {
            let e: EvolutionFile = parse(&read_input(input)?)?;
            Ok(ok(&report::phases_report(&e.to_evolution(tol)?, &opts)))
        }
        Command::Offdiag {
            input,
            pairs,
            triples,
            verify_identity,
        } => {
            let e: EvolutionFile = parse(&read_input(input)?)?;
            let f = e.to_evolution(tol)?;
            let show_pairs = *pairs || !*triples;
            Ok(ok(&report::offdiag_report(&f, &opts, show_pairs, *triples, *verify_identity)?))
        }
        Command::Verify { suite, n, trials, seed } => {
            let r = verify::run_suite(*suite, *n, *trials, *seed, &opts)?;
            Ok(Outcome {
                document: render(&r),
                code: if r.passed { 0 } else { 1 },
            })
        }
        Command::Generate { what } => generate(what),
    }
}

fn generate(what: &Generate) -> Result<Outcome, CliError> {
    match *what {
        Generate::Unitary { n, seed } => {
            if n == 0 {
                return Err(CliError::Parse("--n must be positive".into()));
            }
            Ok(ok(&MatrixFile::from_unitary(&random_generic_unitary(n, seed))))
        }
        Generate::Evolution {
            kind,
            n,
            points,
            seed,
            ref levels,
        } => {
            if n == 0 {
                return Err(CliError::Parse("--n must be positive".into()));
            }
            let f = match kind {
                EvolutionKind::Random => random_frame_evolution(n, points, seed)?,
                EvolutionKind::Swap => engineered_swap_evolution(n, levels[0], levels[1], points)?,
                EvolutionKind::Constant => constant_frame_evolution(&UnitaryMatrix::identity(n), points)?,
            };
            Ok(ok(&EvolutionFile::from_evolution(&f)))
        }
    }
}
