mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cremona_core::plane_map::DEFAULT_DEGREE_CAP;
use cremona_core::Error;

#[derive(Parser, Debug)]
#[command(name = "cremona", version, about = "Base points, transport and base-point dynamics of plane birational maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Seed for random automorphisms and randomized checks.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    /// Number of iterates to examine.
    #[arg(long, global = true)]
    pub horizon: Option<usize>,

    /// Largest degree allowed for composed maps.
    #[arg(long = "degree-cap", global = true, default_value_t = DEFAULT_DEGREE_CAP)]
    pub degree_cap: u64,

    /// Exponent n of chi_np and shear-x.
    #[arg(long, global = true, default_value_t = 2)]
    pub n: u32,

    /// Exponent p of chi_np and shear-y.
    #[arg(long, global = true, default_value_t = 3)]
    pub p: u32,

    /// A registered name (psi, sigma, chi, chi_np, shear-x, shear-y, random, identity,
    /// random:<seed>) or a literal "(F : G : H)". Repeatable.
    #[arg(long = "map", global = true, allow_hyphen_values = true)]
    pub maps: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Operations on a single map or a composite.
    Map {
        #[command(subcommand)]
        action: MapAction,
    },
    /// Tree of base points with multiplicities and proximities.
    Basepoints,
    /// Lower bound for the dynamical number of base points, with a verdict.
    Mu,
    /// Degree and base-point sequences of the iterates.
    Degrees,
    /// Runs the full list of checks on the worked examples.
    VerifyPaper,
}

#[derive(Subcommand, Debug)]
pub enum MapAction {
    Show,
    /// Composite of the given maps, the first one applied last.
    Compose,
    Inverse,
    Eval {
        /// Point as "a:b:c" with rational entries.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    Jacobian,
    /// Curves contracted to points.
    Contracted,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
    Dot,
}

/// Exit statuses.
pub mod status {
    pub const OK: u8 = 0;
    pub const USAGE: u8 = 1;
    pub const INCONCLUSIVE: u8 = 2;
    pub const INCONSISTENT: u8 = 3;
    pub const VERIFY_FAILED: u8 = 4;
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => status::USAGE,
            Failure::Core(e) => match e {
                Error::Syntax { .. }
                | Error::Inhomogeneous { .. }
                | Error::MismatchedDegrees { .. }
                | Error::ZeroMap
                | Error::ZeroJacobian
                | Error::NotBirational { .. }
                | Error::IsBasePoint { .. }
                | Error::IndeterminatePoint { .. }
                | Error::SingularMatrix
                | Error::DivisionByZero
                | Error::Invalid(_) => status::USAGE,
                Error::DegreeCapExceeded { .. }
                | Error::IrrationalBaseLocus { .. }
                | Error::FactorizationIncomplete { .. } => status::INCONCLUSIVE,
                _ => status::INCONSISTENT,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { status::USAGE } else { status::OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
