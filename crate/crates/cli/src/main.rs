use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use matpoly::leaves::DEFAULT_POLE_SEPARATION;
use matpoly::spectral::Tolerances;
use matpoly::verify::DEFAULT_SEED;
use matpoly_cli::commands::{self, FlowArgs, SwapArgs};
use matpoly_cli::document::{parse_document, parse_input};
use matpoly_cli::{CliError, MatPolyDocument};
use serde_json::Value;

/// Smith forms, symplectic leaves, Poisson brackets and spectral
/// factorizations of monic matrix polynomials.
#[derive(Parser)]
#[command(name = "matpoly", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Seed for randomized verification.
    #[arg(long, global = true, env = "MATPOLY_SEED")]
    seed: Option<u64>,

    /// Minimum eigenvalue separation for a generic spectrum.
    #[arg(long, global = true, default_value_t = 1e-8)]
    eps_sep: f64,

    /// Largest accepted eigenvector-matrix condition number.
    #[arg(long, global = true, default_value_t = 1e8)]
    kappa_max: f64,

    /// Relative threshold for a degenerate swap inner product.
    #[arg(long, global = true, default_value_t = 1e-10)]
    eps_ip: f64,

    /// Relative right-division remainder bound.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_div: f64,

    /// Relative eigenvector residual bound.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_eig: f64,
}

impl Global {
    fn tolerances(&self) -> Tolerances {
        Tolerances {
            eps_sep: self.eps_sep,
            kappa_max: self.kappa_max,
            eps_ip: self.eps_ip,
            tol_div: self.tol_div,
            tol_eig: self.tol_eig,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Smith normal form over Q[z].
    Snf { input: PathBuf },
    /// Leaf type, dimension and invariant polynomials.
    Classify { input: PathBuf },
    /// Closure order between the leaves of two documents.
    Closure {
        input: PathBuf,
        /// Document whose leaf is tested for membership in the closure.
        #[arg(long)]
        other: PathBuf,
    },
    /// Monopole (Drinfeld) coordinates.
    Drinfeld {
        input: PathBuf,
        /// Minimum pole separation on the numeric path.
        #[arg(long, default_value_t = DEFAULT_POLE_SEPARATION)]
        min_separation: f64,
    },
    /// Factorization into linear factors along an ordered partition.
    Factor {
        input: PathBuf,
        /// JSON array of blocks of eigenvalues; defaults to the sorted spectrum.
        #[arg(long)]
        partition: Option<String>,
    },
    /// Exchange one eigenvalue between two adjacent factors.
    Swap {
        input: PathBuf,
        #[arg(long)]
        partition: Option<String>,
        /// 1-based position of the left factor.
        #[arg(long, default_value_t = 1)]
        position: usize,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
    },
    /// Move a factorization through a sequence of charts.
    Orbit {
        input: PathBuf,
        #[arg(long)]
        partition: Option<String>,
        /// JSON array of target partitions.
        #[arg(long)]
        sequence: String,
    },
    /// Poisson brackets of coefficient coordinates.
    Bracket {
        input: PathBuf,
        /// `i,j,r;k,l,s` (1-based); the full table when omitted.
        #[arg(long)]
        indices: Option<String>,
    },
    /// Integrate a Hamiltonian (dressing) flow with RK4.
    Flow {
        input: PathBuf,
        /// JSON array of matrices A_0, A_1, ..., inline or a file path.
        #[arg(long)]
        hamiltonian: String,
        #[arg(long, default_value_t = 1.0)]
        time: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        /// Abort when one step increases the drift by more than this.
        #[arg(long)]
        max_step_drift: Option<f64>,
        /// Also estimate the convergence order from steps h and h/2.
        #[arg(long)]
        estimate_order: bool,
    },
    /// Run the randomized property suites.
    Verify {
        /// Optional document checked alongside the random cases.
        input: Option<PathBuf>,
        #[arg(long, default_value = "all")]
        suite: String,
        /// Cases per suite; each suite has its own default.
        #[arg(long)]
        cases: Option<usize>,
    },
}

fn read_input(path: &Path) -> Result<String, CliError> {
    let location = Some(path.display().to_string());
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::input("io", e.to_string(), location))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::input("io", e.to_string(), location))
}

fn document(path: &Path) -> Result<MatPolyDocument, CliError> {
    parse_document(&read_input(path)?)
}

/// Returns the stdout object and whether the run counts as a success.
fn run(cli: Cli) -> Result<(Value, bool), CliError> {
    let tol = cli.global.tolerances();
    let ok = |v: Value| Ok((v, true));
    match cli.command {
        Command::Snf { input } => ok(commands::snf(&document(&input)?)?),
        Command::Classify { input } => ok(commands::classify(&document(&input)?)?),
        Command::Closure { input, other } => ok(commands::closure(&document(&input)?, &document(&other)?)?),
        Command::Drinfeld { input, min_separation } => ok(commands::drinfeld(&document(&input)?, min_separation)?),
        Command::Factor { input, partition } => ok(commands::factor(&document(&input)?, partition.as_deref(), &tol)?),
        Command::Swap {
            input,
            partition,
            position,
            lambda,
            mu,
        } => {
            let args = SwapArgs {
                partition: partition.as_deref(),
                position,
                lambda: lambda.as_deref(),
                mu: mu.as_deref(),
            };
            ok(commands::swap(&parse_input(&read_input(&input)?)?, &args, &tol)?)
        }
        Command::Orbit {
            input,
            partition,
            sequence,
        } => ok(commands::orbit(
            &parse_input(&read_input(&input)?)?,
            partition.as_deref(),
            &sequence,
            &tol,
        )?),
        Command::Bracket { input, indices } => ok(commands::bracket(&document(&input)?, indices.as_deref())?),
        Command::Flow {
            input,
            hamiltonian,
            time,
            step,
            max_step_drift,
            estimate_order,
        } => {
            let args = FlowArgs {
                hamiltonian: &hamiltonian,
                time,
                step,
                max_step_drift,
                estimate_order,
            };
            ok(commands::flow(&document(&input)?, &args, &tol)?)
        }
        Command::Verify { input, suite, cases } => {
            let suites = commands::parse_suite(&suite)?;
            let doc = input.as_deref().map(document).transpose()?;
            let seed = cli.global.seed.unwrap_or(DEFAULT_SEED);
            commands::verify(&suites, seed, cases, doc.as_ref(), &tol)
        }
    }
}

fn emit(v: &Value) {
    // a closed pipe is not an error of the command
    let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(v).expect("values serialize"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::usage(e.to_string().trim().to_string());
            eprintln!("matpoly: {}", err.message);
            emit(&err.envelope());
            return ExitCode::from(err.exit_code as u8);
        }
    };
    match run(cli) {
        Ok((out, passed)) => {
            emit(&out);
            if passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("matpoly: verification failed");
                ExitCode::from(matpoly_cli::error::EXIT_DOMAIN as u8)
            }
        }
        Err(err) => {
            eprintln!("matpoly: {}: {}", err.kind, err.message);
            emit(&err.envelope());
            ExitCode::from(err.exit_code as u8)
        }
    }
}
