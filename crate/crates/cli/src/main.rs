mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cliffhopf::hopfalg::{CoproductMode, ProductMode};
use cliffhopf::relcheck::DeformMode;

#[derive(Debug, Parser)]
#[command(
    name = "cliffhopf",
    version,
    about = "Clifford and Hopf algebra relation checker"
)]
pub struct Cli {
    /// Emit JSON (errors become single-line JSON on stderr).
    #[arg(long, global = true)]
    json: bool,
    /// Equality tolerance; overrides CLIFFHOPF_TOL and the config file.
    #[arg(long, global = true, value_name = "TOL")]
    tol: Option<f64>,
    /// Config file; defaults to ./cliffhopf.toml when present.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one expression.
    Eval(EvalArgs),
    /// Run a built-in or JSON suite; exit 1 if a must-pass row fails.
    Verify(VerifyArgs),
    /// Hopf axiom residuals of the Grassmann structure.
    HopfCheck {
        #[arg(long, value_name = "SIG")]
        sig: Option<String>,
    },
    /// Conformal maps acting on paravector points.
    #[command(subcommand)]
    Conformal(ConformalCommand),
    /// Fit a deformation A to a suite.
    Fit(FitArgs),
    /// Write a built-in suite as JSON.
    ExportSuite {
        name: String,
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
        #[arg(long)]
        kappa: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Product,
    Generators,
    Both,
}

impl From<ModeArg> for DeformMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Product => DeformMode::Product,
            ModeArg::Generators => DeformMode::Generators,
            ModeArg::Both => DeformMode::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CoproductArg {
    Grassmann,
    CliffordFormal,
}

impl From<CoproductArg> for CoproductMode {
    fn from(m: CoproductArg) -> Self {
        match m {
            CoproductArg::Grassmann => CoproductMode::Grassmann,
            CoproductArg::CliffordFormal => CoproductMode::CliffordFormal,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TensorArg {
    Graded,
    Ungraded,
}

impl From<TensorArg> for ProductMode {
    fn from(m: TensorArg) -> Self {
        match m {
            TensorArg::Graded => ProductMode::Graded,
            TensorArg::Ungraded => ProductMode::Ungraded,
        }
    }
}

/// Settings shared by every command that evaluates expressions.
#[derive(Debug, Args)]
struct EvalOpts {
    #[arg(long)]
    kappa: Option<f64>,
    /// JSON file with the antisymmetric matrix A.
    #[arg(long, value_name = "FILE")]
    deform: Option<PathBuf>,
    /// Where the deformation enters.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, value_enum)]
    coproduct: Option<CoproductArg>,
    /// Sign rule for products of tensors.
    #[arg(long, value_enum)]
    tensor: Option<TensorArg>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(short = 'e', long = "expr", allow_hyphen_values = true)]
    expr: String,
    /// Signature preset (cl13, cl30, cl41, cl24) or diagonal such as "1,-1".
    #[arg(long)]
    sig: Option<String>,
    /// Generator set: conformal, kappa, ringK or bicross.
    #[arg(long)]
    basis: Option<String>,
    #[command(flatten)]
    opts: EvalOpts,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Built-in suite name or path to a suite JSON file.
    suite: String,
    #[command(flatten)]
    opts: EvalOpts,
    /// Timestamp recorded in the report; omitted by default.
    #[arg(long)]
    timestamp: Option<String>,
}

#[derive(Debug, Subcommand)]
enum ConformalCommand {
    /// Print x' and the factor Δ.
    Apply(MapArgs),
    /// Finite-difference conformal factor λ and its residual.
    Conformality {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = cliffhopf::conformal::DEFAULT_FD_STEP)]
        step: f64,
    },
}

#[derive(Debug, Args)]
struct MapArgs {
    /// Map as inline JSON (e.g. '{"kind":"dilation","rho":4}') or a file.
    #[arg(long)]
    map: String,
    /// Point "x0,x1,x2,x3".
    #[arg(short = 'x', allow_hyphen_values = true)]
    x: String,
}

#[derive(Debug, Args)]
struct FitArgs {
    suite: String,
    /// default, default-kappa or real.
    #[arg(long, default_value = "default")]
    family: String,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

fn main() -> ExitCode {
    let wants_json = std::env::args().any(|a| a == "--json");
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            if wants_json {
                let text = e.to_string();
                let msg = text
                    .lines()
                    .next()
                    .unwrap_or_default()
                    .trim_start_matches("error: ");
                eprintln!("{}", commands::error_json("Usage", msg));
            } else {
                let _ = e.print();
            }
            return ExitCode::from(2);
        }
    };
    commands::run(cli)
}
