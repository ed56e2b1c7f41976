mod commands;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use prodiff::freealg::PivotRule;
use prodiff::{Coefficient, Error};

/// Exact computations with formal diffeomorphisms of the line, their vector
/// fields and weighted norms.
#[derive(Parser, Debug)]
#[command(name = "prodiff", version)]
pub struct Cli {
    /// Truncation order for generated instances and reports.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
    pub order: u64,

    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Simplex pivot rule for quotient-norm programs.
    #[arg(long, global = true, value_enum, default_value_t = Pivot::Bland)]
    pub lp_pivot: Pivot,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Pivot {
    Bland,
    Dantzig,
}

impl From<Pivot> for PivotRule {
    fn from(p: Pivot) -> Self {
        match p {
            Pivot::Bland => PivotRule::Bland,
            Pivot::Dantzig => PivotRule::Dantzig,
        }
    }
}

pub fn rational_arg(s: &str) -> Result<Coefficient, String> {
    prodiff::rational::parse(s).map_err(|e| e.to_string())
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// gamma1 o gamma2, truncated to the smaller order.
    Compose {
        /// Diffeomorphism JSON, inline or a file path.
        first: String,
        second: String,
    },
    /// Compositional inverse.
    Invert {
        input: String,
        #[arg(long, value_enum, default_value_t = InvertMethod::Lagrange)]
        method: InvertMethod,
    },
    /// Time-one flow of a vector field.
    Exp {
        input: String,
        #[arg(long, value_enum, default_value_t = ExpMethod::Matrix)]
        method: ExpMethod,
    },
    /// Vector field whose flow is the given diffeomorphism.
    Log { input: String },
    /// log(exp(A) o exp(B)).
    Bch { first: String, second: String },
    /// Weighted norms of a diffeomorphism or field.
    Norm(NormArgs),
    /// Quotient norms on the enveloping algebra.
    Qnorm(QnormArgs),
    /// Run a seeded invariant suite: group, operators, norms, freealg or all.
    Verify {
        suite: String,
        /// Append a check that always fails.
        #[arg(long, hide = true)]
        force_fail: bool,
    },
    /// Diagnostic tables.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum InvertMethod {
    Lagrange,
    Recursive,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ExpMethod {
    Matrix,
    Flow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Space {
    /// sum |a_j| sigma^{j-1} / j! of a diffeomorphism.
    W,
    /// sum |u_m| t^m / m! of the series itself.
    Vt,
    /// Truncated operator norm on V_t.
    Op,
}

#[derive(Args, Debug)]
pub struct NormArgs {
    pub input: String,
    #[arg(long, value_enum)]
    pub space: Space,
    #[arg(long, value_parser = rational_arg)]
    pub sigma: Option<Coefficient>,
    #[arg(long, value_parser = rational_arg)]
    pub t: Option<Coefficient>,
    /// Largest column for operator norms.
    #[arg(long)]
    pub columns: Option<usize>,
    /// Include the operator matrix in the output.
    #[arg(long)]
    pub dump_matrix: bool,
    /// Treat the input as a polynomial: every omitted coefficient is zero.
    #[arg(long)]
    pub polynomial: bool,
}

#[derive(Args, Debug)]
pub struct QnormArgs {
    /// Enveloping-algebra element or field JSON; omitted with --table.
    pub input: Option<String>,
    #[arg(long, value_parser = rational_arg)]
    pub t: Option<Coefficient>,
    /// Also evaluate the upper estimate (field-shaped input only).
    #[arg(long)]
    pub upper: bool,
    /// Also compute the V_t lower certificate.
    #[arg(long)]
    pub lower: bool,
    #[arg(long, value_parser = rational_arg)]
    pub vt: Option<Coefficient>,
    #[arg(long, default_value_t = 24)]
    pub columns: usize,
    /// Tabulate a family instead of a single element; only `Ln` is known.
    #[arg(long)]
    pub table: Option<String>,
    #[arg(long, default_value_t = 8)]
    pub nmax: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ReportKind {
    Qtable,
    Membership,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    #[arg(value_enum)]
    pub kind: ReportKind,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, default_value_t = 8)]
    pub nmax: usize,
    #[arg(long, value_parser = rational_arg)]
    pub t: Option<Coefficient>,
    /// Coefficient rule: geometric, factorial, subfactorial or list.
    #[arg(long, default_value = "geometric")]
    pub rule: String,
    #[arg(long, value_parser = rational_arg)]
    pub r: Option<Coefficient>,
    /// Comma-separated a_2, a_3, ... for the list rule.
    #[arg(long)]
    pub list: Option<String>,
    /// Columns for the lower certificate in the qtable.
    #[arg(long, default_value_t = 24)]
    pub columns: usize,
}

/// Result of a command: text to emit and the exit code to return.
pub struct Outcome {
    pub text: String,
    pub code: u8,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Unknown { .. } => 2,
        Error::InvariantViolation(_) => 4,
        _ => 3,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("PRODIFF_LOG", "warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    log::debug!("{cli:?}");
    match commands::dispatch(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(&cli, &outcome.text) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}
