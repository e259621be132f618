//! `darbouxlie` command-line front end.
//!
//! Exit status: 0 on success, 1 when a verification fails, 2 on input
//! errors. Arguments are parsed and the algebra resolved before any
//! computation starts.

mod json;
mod source;
mod verbs;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use darbouxlie::exactmath::parse_q;
use darbouxlie::Q;

#[derive(Parser, Debug)]
#[command(
    name = "darbouxlie",
    version,
    about = "Exact r-matrix and coboundary computations on Lie algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub verb: Verb,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Args, Debug)]
pub struct Options {
    /// Catalog id (`s3`, `s3(alpha=1,beta=-1/2)`, `7I`), `all`, or a path to
    /// an algebra file.
    #[arg(long, global = true)]
    pub algebra: Option<String>,
    /// Parameter binding `name=rational`; repeatable.
    #[arg(long = "param", global = true, value_parser = parse_binding)]
    pub params: Vec<(String, Q)>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the number of CPUs for the table,
    /// tree and class verifications and to 1 otherwise.
    #[arg(long, global = true, value_parser = parse_jobs)]
    pub jobs: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Verb {
    /// Check antisymmetry and the Jacobi identity (symbolically in unbound
    /// parameters).
    Validate,
    /// Basis of the derivation algebra.
    Derivations,
    /// Invariant multivectors.
    Invariants {
        /// Only this degree; default 2 and 3.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Algebraic Schouten bracket of two multivectors such as `e12+2*e34`.
    Schouten {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// CYBE and mCYBE polynomial systems, compared with the stated ones.
    Ybe {
        /// Random points for the variety comparison.
        #[arg(long, default_value_t = 1000)]
        points: usize,
    },
    /// Linear one-dimensional Darboux polynomials of the fundamental fields.
    Bricks {
        #[arg(long, default_value_t = 2)]
        degree: usize,
    },
    /// Verify Darboux trees (the shipped ones, or `--tree FILE`).
    DarbouxVerify {
        #[arg(long)]
        tree: Option<PathBuf>,
    },
    /// Dimension of the Aut(g)-orbit through a multivector.
    OrbitDim {
        #[arg(allow_hyphen_values = true)]
        r: String,
    },
    /// Rank of the fundamental vector fields at a point of Λ^m g.
    RankAt {
        /// Comma-separated rational coordinates.
        #[arg(allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 2)]
        degree: usize,
    },
    /// Faithful matrix representation through a one-dimensional extension.
    CenterExt,
    /// Check the orbit tables; documented errata pass unless `--strict`.
    VerifyTables {
        #[arg(long)]
        strict: bool,
    },
    /// Check the coboundary class groupings; contradicted groupings listed
    /// as errata pass unless `--strict`.
    CoboundaryClasses {
        #[arg(long)]
        strict: bool,
    },
}

fn parse_binding(s: &str) -> Result<(String, Q), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=rational, got {s:?}"))?;
    let k = k.trim();
    if k.is_empty() {
        return Err(format!("empty parameter name in {s:?}"));
    }
    let v = parse_q(v).map_err(|e| e.to_string())?;
    Ok((k.to_string(), v))
}

fn parse_jobs(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("expected a positive integer, got {s:?}")),
    }
}

/// Failure modes mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Compute(String),
}

impl From<darbouxlie::Error> for Failure {
    fn from(e: darbouxlie::Error) -> Self {
        use darbouxlie::Error::*;
        match e {
            MissingVariable(_)
            | DimensionMismatch { .. }
            | DimensionTooLarge(_)
            | ParamOutOfRange(_)
            | UnknownAlgebra(_)
            | Parse { .. }
            | GoldenDataMissing(_)
            | Io(_)
            | BranchInvalid { .. } => Failure::Input(e.to_string()),
            NotAnAutomorphism(_) | IncompatibleFields | WitnessMissing(_) => {
                Failure::Compute(e.to_string())
            }
        }
    }
}

/// Rendered result of a verb.
pub struct Report {
    pub text: String,
    pub json: serde_json::Value,
    pub ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let fan_out = matches!(
        cli.verb,
        Verb::VerifyTables { .. } | Verb::DarbouxVerify { .. } | Verb::CoboundaryClasses { .. }
    );
    let jobs = cli.opts.jobs.unwrap_or(if fan_out { 0 } else { 1 });
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(p) => p,
        Err(e) => return fail(2, &format!("cannot start workers: {e}")),
    };
    let result = verbs::prepare(&cli).and_then(|job| pool.install(|| job.run()));
    let report = match result {
        Ok(r) => r,
        Err(Failure::Input(msg)) => return fail(2, &msg),
        Err(Failure::Compute(msg)) => return fail(1, &msg),
    };
    let mut body = match cli.opts.format {
        Format::Text => report.text,
        Format::Json => serde_json::to_string_pretty(&report.json).expect("JSON values serialize"),
    };
    if !body.ends_with('\n') {
        body.push('\n');
    }
    let written = match &cli.opts.out {
        Some(path) => std::fs::write(path, &body).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout()
            .lock()
            .write_all(body.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        return fail(2, &e);
    }
    if report.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn fail(code: u8, msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}
