//! Command-line front end over the geometry crates.
//!
//! [`run_from_args`] performs a whole invocation without touching the
//! process, so the binary and the tests share one code path.

pub mod commands;
pub mod error;
pub mod input;
pub mod report;
pub mod selftest;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use norden_core::Tolerance;
use norden_sampler::{ClassTarget, Parity, SampleSpec};
use serde_json::json;

use crate::commands::Which;
use crate::error::{exit, CliError};
use crate::input::{parse_document, InputDocument};
use crate::report::Report;
use crate::selftest::{Case, Fault, SelftestConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "norden", version, about = "Norden and almost contact B-metric structures on a tangent space")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Relative tolerance for identities and class membership.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check structure axioms, admissibility of F and, for Lie models, the bracket.
    Validate {
        /// Input document; `-` reads standard input.
        #[arg(long)]
        input: PathBuf,
    },
    /// Class of F, with every characterisation cross-checked.
    Classify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Natural connections, their torsion and the relations between them.
    Connections {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        which: Which,
    },
    /// Basic-class components of F and torsion-class components of T.
    Decompose {
        #[arg(long)]
        input: PathBuf,
    },
    /// Constant conformal change of a Lie model.
    Transform {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        u: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        v: f64,
        /// Odd case only.
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        w: f64,
    },
    /// Seeded input documents with F in a prescribed class.
    Sample {
        #[arg(long)]
        parity: Parity,
        #[arg(long)]
        n: usize,
        /// Class expression such as `W1+W3`, `F3⊕F7` or `U0`; defaults to all classes.
        #[arg(long)]
        target: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        /// Emit Lie models instead of point documents.
        #[arg(long)]
        lie: bool,
    },
    /// Deterministic battery of identities over sampled data.
    Selftest {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Restricts the run to one parity; both by default.
        #[arg(long)]
        parity: Option<Parity>,
        /// Restricts the run to one n; 2 and 3 by default.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<Fault>,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn read_document(path: &PathBuf) -> Result<InputDocument, CliError> {
    let text =
        if path.as_os_str() == "-" { std::io::read_to_string(std::io::stdin()) } else { std::fs::read_to_string(path) }
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    parse_document(&text)
}

fn all_classes(parity: Parity) -> ClassTarget {
    match parity {
        Parity::Even => ClassTarget::Even(norden_even::EvenClass::ALL.into_iter().collect()),
        Parity::Odd => ClassTarget::Odd(norden_odd::OddClass::ALL.into_iter().collect()),
    }
}

enum Output {
    Report(Report),
    Json(serde_json::Value),
}

fn execute(cli: &Cli) -> Result<Output, CliError> {
    if !(cli.tolerance.is_finite() && cli.tolerance > 0.0) {
        return Err(CliError::Parse(format!("tolerance must be positive, got {}", cli.tolerance)));
    }
    let tol = Tolerance::new(cli.tolerance);
    Ok(match &cli.command {
        Command::Validate { input } => Output::Report(commands::validate(&read_document(input)?, &tol)?),
        Command::Classify { input } => Output::Report(commands::classify(&read_document(input)?, &tol)?),
        Command::Connections { input, which } => {
            Output::Report(commands::connections(&read_document(input)?, *which, &tol)?)
        }
        Command::Decompose { input } => Output::Report(commands::decompose(&read_document(input)?, &tol)?),
        Command::Transform { input, u, v, w } => {
            Output::Report(commands::transform(&read_document(input)?, *u, *v, *w, &tol)?)
        }
        Command::Sample { parity, n, target, seed, samples, lie } => {
            let target = match target {
                Some(t) => t.parse::<ClassTarget>()?,
                None => all_classes(*parity),
            };
            let spec = SampleSpec::new(*parity, *n, target, *seed, *samples)?;
            let docs = commands::sample(&spec, *lie, &tol)?;
            let docs: Vec<_> =
                docs.into_iter().map(|d| serde_json::to_value(d).expect("documents serialize")).collect();
            Output::Json(if docs.len() == 1 { docs[0].clone() } else { serde_json::Value::Array(docs) })
        }
        Command::Selftest { samples, seed, parity, n, inject_fault } => {
            if *n == Some(0) {
                return Err(CliError::Parse("n must be at least 1".into()));
            }
            let cases = Case::grid(parity.as_slice(), n.as_slice());
            let cfg = SelftestConfig { cases, samples: *samples, seed: *seed, tol, fault: *inject_fault };
            Output::Report(selftest::selftest(&cfg)?)
        }
    })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::INPUT } else { exit::PASS };
            let text = e.render().to_string();
            return if code == exit::PASS {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok(Output::Report(r)) => {
            let code = if r.passed() { exit::PASS } else { exit::INVARIANT_FAILURE };
            let stdout = match cli.format {
                Format::Json => r.to_json(),
                Format::Text => r.to_text(),
            };
            Outcome { code, stdout, stderr: String::new() }
        }
        Ok(Output::Json(v)) => {
            let mut stdout = serde_json::to_string_pretty(&v).expect("values serialize");
            stdout.push('\n');
            Outcome { code: exit::PASS, stdout, stderr: String::new() }
        }
        Err(e) => {
            let code = e.exit_code();
            let stdout = match cli.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&json!({ "error": e.to_string(), "exit_code": code }))
                        .expect("values serialize");
                    s.push('\n');
                    s
                }
                Format::Text => String::new(),
            };
            Outcome { code, stdout, stderr: format!("error: {e}\n") }
        }
    }
}
