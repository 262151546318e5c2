//! Command-line surface for `tensorlcp`.
//!
//! Every subcommand prints one JSON report on standard output. Exit status is
//! 0 on success (including infeasible or not-applicable outcomes, which are
//! reported in the body), 1 on a domain error and 2 on malformed input or
//! usage.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use tensorlcp::io::{self, InputDigest, ReportFile};
use tensorlcp::solver::{enumerate_solution_set, lemke_solve};
use tensorlcp::{
    check_convexity, classify, construct_nonconvex_witness, theorem_harness, DenseTensor, Error, HarnessParams,
    TlcpInstance,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "tensorlcp", version, about = "Linear complementarity problems over tensor spaces")]
struct Cli {
    /// Include elapsed wall time in the report (makes output run-dependent).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Lemke,
    Enumerate,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide every structured-tensor class for M.
    Classify { m: PathBuf },
    /// Find one solution of TLCP(M, Q).
    Solve {
        m: PathBuf,
        q: PathBuf,
        #[arg(long, value_enum, default_value = "lemke")]
        method: Method,
    },
    /// List the full solution set of TLCP(M, Q).
    Enumerate { m: PathBuf, q: PathBuf },
    /// Decide whether the solution set of TLCP(M, Q) is convex.
    Convexity { m: PathBuf, q: PathBuf },
    /// Build Q with a non-convex solution set from a non-sufficient M.
    Witness { m: PathBuf },
    /// Print MZ.
    Contract { m: PathBuf, z: PathBuf },
    /// Print the matrix of Z -> MZ.
    Flatten { m: PathBuf },
    /// Check the class theorems on seeded random tensors.
    Harness {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// Order of Z; tensors have order 2m.
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = -3, allow_hyphen_values = true)]
        low: i64,
        #[arg(long, default_value_t = 3, allow_hyphen_values = true)]
        high: i64,
        #[arg(long, default_value_t = 5)]
        q_per_tensor: usize,
    },
}

/// Failure of a command, already classified by exit status.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_input_error() { EXIT_INPUT } else { EXIT_DOMAIN };
        Failure { code, message: e.to_string() }
    }
}

struct Inputs(Vec<InputDigest>);

impl Inputs {
    fn tensor(&mut self, path: &Path) -> Result<DenseTensor, Failure> {
        let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.0.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        let text = String::from_utf8(bytes).map_err(|e| Error::Parse {
            context: path.display().to_string(),
            message: e.to_string(),
        })?;
        Ok(io::parse_tensor_str(&text).map_err(|e| match e {
            Error::Parse { context, message } => Error::Parse { context: format!("{}: {context}", path.display()), message },
            other => other,
        })?)
    }

    fn instance(&mut self, m: &Path, q: &Path) -> Result<TlcpInstance, Failure> {
        let m = self.tensor(m)?;
        let q = self.tensor(q)?;
        Ok(TlcpInstance::new(m, q)?)
    }
}

/// Result body and exit status of one command.
fn execute(command: &Command, inputs: &mut Inputs) -> Result<(Value, i32), Failure> {
    let body = match command {
        Command::Classify { m } => io::classification_value(&classify(&inputs.tensor(m)?)?),
        Command::Solve { m, q, method } => {
            let inst = inputs.instance(m, q)?;
            match method {
                Method::Lemke => {
                    let mut v = io::lemke_value(&lemke_solve(&inst)?);
                    v["method"] = json!("lemke");
                    v
                }
                Method::Enumerate => {
                    let set = enumerate_solution_set(&inst)?;
                    match set.vertices().first() {
                        Some(z) => json!({
                            "method": "enumerate",
                            "status": "Solution",
                            "solution": {"Z": io::tensor_value(z), "W": io::tensor_value(&inst.residual(z)?)},
                        }),
                        None => json!({"method": "enumerate", "status": "NoSolution"}),
                    }
                }
            }
        }
        Command::Enumerate { m, q } => io::solution_set_value(&enumerate_solution_set(&inputs.instance(m, q)?)?),
        Command::Convexity { m, q } => io::convexity_value(&check_convexity(&inputs.instance(m, q)?)?),
        Command::Witness { m } => match construct_nonconvex_witness(&inputs.tensor(m)?) {
            Ok(w) => {
                let mut v = io::nonconvex_witness_value(&w);
                v["status"] = json!("Constructed");
                v
            }
            Err(Error::NotApplicable(reason)) => json!({"status": "NotApplicable", "reason": reason}),
            Err(e) => return Err(e.into()),
        },
        Command::Contract { m, z } => {
            let m = inputs.tensor(m)?;
            let z = inputs.tensor(z)?;
            json!({"MZ": io::tensor_value(&m.contract(&z)?)})
        }
        Command::Flatten { m } => json!({"matrix": io::matrix_value(&inputs.tensor(m)?.flatten()?)}),
        Command::Harness { seed, count, m, n, low, high, q_per_tensor } => {
            let params = HarnessParams {
                seed: *seed,
                count: *count,
                m: *m,
                n: *n,
                low: *low,
                high: *high,
                q_per_tensor: *q_per_tensor,
            };
            let report = theorem_harness(&params)?;
            let code = if report.passed() { EXIT_OK } else { EXIT_DOMAIN };
            return Ok((io::harness_value(&report), code));
        }
    };
    Ok((body, EXIT_OK))
}

/// Parses `argv` (program name first), runs the command and writes the
/// report to `out` and diagnostics to `err`. Returns the exit status.
pub fn run_cli<I, T>(argv: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let start = Instant::now();
    let mut inputs = Inputs(Vec::new());
    match execute(&cli.command, &mut inputs) {
        Ok((result, code)) => {
            let report = ReportFile {
                command: argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect(),
                inputs: inputs.0,
                result,
                timing_ms: cli.timing.then(|| start.elapsed().as_millis() as u64),
            };
            if out.write_all(report.to_json_string().as_bytes()).is_err() {
                return EXIT_DOMAIN;
            }
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
