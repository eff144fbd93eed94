//! Command-line front end: `verify`, `bounds` and `simulate`.
//!
//! Exit codes: 0 success, 1 a check failed (or a construction degenerated),
//! 2 bad arguments, config or output path.

mod bounds;
mod config;
mod simulate;
mod verify;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{parse_instance, ConfigFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable read for the seed when neither flag nor config set it.
pub const SEED_ENV: &str = "WORKBENCH_SEED";

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        let code = match e {
            crate::Error::Usage(_) | crate::Error::SizeCap { .. } => EXIT_USAGE,
            crate::Error::Degenerate(_) => EXIT_FAIL,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(what: &str, e: impl std::fmt::Display) -> Failure {
    Failure::usage(format!("{what}: {e}"))
}

#[derive(Debug, Parser)]
#[command(name = "workbench", version, about = "Adversary-bound verification and counting simulations")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub(crate) struct CommonArgs {
    /// key=value config file; flags override its values
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory [default: ./workbench-out]
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Master seed [default: $WORKBENCH_SEED, else 0]
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Worker threads [default: all cores]
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    /// Tolerance for norm checks [default: 1e-8]
    #[arg(long, global = true, value_name = "REAL")]
    tol_norm: Option<f64>,
    /// Tolerance for identity checks [default: 1e-10]
    #[arg(long, global = true, value_name = "REAL")]
    tol_exact: Option<f64>,
    /// Ψ-power bound a dual solution must reach [default: 0.25]
    #[arg(long, global = true, value_name = "REAL")]
    feasibility_threshold: Option<f64>,
    /// Constant C′ in the schedule cutoff [default: 8]
    #[arg(long, global = true, value_name = "REAL")]
    cprime: Option<f64>,
    /// Record wall-clock milliseconds per check (makes output nondeterministic)
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cross-check every closed form against explicit matrices
    Verify(verify::VerifyArgs),
    /// Print the lower-bound tradeoff report as JSON
    Bounds(bounds::BoundsArgs),
    /// Run a simulation campaign for one counting procedure
    Simulate(simulate::SimulateArgs),
}

/// Settings shared by every subcommand after merging flags, config and
/// environment.
#[derive(Debug, Clone, serde::Serialize)]
pub(crate) struct Common {
    pub out: PathBuf,
    pub seed: u64,
    pub jobs: Option<usize>,
    pub tol_norm: f64,
    pub tol_exact: f64,
    pub feasibility_threshold: f64,
    pub cprime: f64,
    pub timing: bool,
}

impl Common {
    fn resolve(args: &CommonArgs, file: &mut ConfigFile) -> Result<Self, Failure> {
        let seed = match (args.seed, file.take_parsed::<u64>("seed")?) {
            (Some(s), _) | (None, Some(s)) => s,
            (None, None) => match std::env::var(SEED_ENV) {
                Ok(v) => config::parse_value(SEED_ENV, v.trim())?,
                Err(std::env::VarError::NotPresent) => 0,
                Err(e) => return Err(Failure::usage(format!("{SEED_ENV}: {e}"))),
            },
        };
        let file_out = file.take_scalar("out")?.map(PathBuf::from);
        let out = args
            .out
            .clone()
            .or(file_out)
            .unwrap_or_else(|| PathBuf::from("./workbench-out"));
        let jobs = args.jobs.or(file.take_parsed("jobs")?);
        if jobs == Some(0) {
            return Err(Failure::usage("--jobs must be at least 1"));
        }
        let mut real = |flag: Option<f64>, key: &str, default: f64| -> Result<f64, Failure> {
            let from_file = file.take_parsed(key)?;
            let v = flag.or(from_file).unwrap_or(default);
            if !(v > 0.0) || !v.is_finite() {
                return Err(Failure::usage(format!("{key} must be positive and finite, got {v}")));
            }
            Ok(v)
        };
        let tol_norm = real(args.tol_norm, "tol-norm", 1e-8)?;
        let tol_exact = real(args.tol_exact, "tol-exact", 1e-10)?;
        let feasibility_threshold = real(
            args.feasibility_threshold,
            "feasibility-threshold",
            crate::adversary::DEFAULT_FEASIBILITY_THRESHOLD,
        )?;
        let cprime = real(args.cprime, "cprime", crate::adversary::DEFAULT_CPRIME)?;
        let timing = file.take_parsed::<bool>("timing")?.unwrap_or(false) || args.timing;
        Ok(Self {
            out,
            seed,
            jobs,
            tol_norm,
            tol_exact,
            feasibility_threshold,
            cprime,
            timing,
        })
    }

    pub fn pool(&self) -> Result<rayon::ThreadPool, Failure> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(j) = self.jobs {
            b = b.num_threads(j);
        }
        b.build().map_err(|e| io_failure("cannot start worker pool", e))
    }

    pub fn create_out_dir(&self) -> Result<(), Failure> {
        std::fs::create_dir_all(&self.out).map_err(|e| io_failure(&format!("cannot create {}", self.out.display()), e))
    }
}

pub(crate) fn write_json(path: &std::path::Path, value: &impl serde::Serialize) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| io_failure("cannot encode JSON", e))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| io_failure(&format!("cannot write {}", path.display()), e))
}

pub(crate) const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("workbench: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, Failure> {
    let mut file = match &cli.common.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let common = Common::resolve(&cli.common, &mut file)?;
    match cli.command {
        Command::Verify(a) => verify::cmd_verify(&a, &common, file),
        Command::Bounds(a) => bounds::cmd_bounds(&a, &common, file),
        Command::Simulate(a) => simulate::cmd_simulate(&a, &common, file),
    }
}

/// Prints one line to stdout, ignoring a closed pipe.
pub(crate) fn emit(line: String) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}
