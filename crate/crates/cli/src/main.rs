mod commands;
mod config;
mod error;
mod table;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{RunConfig, Settings};
use error::CliError;

const EVAL_HELP: &str = "\
Columns:
  one-dimensional kernels g1, g2, h:  x,y,value,error_bound,exponent
  operators v, vstar:                 x,value,error_bound,exponent
  newtonian g1, g2, h:                dist,value,error_bound,exponent
  newtonian v, vstar:                 x (the origin),value,error_bound,exponent

value is INF for a divergent integral; exponent is then the estimated power
of the integrand at the divergence, and error_bound is empty.

Examples:
  biharm eval --model interval --kernel h --x 0.5 --y 0
  biharm eval --model bilaplace --kernel h --x 0.25,0.5 --y 0.5
  biharm eval --model newtonian5 --kernel g1 --dist 2
  biharm eval --model interval --kernel vstar --func bump:0.4:0.6 --x 0,0.9";

const VERIFY_HELP: &str = "\
Suites: axioms, interval, bilaplace, newtonian, adjoint, all.
Columns: id,value,tolerance,verdict (value is the measured defect).
Exit status 0 when every check passes, 1 otherwise.";

const REPORT_HELP: &str = "\
Reports (written as <name>.csv and <name>.dat into --out, default .):
  5.1          newtonian-divergence   n,radius,shell,cumulative
  5.2          obstruction            x,curve0..curve3 (seeded random a, b)
  5.5          interval-h-divergence  x,exponent,distance,shell,cumulative
  condition63  condition63-trace      depth,distance,integrand,shell,cumulative
  thm54        h-symmetry             x,y,h_xy,h_yx,asymmetry
  thm71        lsc                    model,x,y,value,liminf,verdict
Exit status 1 when the data does not reproduce the stated claim.";

/// Green kernels, coupling operators and biharmonic Green functions on model
/// spaces.
#[derive(Debug, Parser)]
#[command(name = "biharm", version, about)]
struct Cli {
    #[command(flatten)]
    flags: Flags,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Flags {
    /// interval, interval-stated, bilaplace or newtonianN (N >= 5)
    #[arg(long, global = true)]
    model: Option<String>,
    /// g1, g2, h, v or vstar
    #[arg(long, global = true)]
    kernel: Option<String>,
    /// Comma-separated abscissae
    #[arg(long, global = true, allow_hyphen_values = true)]
    x: Option<String>,
    /// Comma-separated second arguments
    #[arg(long, global = true, allow_hyphen_values = true)]
    y: Option<String>,
    /// Comma-separated distances (newtonian models)
    #[arg(long, global = true)]
    dist: Option<String>,
    /// Data for v/vstar: const:C, poly:c0:c1:..., bump:a:b [default: const:1]
    #[arg(long, global = true, allow_hyphen_values = true)]
    func: Option<String>,
    /// Absolute tolerance per integral [default: 1e-8]
    #[arg(long, global = true)]
    tol_quad: Option<String>,
    /// Tolerance for cross-operator identities [default: 1e-6]
    #[arg(long, global = true)]
    tol_identity: Option<String>,
    /// Tolerance for finite-difference residuals [default: 1e-3]
    #[arg(long, global = true)]
    tol_fd: Option<String>,
    /// Grid size for reports
    #[arg(long, global = true)]
    grid: Option<String>,
    /// Output directory
    #[arg(long, global = true)]
    out: Option<String>,
    /// Seed for randomized probe data [default: 1]
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Flat `key = value` file; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

impl Flags {
    fn settings(&self) -> Settings {
        let mut s = Settings::default();
        let pairs: [(&'static str, &Option<String>); 12] = [
            ("model", &self.model),
            ("kernel", &self.kernel),
            ("x", &self.x),
            ("y", &self.y),
            ("dist", &self.dist),
            ("func", &self.func),
            ("tol_quad", &self.tol_quad),
            ("tol_identity", &self.tol_identity),
            ("tol_fd", &self.tol_fd),
            ("grid", &self.grid),
            ("out", &self.out),
            ("seed", &self.seed),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                s.set(k, v.clone());
            }
        }
        s
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a kernel or operator and print CSV
    #[command(after_help = EVAL_HELP)]
    Eval,
    /// Run a verification suite
    #[command(after_help = VERIFY_HELP)]
    Verify { suite: String },
    /// Write the data behind one worked example
    #[command(after_help = REPORT_HELP)]
    Report { example: String },
}

fn emit(text: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::io("<stdout>", e))
}

/// Writes `text` to `<out>/<file>` when an output directory is configured,
/// to stdout otherwise.
fn deliver(cfg: &RunConfig, file: &str, text: &str) -> Result<(), CliError> {
    match &cfg.out {
        None => emit(text),
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            let path = dir.join(file);
            std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
            emit(&format!("wrote {}\n", path.display()))
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let file = match &cli.flags.config {
        Some(path) => Settings::load(path)?,
        None => Settings::default(),
    };
    let cfg = RunConfig::from_settings(&file.overridden_by(&cli.flags.settings()))?;
    let command = match &cli.command {
        Command::Eval => "eval",
        Command::Verify { .. } => "verify",
        Command::Report { .. } => "report",
    };
    let mut header = vec![
        ("biharm".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ("command".to_string(), command.to_string()),
    ];
    header.extend(cfg.echo());

    match &cli.command {
        Command::Eval => {
            let table = commands::eval::run(&cfg, header)?;
            deliver(&cfg, "eval.csv", &table.to_csv())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite } => {
            let (table, passed) = commands::verify::run(suite, &cfg, header)?;
            deliver(&cfg, &format!("verify-{suite}.csv"), &table.to_csv())?;
            Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Report { example } => {
            let report = commands::report::build(example, &cfg, header)?;
            let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
            let paths = commands::report::write(&report, &dir)?;
            let verdict = if report.reproduced { "reproduced" } else { "NOT reproduced" };
            emit(&format!(
                "wrote {}\nwrote {}\nclaim: {} -- {verdict}\n",
                paths[0].display(),
                paths[1].display(),
                report.claim
            ))?;
            Ok(if report.reproduced { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("biharm: {e}");
            ExitCode::from(2)
        }
    }
}
