use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use zeno_cli::commands::{
    cmd_classify, cmd_eval, cmd_sweep, parse_alpha, parse_alpha_list, parse_n_schedule,
    parse_tau_grid, SweepSpec,
};
use zeno_cli::schema::read_measure_file;
use zeno_cli::suites::run_suite;
use zeno_cli::{CliError, CliResult};
use zeno_core::OracleConfig;

/// Scaled quantum Zeno products p(τ N^{α-1})^N on spectral measures.
///
/// Results depend on τ/ħ only; --hbar defaults to 1.
#[derive(Parser)]
#[command(name = "zeno", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one product and print it with the predicted limit (JSON).
    Eval {
        #[command(flatten)]
        common: Common,
        /// Exponent, "1/2" (exact) or "0.5" (approximate).
        #[arg(long)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        tau: f64,
        #[arg(long = "n")]
        n: u64,
    },
    /// Evaluate a grid of (alpha, tau, N) and write a CSV file.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated exponents.
        #[arg(long)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "tau_grid")]
        tau: Option<f64>,
        /// a:b:n, n evenly spaced points.
        #[arg(long, allow_hyphen_values = true)]
        tau_grid: Option<String>,
        #[arg(long = "n", conflicts_with = "n_schedule")]
        n: Option<u64>,
        /// Comma-separated, strictly increasing.
        #[arg(long)]
        n_schedule: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the predicted limit without evaluating anything (JSON).
    Classify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        tau: f64,
    },
    /// Run a named verification suite and print its report (JSON).
    Verify {
        /// convolution, thresholds, lattice, recurrence or taylor.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Also write the report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Measure file (JSON).
    #[arg(long)]
    measure: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    /// Commensurability residual tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 1_000_000)]
    max_denominator: u64,
}

impl Common {
    fn config(&self) -> OracleConfig {
        OracleConfig {
            tol: self.tol,
            max_denominator: self.max_denominator,
            ..OracleConfig::default()
        }
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("report serializes");
    let mut out = std::io::stdout().lock();
    writeln!(out, "{text}")?;
    Ok(())
}

fn run(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Eval {
            common,
            alpha,
            tau,
            n,
        } => {
            let measure = read_measure_file(&common.measure)?;
            let record = cmd_eval(
                &measure,
                parse_alpha(&alpha)?,
                tau,
                n,
                common.hbar,
                &common.config(),
            )?;
            print_json(&record)?;
        }
        Command::Sweep {
            common,
            alpha,
            tau,
            tau_grid,
            n,
            n_schedule,
            out,
        } => {
            let taus = match (tau, tau_grid) {
                (Some(t), None) => vec![t],
                (None, Some(g)) => parse_tau_grid(&g)?,
                _ => {
                    return Err(CliError::Schema(
                        "give exactly one of --tau, --tau-grid".into(),
                    ))
                }
            };
            let schedule = match (n, n_schedule) {
                (Some(n), None) => vec![n],
                (None, Some(s)) => parse_n_schedule(&s)?,
                _ => {
                    return Err(CliError::Schema(
                        "give exactly one of --n, --n-schedule".into(),
                    ))
                }
            };
            let spec = SweepSpec {
                measure: read_measure_file(&common.measure)?,
                alphas: parse_alpha_list(&alpha)?,
                taus,
                schedule,
                hbar: common.hbar,
                config: common.config(),
            };
            let rows = cmd_sweep(&spec, &out)?;
            eprintln!("wrote {rows} rows to {}", out.display());
        }
        Command::Classify { common, alpha, tau } => {
            let measure = read_measure_file(&common.measure)?;
            let prediction = cmd_classify(
                &measure,
                parse_alpha(&alpha)?,
                tau,
                common.hbar,
                &common.config(),
            )?;
            print_json(&prediction)?;
        }
        Command::Verify { suite, seed, out } => {
            let report = run_suite(&suite, seed)?;
            print_json(&report)?;
            if let Some(path) = out {
                let text = serde_json::to_string_pretty(&report).expect("report serializes");
                std::fs::write(path, text + "\n")?;
            }
            if !report.passed() {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
