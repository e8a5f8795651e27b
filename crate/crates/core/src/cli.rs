//! Command-line front end.

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::checks::run_checks;
use crate::diagnostics::{g_field, velocity_formulation_residual, TWIN_COLUMNS};
use crate::dynamics::{run, run_twin_to_dir};
use crate::io::{format_value, parse_config, read_snapshot, RunConfig};
use crate::littlewood_paley::{make_partition, BesovSpec};
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "bsqlab", version, about = "Pseudo-spectral Boussinesq laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FieldChoice {
    Omega,
    Theta,
    G,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate a configured run with monitors.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output_dir` from the config.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Run the built-in invariant suite.
    Check,
    /// Print a Besov norm of a snapshot field.
    Norms {
        #[arg(long)]
        snapshot: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        #[arg(long, value_parser = parse_exponent)]
        p: f64,
        #[arg(long, value_parser = parse_exponent)]
        q: f64,
        #[arg(long, default_value_t = 0.0)]
        log_gamma: f64,
        #[arg(long)]
        homogeneous: bool,
        #[arg(long, value_enum, default_value_t = FieldChoice::Omega)]
        field: FieldChoice,
    },
    /// Print the velocity-formulation residual of a snapshot.
    Equiv {
        #[arg(long)]
        snapshot: PathBuf,
    },
    /// Twin run from θ₀ and θ₀(1 + eps·bump); CSV on stdout.
    Twin {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        perturb: f64,
    },
}

fn parse_exponent(s: &str) -> std::result::Result<f64, String> {
    match s {
        "inf" | "infinity" | "Inf" => Ok(f64::INFINITY),
        _ => s.parse::<f64>().map_err(|e| e.to_string()),
    }
}

fn load_config(path: &PathBuf) -> Result<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Run { config, output_dir } => {
            let mut cfg = load_config(&config)?;
            if output_dir.is_some() {
                cfg.output_dir = output_dir;
            }
            let out = run(&cfg)?;
            let last = out.series.last().expect("initial row");
            println!(
                "t = {} after {} steps; omega L2 {:.6e}, theta Linf {:.6e}, G L2 {:.6e}, max balance residual {:.3e}{}",
                out.final_state.t,
                out.steps,
                last.omega_l2,
                last.theta_linf,
                last.g_l2,
                out.max_balance_residual,
                if out.diverged { " (diverged)" } else { "" }
            );
            Ok(if out.diverged { 1 } else { 0 })
        }
        Command::Check => {
            let results = run_checks();
            let mut failed = 0;
            for r in &results {
                println!("[{}] {}: {}", if r.pass { "PASS" } else { "FAIL" }, r.name, r.detail);
                failed += usize::from(!r.pass);
            }
            println!("{} of {} checks passed", results.len() - failed, results.len());
            Ok(if failed == 0 { 0 } else { 1 })
        }
        Command::Norms {
            snapshot,
            s,
            p,
            q,
            log_gamma,
            homogeneous,
            field,
        } => {
            let (state, _) = read_snapshot(&snapshot)?;
            let spec = BesovSpec::new(s, log_gamma, p, q, homogeneous)?;
            let f = match field {
                FieldChoice::Omega => state.omega.clone(),
                FieldChoice::Theta => state.theta.clone(),
                FieldChoice::G => g_field(&state.omega, &state.theta)?,
            };
            let value = make_partition(state.grid()).besov_norm(&f, &spec)?;
            println!("{}", format_value(value));
            Ok(0)
        }
        Command::Equiv { snapshot } => {
            let (state, params) = read_snapshot(&snapshot)?;
            let r = velocity_formulation_residual(&state, &params)?;
            println!("{}", format_value(r.norm));
            Ok(0)
        }
        Command::Twin { config, perturb } => {
            let cfg = load_config(&config)?;
            let out = run_twin_to_dir(&cfg, perturb)?;
            println!("{}", TWIN_COLUMNS.join(","));
            for row in &out.divergence.rows {
                let cells: Vec<String> = row.to_vec().into_iter().map(format_value).collect();
                println!("{}", cells.join(","));
            }
            Ok(if out.diverged { 1 } else { 0 })
        }
    }
}

/// Runs the CLI on `argv` (program name first) and returns the exit code:
/// 0 success, 1 failed check / diverged run / runtime error, 2 usage error.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config { .. } | Error::InvalidParameter(_) => 2,
                _ => 1,
            }
        }
    }
}
