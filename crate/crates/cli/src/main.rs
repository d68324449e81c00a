mod cache;
mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use commands::Command;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Parser)]
#[command(name = "unitaria", version, about = "Automorphic-forms toolkit for unitary groups")]
pub struct Cli {
    /// Working precision in bits (at least 64).
    #[arg(long, global = true, env = "UNITARIA_PRECISION", default_value_t = 128)]
    pub precision: u32,

    /// Directory for the content-addressed result cache.
    #[arg(long, global = true, env = "UNITARIA_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,

    #[arg(long, global = true, env = "UNITARIA_FORMAT", value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Cap on the unitary-group search space (doubling-orbits).
    #[arg(long, global = true, env = "UNITARIA_BUDGET_GROUP", default_value_t = 10_000_000)]
    pub budget_group: u128,

    /// Cap on isotropic-subspace candidates (doubling-orbits).
    #[arg(long, global = true, env = "UNITARIA_BUDGET_SUBSPACES", default_value_t = 10_000_000)]
    pub budget_subspaces: u128,

    /// Cap on the number of lattice points reported (psd-enum).
    #[arg(long, global = true, env = "UNITARIA_BUDGET_POINTS", default_value_t = 1_000_000)]
    pub budget_points: usize,

    #[command(subcommand)]
    pub command: Command,
}

pub struct Config {
    pub precision: u32,
    pub cache: Option<cache::Cache>,
    pub budget: unitaria::doublingff::Budget,
    pub budget_points: usize,
}

/// What a command returns before it is wrapped in a report.
#[derive(Default)]
pub struct Outcome {
    pub parameters: Value,
    pub result: Value,
    /// Tail and error bounds, where the command has them.
    pub bounds: Value,
    pub warnings: Vec<String>,
}

fn emit(format: Format, report: &Value) {
    let text = match format {
        Format::Json => serde_json::to_string_pretty(report).expect("serializable") + "\n",
        Format::Csv => output::csv(report),
        Format::Pretty => output::pretty(report),
    };
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = std::io::Write::write_all(&mut std::io::stdout().lock(), text.as_bytes());
}

fn error_kind(e: &unitaria::Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let name = cli.command.name();
    let fail = |kind: &str, message: String| {
        let report = json!({"schema": 1, "command": name, "error": {"kind": kind, "message": message}});
        emit(cli.format, &report);
        ExitCode::from(1)
    };
    if cli.precision < 64 {
        return fail("Precondition", format!("precision must be at least 64 bits, got {}", cli.precision));
    }
    if cli.budget_group == 0 || cli.budget_subspaces == 0 || cli.budget_points == 0 {
        return fail("Precondition", "budgets must be positive".into());
    }
    let cache = match &cli.cache_dir {
        Some(dir) => match cache::Cache::new(dir) {
            Ok(c) => Some(c),
            Err(e) => return fail("Io", format!("cache directory {}: {e}", dir.display())),
        },
        None => None,
    };
    let config = Config {
        precision: cli.precision,
        cache,
        budget: unitaria::doublingff::Budget { group: cli.budget_group, subspaces: cli.budget_subspaces },
        budget_points: cli.budget_points,
    };
    let start = Instant::now();
    match commands::run(&cli.command, &config) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            let report = json!({
                "schema": 1,
                "command": name,
                "precision": config.precision,
                "parameters": out.parameters,
                "result": out.result,
                "bounds": out.bounds,
                "warnings": out.warnings,
                "wall_time_s": start.elapsed().as_secs_f64(),
            });
            emit(cli.format, &report);
            ExitCode::SUCCESS
        }
        Err(e) => fail(&error_kind(&e), e.to_string()),
    }
}
