mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use commands::{
    AbelianArgs, CentroidArgs, MelnikovArgs, OvalArgs, PfArgs, Run, SimArgs, VerifyArgs,
};
use config::{config_err, merge, CliError, CliResult};
use output::{manifest_path, Manifest};

#[derive(Parser, Debug)]
#[command(
    name = "twoloop",
    version,
    about = "Abelian integrals, Melnikov functions and limit cycles near two-saddle loops"
)]
struct Cli {
    /// JSON object whose keys override the command-line flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads; 1 gives the sequential reference path.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, default_value_t = twoloop::verify::SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate (J₋₁, J₀, J₁) over an energy grid.
    Abelian(AbelianArgs),
    /// Sample one oval as (axis, +width, −width).
    Oval(OvalArgs),
    /// Fundamental series of the Picard-Fuchs system.
    Pf(PfArgs),
    /// Evaluate, expand, classify or count zeros of αJ₀ + βJ₁ + γJ₋₁.
    Melnikov(MelnikovArgs),
    /// Centroid curves and their line intersections.
    Centroid(CentroidArgs),
    /// Integrate perturbed flows: census, trajectory, traces, shifts, scan.
    Sim(SimArgs),
    /// Run the acceptance suite.
    Verify(VerifyArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Abelian(_) => "abelian",
            Command::Oval(_) => "oval",
            Command::Pf(_) => "pf",
            Command::Melnikov(_) => "melnikov",
            Command::Centroid(_) => "centroid",
            Command::Sim(_) => "sim",
            Command::Verify(_) => "verify",
        }
    }
}

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_DEGRADED: u8 = 3;

fn load_config(path: &Option<PathBuf>) -> CliResult<Map<String, Value>> {
    let Some(p) = path else {
        return Ok(Map::new());
    };
    let text = std::fs::read_to_string(p)
        .map_err(|e| CliError::Config(format!("config {}: {e}", p.display())))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(m)) => Ok(m),
        Ok(_) => config_err("config must be a JSON object"),
        Err(e) => config_err(format!("config {}: {e}", p.display())),
    }
}

fn dispatch<A, F>(
    args: &A,
    overrides: &Map<String, Value>,
    name: &str,
    f: F,
) -> CliResult<(Run, Value)>
where
    A: Serialize + DeserializeOwned,
    F: FnOnce(&A) -> CliResult<Run>,
{
    let merged = merge(args, overrides, name)?;
    let echo = serde_json::to_value(&merged)?;
    Ok((f(&merged)?, echo))
}

fn execute(cli: Cli) -> CliResult<u8> {
    let start = Instant::now();
    let mut overrides = load_config(&cli.config)?;
    let name = cli.command.name();
    if let Some(sub) = overrides.remove("subcommand") {
        if sub.as_str() != Some(name) {
            return config_err(format!("config subcommand {sub} does not match {name}"));
        }
    }
    let seed = match overrides.remove("seed") {
        Some(v) => v
            .as_u64()
            .ok_or_else(|| CliError::Config("seed must be a non-negative integer".into()))?,
        None => cli.seed,
    };
    let threads = match overrides.remove("threads") {
        Some(v) => Some(
            v.as_u64()
                .filter(|&n| n > 0)
                .ok_or_else(|| CliError::Config("threads must be a positive integer".into()))?
                as usize,
        ),
        None => cli.threads,
    };
    if let Some(n) = threads {
        if n == 0 {
            return config_err("threads must be positive");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Hard(e.to_string()))?;
    }

    let (run, mut echo) = match &cli.command {
        Command::Abelian(a) => dispatch(a, &overrides, name, commands::abelian)?,
        Command::Oval(a) => dispatch(a, &overrides, name, commands::oval)?,
        Command::Pf(a) => dispatch(a, &overrides, name, commands::pf)?,
        Command::Melnikov(a) => dispatch(a, &overrides, name, commands::melnikov)?,
        Command::Centroid(a) => dispatch(a, &overrides, name, commands::centroid)?,
        Command::Sim(a) => dispatch(a, &overrides, name, commands::sim)?,
        Command::Verify(a) => dispatch(a, &overrides, name, |a| commands::run_verify(a, seed))?,
    };
    if let Some(obj) = echo.as_object_mut() {
        obj.insert("subcommand".into(), Value::from(name));
        obj.insert("seed".into(), Value::from(seed));
        if let Some(n) = threads {
            obj.insert("threads".into(), Value::from(n));
        }
    }

    let (status, code) = if run.failed {
        ("failed", EXIT_FAILURE)
    } else if run.degraded {
        ("degraded", EXIT_DEGRADED)
    } else {
        ("ok", 0)
    };
    if let (Some(out), Some(artifact)) = (&run.out, &run.artifact) {
        artifact.write(out)?;
        eprintln!("wrote {}", out.display());
    }
    let manifest = Manifest {
        toolkit: "twoloop",
        version: env!("CARGO_PKG_VERSION"),
        subcommand: name,
        config: echo,
        artifact: run.out.as_ref().map(|p| p.display().to_string()),
        status,
        wall_seconds: start.elapsed().as_secs_f64(),
        summary: &run.summary,
    };
    if let Some(out) = &run.out {
        manifest.write(&manifest_path(out))?;
    }
    println!("{}", serde_json::to_string_pretty(&run.summary)?);
    if code == EXIT_DEGRADED {
        eprintln!("numerical flags raised; results are degraded");
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(match e {
                CliError::Config(_) => EXIT_CONFIG,
                CliError::Hard(_) => EXIT_FAILURE,
            })
        }
    }
}
