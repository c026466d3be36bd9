//! `conelab`: runs measurement scenarios and writes CSV/JSON artifacts with a
//! digest manifest.

mod describe;
mod error;
mod ops;
mod scenario;

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use conelab_core::group::DEFAULT_BALL_BUDGET;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};
use crate::ops::{run_step, Artifact, RunContext};

#[derive(Parser)]
#[command(
    name = "conelab",
    version,
    about = "Finite-scale measurements of coned-off graphs and developments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or a bundled scenario by name.
    Run {
        scenario: String,
        /// Output directory, default out/<scenario name>.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed for sampled steps; overrides the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Vertex budget for balls and searches; overrides the scenario's budget.
        #[arg(long = "budget-vertices")]
        budget_vertices: Option<usize>,
    },
    /// List the bundled scenarios.
    ListScenarios,
    /// Print the contract of a pipeline op.
    Describe { op: String },
}

#[derive(Serialize)]
struct ManifestEntry {
    path: String,
    op: &'static str,
    bytes: usize,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest {
    scenario: String,
    seed: Option<u64>,
    budget_vertices: usize,
    artifacts: Vec<ManifestEntry>,
}

fn run(arg: &str, out: Option<PathBuf>, seed: Option<u64>, budget: Option<usize>) -> CliResult<PathBuf> {
    let loaded = scenario::load(arg)?;
    let s = &loaded.scenario;
    let seed = seed.or(s.seed);
    let budget = budget.or(s.budget_vertices).unwrap_or(DEFAULT_BALL_BUDGET);
    if budget == 0 {
        return Err(CliError::schema("--budget-vertices must be positive"));
    }
    if seed.is_none() {
        if let Some(step) = s.pipeline.iter().find(|st| st.is_sampled()) {
            return Err(CliError::schema(format!(
                "step {} samples at random; give a seed in the scenario or with --seed",
                step.op_name()
            )));
        }
    }
    let ctx = RunContext {
        loaded: &loaded,
        seed,
        budget,
    };
    let mut produced: Vec<(&'static str, Artifact)> = Vec::new();
    for (i, step) in s.pipeline.iter().enumerate() {
        let prefix = format!("{:02}", i + 1);
        for a in run_step(&ctx, step, &prefix)? {
            produced.push((step.op_name(), a));
        }
    }

    let dir = out.unwrap_or_else(|| Path::new("out").join(&s.name));
    fs::create_dir_all(&dir).map_err(|e| CliError::schema(format!("{}: {e}", dir.display())))?;
    let mut artifacts = Vec::new();
    for (op, a) in produced {
        let path = dir.join(&a.name);
        fs::write(&path, &a.bytes).map_err(|e| CliError::schema(format!("{}: {e}", path.display())))?;
        artifacts.push(ManifestEntry {
            path: a.name,
            op,
            bytes: a.bytes.len(),
            sha256: hex::encode(Sha256::digest(&a.bytes)),
        });
    }
    let manifest = Manifest {
        scenario: s.name.clone(),
        seed,
        budget_vertices: budget,
        artifacts,
    };
    let mut text = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::invariant(e.to_string()))?;
    text.push('\n');
    let path = dir.join("manifest.json");
    fs::write(&path, text).map_err(|e| CliError::schema(format!("{}: {e}", path.display())))?;
    Ok(dir)
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Run {
            scenario,
            out,
            seed,
            budget_vertices,
        } => {
            let dir = run(&scenario, out, seed, budget_vertices)?;
            println!("{}", dir.join("manifest.json").display());
        }
        Command::ListScenarios => {
            for (name, text) in scenario::BUNDLED {
                let s: scenario::Scenario = serde_json::from_str(text)?;
                println!("{name}\t{}", s.description);
            }
            println!();
            println!(
                "named polygons: {}",
                scenario::named_polygons().collect::<Vec<_>>().join(", ")
            );
        }
        Command::Describe { op } => match describe::describe(&op) {
            Some(text) => println!("{text}"),
            None => {
                let known: Vec<&str> = describe::OPS.iter().map(|(n, _)| *n).collect();
                return Err(CliError::schema(format!(
                    "unknown op {op:?}; known ops: {}",
                    known.join(", ")
                )));
            }
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match catch_unwind(AssertUnwindSafe(|| dispatch(cli))) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
        Err(_) => {
            eprintln!("error: internal invariant breach");
            ExitCode::from(error::ExitKind::Invariant as u8)
        }
    }
}
