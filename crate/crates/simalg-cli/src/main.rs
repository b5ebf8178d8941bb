//! Batch driver: parse a declarative config describing structures,
//! families, morphisms, and fuzzy sets; run audits, collapse sweeps,
//! bracket extractions, and embeddings; emit machine-readable reports.
//!
//! Exit status: 0 when every task's pass-condition holds, 1 on any failed
//! verdict, 2 on configuration or evaluation errors.

mod config;
mod report;
mod tasks;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunConfig;
use report::write_atomic;

#[derive(Parser)]
#[command(name = "simalg", version, about = "Similarity-algebra verification driver")]
struct Cli {
    /// Print supported structure kinds and their axiom catalogs, then exit.
    #[arg(long)]
    list_kinds: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Execute every task in a config file.
    Run {
        /// Path to the JSON config.
        config: PathBuf,
        /// Override every task's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory for the report and CSV files.
        #[arg(long, default_value = "simalg-out")]
        out: PathBuf,
        /// Worker threads for defect sweeps (results are identical for any
        /// value; this only affects wall time).
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn list_kinds() {
    for kind in simalg::StructureKind::ALL {
        let catalog = simalg::axiom_catalog(kind);
        println!("{}:", kind.name());
        for axiom in catalog {
            println!("  {}", axiom.name);
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_kinds {
        list_kinds();
        return ExitCode::SUCCESS;
    }
    let Some(Command::Run { config, seed, out, jobs }) = cli.command else {
        eprintln!("nothing to do: pass `run <config>` or --list-kinds");
        return ExitCode::from(2);
    };

    if let Some(jobs) = jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("failed to configure thread pool: {e}");
            return ExitCode::from(2);
        }
    }

    let bytes = match std::fs::read(&config) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("cannot read {}: {e}", config.display());
            return ExitCode::from(2);
        }
    };
    let parsed = match std::str::from_utf8(&bytes)
        .map_err(|e| simalg::Error::Config(format!("config is not UTF-8: {e}")))
        .and_then(RunConfig::parse)
    {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };

    let (doc, all_pass, any_error) = tasks::run_all(&parsed, &bytes, seed, &out);
    let json = match serde_json::to_vec_pretty(&doc) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("report serialization failed: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = write_atomic(&out.join("report.json"), &json) {
        eprintln!("{e}");
        return ExitCode::from(2);
    }

    for task in &doc.tasks {
        let status = match task.status {
            report::TaskStatus::Pass => "PASS",
            report::TaskStatus::Fail => "FAIL",
            report::TaskStatus::Error => "ERROR",
        };
        match &task.error {
            Some(e) => println!("{status} {} ({}): {e}", task.name, task.task_type),
            None => println!("{status} {} ({})", task.name, task.task_type),
        }
    }

    if any_error {
        ExitCode::from(2)
    } else if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
