//! `varseq` — batch front end to the variational-sequence engine.
//!
//! Reads a UTF-8 JSON problem file, runs the requested tasks and writes a
//! machine-readable report to standard output with a human summary on
//! standard error. Exit codes: 0 all verifications passed (negative
//! verdicts included), 1 input error, 2 a verification failed.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use varseq_cli::{problem, runner, schema};

#[derive(Parser)]
#[command(name = "varseq", version, about = "variational sequence engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the tasks of one or more problem files.
    Run {
        /// Problem files (UTF-8 JSON).
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Output format: `json` writes the report to stdout and a summary
        /// to stderr; `text` writes the summary to stdout.
        #[arg(long, default_value = "json")]
        format: String,
        /// Comma-separated task override.
        #[arg(long, value_delimiter = ',')]
        tasks: Option<Vec<String>>,
        /// Jet-order cap of the on-shell ideal.
        #[arg(long)]
        onshell_cap: Option<usize>,
        /// Seed for the numeric spot checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_task(name: &str) -> Result<problem::Task, String> {
    use problem::Task::*;
    Ok(match name {
        "euler_lagrange" => EulerLagrange,
        "helmholtz" => Helmholtz,
        "symmetry" => Symmetry,
        "noether" => Noether,
        "nbh" => Nbh,
        "on_shell" => OnShell,
        other => return Err(format!("unknown task `{other}`")),
    })
}

fn run_one(
    path: &PathBuf,
    format: &str,
    tasks: &Option<Vec<String>>,
    onshell_cap: Option<usize>,
    seed: u64,
) -> Result<bool, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let mut spec: problem::ProblemSpec =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    if let Some(overrides) = tasks {
        let parsed: Result<Vec<_>, _> = overrides.iter().map(|t| parse_task(t)).collect();
        spec.tasks = parsed?;
    }
    let problem = problem::Problem::from_spec(spec)?;
    let outcome = runner::run(&problem, onshell_cap, seed)?;

    let doc = serde_json::to_value(&outcome.report)
        .map_err(|e| format!("serialization failed: {e}"))?;
    schema::validate_report(&doc).map_err(|e| format!("internal: report schema violation: {e}"))?;

    match format {
        "json" => {
            println!("{}", serde_json::to_string_pretty(&doc).expect("valid JSON"));
            eprint!("{}", outcome.report.human_summary());
        }
        "text" => {
            print!("{}", outcome.report.human_summary());
        }
        other => return Err(format!("unknown format `{other}`")),
    }
    Ok(outcome.verification_failed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            files,
            format,
            tasks,
            onshell_cap,
            seed,
        } => {
            let mut any_verification_failed = false;
            for path in &files {
                match run_one(path, &format, &tasks, onshell_cap, seed) {
                    Ok(failed) => any_verification_failed |= failed,
                    Err(msg) => {
                        eprintln!("error: {msg}");
                        return ExitCode::from(1);
                    }
                }
            }
            if any_verification_failed {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
    }
}
