use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context as _, Result};
use clap::{Args, Parser, Subcommand};
use rgf_cli::commands::{resolve_workers, EXIT_ERROR};
use rgf_cli::{cmd_axiom, cmd_recheck, cmd_reproduce, cmd_table, cmd_tally, AxiomArgs, Output};

#[derive(Parser)]
#[command(name = "rgf", version, about = "Tally elections and check voting-rule axioms on small scopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the winner of a profile under a rule.
    Tally {
        #[arg(long)]
        rule: PathBuf,
        #[arg(long)]
        profile: PathBuf,
        /// Also print the intermediate winner sets, scores or rounds.
        #[arg(long)]
        explain: bool,
    },
    /// Check an axiom over every profile of a scope (exit 0 holds, 10 violated, 2 error).
    Axiom(AxiomCli),
    /// Validate a witness document (exit 0 valid, 1 invalid, 2 error).
    Recheck { witness: PathBuf },
    /// Run reproduction scenarios (exit 0 when all match, 1 on a mismatch, 2 on error).
    Reproduce {
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        scenario: Option<String>,
        #[arg(long)]
        all: bool,
        /// Write the per-scenario report as TSV.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Build or validate a cached outcome table.
    Table {
        #[arg(long)]
        rule: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        cache: PathBuf,
    },
}

#[derive(Args)]
struct AxiomCli {
    #[arg(long, required_unless_present = "recheck")]
    rule: Option<PathBuf>,
    #[arg(long, required_unless_present = "recheck")]
    axiom: Option<String>,
    #[arg(long, required_unless_present = "recheck")]
    n: Option<usize>,
    #[arg(long, required_unless_present = "recheck")]
    m: Option<usize>,
    /// `exhaustive` or `sample:COUNT:SEED`.
    #[arg(long, default_value = "exhaustive")]
    mode: String,
    /// Write the verdict and witness as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    /// Load the outcome table from this file, building it first if needed.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Validate a witness document instead of searching.
    #[arg(long, conflicts_with_all = ["rule", "axiom", "n", "m", "json", "cache"])]
    recheck: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn workers(flag: Option<usize>) -> Result<Option<usize>> {
    resolve_workers(flag, std::env::var("RGF_WORKERS").ok().as_deref())
}

fn run(cli: Cli) -> Result<Output> {
    match cli.command {
        Command::Tally { rule, profile, explain } => cmd_tally(&read(&rule)?, &read(&profile)?, explain),
        Command::Axiom(a) => {
            if let Some(path) = &a.recheck {
                return cmd_recheck(&read(path)?);
            }
            let (Some(rule), Some(axiom), Some(n), Some(m)) = (a.rule, a.axiom, a.n, a.m) else {
                bail!("--rule, --axiom, --n and --m are required");
            };
            cmd_axiom(&AxiomArgs {
                rule_text: read(&rule)?,
                axiom,
                n,
                m,
                mode: a.mode,
                json_out: a.json,
                workers: workers(a.workers)?,
                cache: a.cache,
            })
        }
        Command::Recheck { witness } => cmd_recheck(&read(&witness)?),
        Command::Reproduce { scenario, all: _, report, json, workers: w } => {
            cmd_reproduce(scenario.as_deref(), report.as_deref(), json.as_deref(), workers(w)?)
        }
        Command::Table { rule, n, m, cache } => cmd_table(&read(&rule)?, n, m, &cache),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
