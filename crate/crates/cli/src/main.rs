//! `monodyn`: sandpiles, graph monoids, dimension groups and shift equivalence
//! from the command line.

mod cmd;
mod config;
mod report;
mod schema;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{BoundFlags, Bounds};
use report::Report;

const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "monodyn", version, about = "Sandpiles, graph monoids, dimension groups and shift equivalence")]
struct Cli {
    /// Print the JSON report instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized operations.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Bounds file with `key = value` lines (search_depth, monoid_elements, ...).
    #[arg(long = "config", global = true, value_name = "FILE")]
    config_file: Option<PathBuf>,
    #[command(flatten)]
    bounds: BoundFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Graph files: structure and adjacency matrix.
    #[command(subcommand)]
    Graph(cmd::graph::GraphCmd),
    /// Chip firing, stable addition, sandpile monoids and grids.
    #[command(subcommand)]
    Sandpile(cmd::sandpile::SandpileCmd),
    /// Presentations, word problems and enumeration.
    #[command(subcommand)]
    Monoid(cmd::monoid::MonoidCmd),
    /// Finite windows of the talented monoid.
    #[command(subcommand)]
    Talented(cmd::monoid::TalentedCmd),
    /// Dimension-group arithmetic for a nonnegative matrix.
    #[command(subcommand)]
    Dimgroup(cmd::dimgroup::DimCmd),
    /// Shift equivalence: verification, search and invariants.
    #[command(subcommand)]
    Shift(cmd::shift::ShiftCmd),
    /// Leavitt path algebra classifiers.
    #[command(subcommand)]
    Lpa(cmd::lpa::LpaCmd),
    /// Print the JSON schema of every report.
    Schema,
}

pub struct Ctx {
    pub bounds: Bounds,
    pub seed: u64,
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    let ctx = Ctx {
        bounds: Bounds::load(cli.config_file.as_deref(), &cli.bounds)?,
        seed: cli.seed,
    };
    match &cli.command {
        Command::Graph(c) => c.run(&ctx),
        Command::Sandpile(c) => c.run(&ctx),
        Command::Monoid(c) => c.run(&ctx),
        Command::Talented(c) => c.run(&ctx),
        Command::Dimgroup(c) => c.run(&ctx),
        Command::Shift(c) => c.run(&ctx),
        Command::Lpa(c) => c.run(&ctx),
        Command::Schema => Ok(schema::report()),
    }
}

fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    if !text.ends_with('\n') {
        let _ = out.write_all(b"\n");
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(r) => {
            if cli.json || matches!(cli.command, Command::Schema) {
                emit(&serde_json::to_string_pretty(&r.json).expect("reports serialize"));
            } else {
                emit(&r.text);
            }
            ExitCode::from(if r.negative { EXIT_NEGATIVE } else { 0 })
        }
        Err(e) => {
            if cli.json {
                let doc = serde_json::json!({"kind": "error", "message": format!("{e:#}")});
                emit(&serde_json::to_string_pretty(&doc).expect("reports serialize"));
            }
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
