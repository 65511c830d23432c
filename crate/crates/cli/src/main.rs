use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use symdyn_cli::{parse_resolution, CliError, Outcome, Overrides};
use symdyn_core::config::SystemConfig;

/// Verification suites for partial actions on shift spaces.
///
/// Exit status: 0 when every report passes, 1 on any failure, 2 when the
/// worst verdict is inconclusive, 3 on bad input.
#[derive(Parser, Debug)]
#[command(name = "symdyn", version)]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// System definition (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the reports as a JSON array.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Write the lattice or Stone dual as a DOT graph.
    #[arg(long, global = true)]
    dot: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Left special scan depth.
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Resolution as K,L.
    #[arg(long, global = true, value_parser = parse_resolution)]
    resolution: Option<(usize, usize)>,
    /// Free-group ball radius.
    #[arg(long, global = true)]
    radius: Option<usize>,
    #[arg(long, global = true)]
    coverage_floor: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Presentation, factor counts and atom counts.
    Describe,
    /// Run verification suites.
    Check {
        /// Comma-separated suite names.
        #[arg(long, value_delimiter = ',', required = true)]
        suite: Vec<String>,
    },
    /// Lattice of invariant admissible sets.
    Ideals,
    /// Left special elements and properties (*) and (**).
    Special,
    /// The map from one-sided to two-sided Boolean algebras.
    Psi,
    /// Matrix units on the left special tail class.
    Units,
}

fn run(args: &Args) -> Result<Outcome, CliError> {
    let path = args.config.as_ref().ok_or_else(|| CliError::Usage("--config PATH is required".into()))?;
    let mut config = SystemConfig::from_path(path)?;
    let overrides = Overrides {
        seed: args.seed,
        depth: args.depth,
        resolution: args.resolution,
        radius: args.radius,
        coverage_floor: args.coverage_floor,
    };
    overrides.apply(&mut config)?;
    match &args.command {
        Command::Describe => symdyn_cli::describe(&config),
        Command::Check { suite } => symdyn_cli::check(&config, suite),
        Command::Ideals => symdyn_cli::ideals(&config),
        Command::Special => symdyn_cli::special(&config),
        Command::Psi => symdyn_cli::psi(&config),
        Command::Units => symdyn_cli::units(&config),
    }
}

fn write(path: &PathBuf, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let outcome = match run(&args) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    for r in &outcome.reports {
        let worst = r.counterexamples.first().map(|c| format!(" ({} counterexamples; first: {c})", r.counterexamples.len())).unwrap_or_default();
        println!("{}: {}{worst}", r.suite, serde_json::to_value(r.verdict).expect("verdict serializes").as_str().unwrap_or("?"));
        for note in &r.notes {
            println!("  note: {note}");
        }
    }
    let mut io = Ok(());
    if let Some(path) = &args.json {
        io = io.and(write(path, &outcome.to_json()));
    }
    if let Some(path) = &args.dot {
        match &outcome.dot {
            Some(dot) => io = io.and(write(path, dot)),
            None => eprintln!("warning: this command draws no graph; --dot ignored"),
        }
    }
    if let Err(e) = io {
        eprintln!("error: {e}");
        return ExitCode::from(3);
    }
    ExitCode::from(outcome.exit_code() as u8)
}
