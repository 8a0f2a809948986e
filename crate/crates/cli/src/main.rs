mod commands;
mod config;

use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rdslab::{Error, ErrorKind};
use serde_json::json;

#[derive(Parser)]
#[command(name = "rdslab", version, about = "Simulate respondent-driven sampling on partially directed networks")]
struct Cli {
    /// Log filter for stderr (error, warn, info, debug, trace).
    #[arg(long, global = true, env = "RDSLAB_LOG", default_value = "warn")]
    log_level: log::LevelFilter,

    /// Worker threads for parallel work.
    #[arg(long, global = true, env = "RDSLAB_JOBS")]
    jobs: Option<NonZeroUsize>,

    /// Report failures as a JSON object on stderr.
    #[arg(long, global = true)]
    json_errors: bool,

    /// JSON object of flag values, keyed by long flag name. Command-line flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a network from the attributed configuration model.
    GenAcm(commands::GenAcmArgs),
    /// Generate a homophilous two-block network with exact edge counts.
    GenBlock(commands::GenBlockArgs),
    /// Draw sample records from a network (JSON lines).
    Sample(commands::SampleArgs),
    /// Estimate inclusion probabilities from sample records.
    Estimate(commands::EstimateArgs),
    /// Run a simulation grid.
    Experiment(commands::ExperimentArgs),
    /// Convert a SNAP edge list into a network.
    Ingest(commands::IngestArgs),
    /// Print network statistics as JSON.
    Stats(commands::StatsArgs),
}

const EXIT_USAGE: u8 = 1;

fn exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::Usage => EXIT_USAGE,
        ErrorKind::Infeasible => 2,
        ErrorKind::Data => 3,
    }
}

fn report(err: &Error, json_errors: bool) -> ExitCode {
    let code = exit_code(err.kind());
    if json_errors {
        let kind = match err.kind() {
            ErrorKind::Usage => "usage",
            ErrorKind::Infeasible => "infeasible",
            ErrorKind::Data => "data",
        };
        let mut obj = json!({ "error": kind, "exit_code": code, "message": err.to_string() });
        if let Error::InfeasibleAlpha { min_alpha, .. } = err {
            obj["min_alpha"] = json!(min_alpha);
        }
        eprintln!("{obj}");
    } else {
        eprintln!("error: {err}");
    }
    ExitCode::from(code)
}

fn usage_failure(message: &str, json_errors: bool) -> ExitCode {
    if json_errors {
        eprintln!("{}", json!({ "error": "usage", "exit_code": EXIT_USAGE, "message": message.trim_end() }));
    } else {
        eprint!("{message}");
    }
    ExitCode::from(EXIT_USAGE)
}

fn main() -> ExitCode {
    let argv: Vec<_> = std::env::args_os().collect();
    let json_errors = argv.iter().any(|a| a == "--json-errors");
    let argv = match config::expand(argv) {
        Ok(a) => a,
        Err(msg) => return usage_failure(&format!("error: {msg}\n"), json_errors),
    };
    let json_errors = json_errors || argv.iter().any(|a| a == "--json-errors");

    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return usage_failure(&e.render().to_string(), json_errors),
    };

    env_logger::Builder::new().filter_level(cli.log_level).init();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.get()).build_global() {
            log::warn!("could not size the worker pool: {e}");
        }
    }

    let result = match cli.command {
        Command::GenAcm(a) => commands::gen_acm(a),
        Command::GenBlock(a) => commands::gen_block(a),
        Command::Sample(a) => commands::sample(a),
        Command::Estimate(a) => commands::estimate(a),
        Command::Experiment(a) => commands::experiment(a),
        Command::Ingest(a) => commands::ingest(a),
        Command::Stats(a) => commands::stats(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report(&e, json_errors),
    }
}
