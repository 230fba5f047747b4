//! `dj`: command-line front end for the deliberated-judgment engine.
//!
//! Exit codes: 0 for passing or valid results, 1 for failing or invalid ones,
//! 2 for usage and input errors.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "dj", version, about = "Deliberated judgment checks, models and dialogues")]
struct Cli {
    /// Print JSON instead of key: value text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
#[group(multiple = false)]
struct GammaArgs {
    /// Comma-separated argument identifiers.
    #[arg(long, value_delimiter = ',')]
    gamma: Option<Vec<String>>,
    /// File with identifiers: a JSON array or comma/whitespace separated.
    #[arg(long)]
    gamma_file: Option<PathBuf>,
    /// Use every argument.
    #[arg(long)]
    gamma_all: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum AgentKind {
    Static,
    Cyclic,
    Drift,
}

#[derive(Subcommand)]
enum Command {
    /// Statuses and the deliberated judgment.
    Judge { file: PathBuf },
    /// Conditions for a CAC subset; --json prints the certificate.
    Check {
        file: PathBuf,
        #[command(flatten)]
        gamma: GammaArgs,
    },
    /// Operational validity of a model.
    Validate {
        file: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        gamma: GammaArgs,
    },
    /// Build a model from a clear-cut situation.
    Synth { file: PathBuf },
    /// Extract a CAC subset from an efficient set.
    Extract {
        file: PathBuf,
        /// Comma-separated argument identifiers; all arguments by default.
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<String>>,
    },
    /// Randomized consistency checks over generated situations.
    Fuzz {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// free, layered, cac-enforced or mixed.
        #[arg(long, default_value = "mixed")]
        profile: String,
        /// Comma-separated check names; all by default.
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        /// Write the full JSON report here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Validation dialogue against a simulated agent.
    Dialogue {
        file: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum)]
        agent: AgentKind,
        #[arg(long, default_value_t = 0)]
        agent_seed: u64,
        /// Perspective the agent starts from.
        #[arg(long)]
        start: Option<String>,
        #[arg(long, default_value_t = 1)]
        budget: u32,
        #[command(flatten)]
        gamma: GammaArgs,
    },
    /// Serve the session HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Allowed browser origin; repeatable, `*` for any.
        #[arg(long = "cors-origin", default_value = "http://localhost:5173")]
        cors_origins: Vec<String>,
        /// Directory for per-session journal files.
        #[arg(long)]
        journal: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
