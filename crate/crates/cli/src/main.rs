use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use tabnoise_cli::commands::{self, ConfigArgs, CorruptArgs, LinearizeArgs, LossesArgs, ScoreArgs};
use tabnoise_cli::server;

/// Noise simulation, dataset building and robustness scoring for
/// controlled table-to-text generation.
///
/// Exit codes: 0 success, 1 runtime or validation failure, 2 usage error.
#[derive(Debug, Parser)]
#[command(name = "tabnoise", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Build a noisy or noise-augmented dataset.
    Corrupt(CorruptArgs),
    /// BLEU, per-noise robustness summary and covered cells.
    Score(ScoreArgs),
    /// Tagged generator inputs as TSV or JSONL.
    Linearize(LinearizeArgs),
    /// Serve the annotation JSON API.
    Serve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// JSONL file that submissions are appended to.
        #[arg(long)]
        out: PathBuf,
        /// Static UI files served outside /api.
        #[arg(long)]
        assets: Option<PathBuf>,
    },
    /// LM / RL / mixed losses for JSONL rows of log-probabilities.
    Losses(LossesArgs),
    /// Write the trainer configuration.
    Config(ConfigArgs),
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Cmd::Corrupt(args) => commands::cmd_corrupt(&args),
        Cmd::Score(args) => {
            let report = commands::cmd_score(&args)?;
            eprint!("{}", report.render_table());
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(())
        }
        Cmd::Linearize(args) => commands::cmd_linearize(&args),
        Cmd::Serve {
            input,
            port,
            out,
            assets,
        } => {
            let state = server::AppState::load(&input, &out)?;
            tokio::runtime::Runtime::new()?.block_on(server::serve(state, port, assets))
        }
        Cmd::Losses(args) => commands::cmd_losses(&args, std::io::stdout().lock()),
        Cmd::Config(args) => {
            commands::cmd_config(&args)?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors and 0 for --help/--version
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
