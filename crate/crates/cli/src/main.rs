use std::path::PathBuf;
use std::process::exit;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "shiftpress", version, about = "Pressure, entropy, and dimension experiments on shift spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config file.
    Run {
        /// Path to the config file.
        config: PathBuf,
        /// Directory for the results table and run manifest.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Worker threads; 0 means one per core. Overrides SHIFTPRESS_THREADS.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// List the builtin systems, measures, and models.
    ListBuiltins,
}

fn main() {
    let cli = Cli::parse();
    match cli.command {
        Command::ListBuiltins => print!("{}", shiftpress_cli::render_catalog()),
        Command::Run {
            config,
            out,
            threads,
        } => {
            let threads = threads
                .or_else(|| {
                    std::env::var("SHIFTPRESS_THREADS")
                        .ok()
                        .and_then(|v| v.parse().ok())
                })
                .unwrap_or(0);
            match shiftpress_cli::run_config(&config, &out, threads) {
                Ok(outcome) => {
                    println!("wrote {}", outcome.csv_path.display());
                    println!("wrote {}", outcome.manifest_path.display());
                    println!("rows: {}", outcome.rows);
                    if let Some(msg) = &outcome.failure {
                        eprintln!("error: {msg}");
                    }
                    exit(outcome.exit_code);
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    exit(e.exit_code());
                }
            }
        }
    }
}
