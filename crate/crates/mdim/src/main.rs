use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mdim::{run_path, ExperimentConfig};

#[derive(Parser)]
#[command(name = "mdim", about = "Epsilon-entropy experiments on shift systems")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a config and write results.json plus CSV tables.
    Run {
        config: PathBuf,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
        /// Output directory, overriding the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse and check a config without running it.
    Validate { config: PathBuf },
    /// Print the library version.
    Version,
}

fn main() -> ExitCode {
    match Cli::parse().cmd {
        Cmd::Version => {
            println!("mdim {} (mdim-core {})", env!("CARGO_PKG_VERSION"), mdim_core::VERSION);
            ExitCode::SUCCESS
        }
        Cmd::Validate { config } => match ExperimentConfig::from_path(&config).and_then(|c| c.validate()) {
            Ok(v) => {
                println!("ok {} ({}), digest {}", v.config.name, v.config.command.name(), v.digest);
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("invalid config: {e}");
                ExitCode::from(mdim::error::EXIT_VALIDATION)
            }
        },
        Cmd::Run { config, threads, out } => match run_path(&config, out.as_deref(), threads) {
            Ok((run, written)) => {
                let res = &run.results;
                for r in &res.records {
                    let e = &r.estimate;
                    println!("{:<24} eps={:<8} {:.6} {}", e.quantity.to_string(), e.eps, e.value, e.mode.name());
                }
                for c in &res.chains {
                    println!("{}(eps={}): {}", c.name, c.eps, if c.passed() { "pass" } else { "FAIL" });
                }
                for f in &res.failures {
                    eprintln!("link failure: {f}");
                }
                for e in &res.errors {
                    eprintln!("{} error in {}: {}", e.kind, e.item, e.message);
                }
                for p in written {
                    println!("wrote {}", p.display());
                }
                ExitCode::from(run.exit_code)
            }
            Err(e) => {
                eprintln!("{e}");
                ExitCode::from(e.exit_code())
            }
        },
    }
}
