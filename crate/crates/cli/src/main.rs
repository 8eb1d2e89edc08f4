use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use dynet_cli::catalog::{list_scenarios, render};
use dynet_cli::{run, write_outputs, CliError, RunOptions, ScenarioConfig};
use dynet_core::simulator::SimLimits;

#[derive(Parser)]
#[command(name = "dynet", version, about = "Dynamic random network experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its CSV tables and JSON report.
    Run {
        config: PathBuf,
        /// Exit with status 1 if any acceptance check fails.
        #[arg(long)]
        check: bool,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Override the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (default: the config's `out`, else the current directory).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report schema violations without running.
    Validate { config: PathBuf },
    /// List scenario kinds, their parameters and what each verifies.
    List,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::List => {
            print!("{}", render(&list_scenarios()));
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { config } => {
            let diags = ScenarioConfig::load(&config)?.validate();
            if diags.is_empty() {
                println!("{}: ok", config.display());
                Ok(ExitCode::SUCCESS)
            } else {
                for d in &diags {
                    println!("{d}");
                }
                Ok(ExitCode::from(2))
            }
        }
        Command::Run {
            config,
            check,
            jobs,
            seed,
            out,
        } => {
            let cfg = ScenarioConfig::load(&config)?;
            let options = RunOptions {
                jobs,
                seed,
                limits: SimLimits::from_env()?,
            };
            let start = Instant::now();
            let output = run(&cfg, &options)?;
            let elapsed = start.elapsed().as_secs_f64();
            let dir = out.or_else(|| cfg.out.as_ref().map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("."));
            for path in write_outputs(&output, &dir)? {
                eprintln!("wrote {}", path.display());
            }
            let mut ok = true;
            for c in &output.report.checks {
                println!("{}", c.line(Some(elapsed)));
                ok &= c.pass && !c.over_budget(Some(elapsed));
            }
            eprintln!("elapsed {elapsed:.2}s");
            Ok(if check && !ok { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
    }
}
