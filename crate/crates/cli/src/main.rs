use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use padefaber_cli::{load_config, plan, report, resolve_out_dir, run_and_write, OUT_ENV};

/// Simultaneous Padé-Faber approximants: run row sequences and check their rates.
#[derive(Parser)]
#[command(version)]
struct Cli {
    /// Worker threads for the row sweep (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a config and print the plan.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the row sequence and write tables and a summary.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Validate and print the plan without computing.
        #[arg(long)]
        dry_run: bool,
    },
    /// Re-fit rates from the tables of an earlier run.
    Report {
        /// Output directory of the run (or give its --config).
        #[arg(long, required_unless_present = "config")]
        out: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

const INVARIANT_VIOLATION: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: --jobs: {e}");
            return ExitCode::FAILURE;
        }
    }
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn execute(cli: Cli) -> anyhow::Result<ExitCode> {
    let env = std::env::var(OUT_ENV).ok();
    match cli.command {
        Command::Validate { config } => {
            let cfg = load_config(&config)?;
            let out = resolve_out_dir(None, &cfg, env.as_deref());
            print!("{}", plan(&cfg.build()?, &out));
            Ok(ExitCode::SUCCESS)
        }
        Command::Run { config, out, dry_run } => {
            let cfg = load_config(&config)?;
            let out = resolve_out_dir(out.as_deref(), &cfg, env.as_deref());
            if dry_run {
                print!("{}", plan(&cfg.build()?, &out));
                return Ok(ExitCode::SUCCESS);
            }
            let start = Instant::now();
            let outcome = run_and_write(&cfg, &out)?;
            if cli.verbose {
                eprintln!("{} rows in {:.2?}", outcome.report.records.len(), start.elapsed());
                for f in &outcome.files {
                    eprintln!("wrote {}", f.display());
                }
            }
            if outcome.violations.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                for v in &outcome.violations {
                    eprintln!("violation: {v}");
                }
                eprintln!("outputs in {} are flagged as partial", out.display());
                Ok(ExitCode::from(INVARIANT_VIOLATION))
            }
        }
        Command::Report { out, config } => {
            let dir = match (out, config) {
                (Some(dir), _) => dir,
                (None, Some(config)) => resolve_out_dir(None, &load_config(&config)?, env.as_deref()),
                (None, None) => unreachable!("clap requires one of --out and --config"),
            };
            print!("{}", report(&dir)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}
