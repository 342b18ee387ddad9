use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qfibounds::{run, with_thread_cap, ExperimentConfig, Format};
use qfibounds_core::BoundId;

#[derive(Parser)]
#[command(name = "qfibounds", version, about = "Seeded certification runs for QFI and SLD bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        /// Output directory (overrides `output_dir`).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Print every bound id with the inequality it checks.
    ListBounds,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::ListBounds => {
            for id in BoundId::ALL {
                println!("{:<28} {}", id.as_str(), id.statement());
            }
            ExitCode::SUCCESS
        }
        Command::Run { config, seed, samples, out, format } => {
            let result = ExperimentConfig::from_file(&config).and_then(|mut cfg| {
                cfg.seed = seed.unwrap_or(cfg.seed);
                cfg.samples = samples.unwrap_or(cfg.samples);
                cfg.output_dir = out.unwrap_or(cfg.output_dir);
                cfg.format = format.unwrap_or(cfg.format);
                cfg.validate()?;
                with_thread_cap(|| run(&cfg))?
            });
            match result {
                Ok((manifest, _)) => {
                    println!(
                        "{}: {} reports, {} violations, {} errors, {:.2}s -> {}",
                        manifest.experiment,
                        manifest.summary.total_reports,
                        manifest.summary.total_violations,
                        manifest.total_errors,
                        manifest.wall_time_seconds,
                        manifest.config.output_dir.display()
                    );
                    for note in &manifest.notes {
                        println!("  {note}");
                    }
                    if manifest.is_clean() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
    }
}
