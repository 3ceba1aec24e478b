use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use stage_ctl_bench::{run_bench, tune_grid, BenchError, BenchSpec, GridSpec};
use stage_ctl_core::controllers::{gain_check, ControllerConfig};

/// Wafer-stage controller benchmark.
#[derive(Parser)]
#[command(name = "bench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every controller × case × seed and write traces and a summary.
    Run {
        /// Bench spec (TOML).
        spec: PathBuf,
        /// Run this single seed instead of the file's list.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory, overriding `output_dir`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the fully resolved spec and exit.
        #[arg(long)]
        dump_config: bool,
    },
    /// Grid-search one controller's gains on Case 1.
    Tune {
        /// Controller kind: pid, smc, fosta or ann-fsa.
        controller: String,
        /// Grid file (TOML).
        grid: PathBuf,
        /// Override the noise seed of the evaluation runs.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check super-twisting gains against the stability conditions.
    CheckGains {
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        h1: f64,
        #[arg(long)]
        h2: f64,
    },
}

const EXIT_CONFIG: u8 = 1;
const EXIT_FAULT: u8 = 2;

fn run(cli: Cli) -> Result<ExitCode, BenchError> {
    match cli.command {
        Command::Run {
            spec,
            seed,
            out,
            dump_config,
        } => {
            let mut spec = BenchSpec::load(&spec)?;
            if let Some(s) = seed {
                spec.seeds = vec![s];
            }
            if let Some(o) = out {
                spec.output_dir = o;
            }
            if dump_config {
                print!("{}", spec.to_toml());
                return Ok(ExitCode::SUCCESS);
            }
            let report = run_bench(&spec)?;
            print!("{}", report.summary_text());
            println!("\nwrote {}", spec.output_dir.display());
            Ok(if report.any_fault() {
                ExitCode::from(EXIT_FAULT)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Tune {
            controller,
            grid,
            seed,
        } => {
            let base: ControllerConfig = toml::from_str(&format!("kind = {controller:?}"))
                .map_err(|_| BenchError::Invalid(format!("unknown controller {controller:?}")))?;
            let mut grid = GridSpec::load(&grid)?;
            if let Some(s) = seed {
                grid.base.seed = s;
            }
            let result = tune_grid(&base, &grid)?;
            let best = &result.best;
            println!(
                "evaluated {} points, {} faulted",
                result.evaluated.len(),
                result.faulted()
            );
            for (name, v) in &best.params {
                println!("{name} = {v}");
            }
            println!("rms_um = {:.6}", best.rms_um.unwrap_or(f64::NAN));
            println!("peak_um = {:.6}", best.peak_um.unwrap_or(f64::NAN));
            println!(
                "\n[[controllers]]\n{}",
                toml::to_string(&best.config).expect("controller serializes")
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckGains { rho, h1, h2 } => {
            let g = gain_check(rho, h1, h2)?;
            println!("h1_min = {:.12}", g.h1_min);
            println!("h2_required = {:.12}", g.h2_required);
            println!("satisfied = {}", g.satisfied);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}
