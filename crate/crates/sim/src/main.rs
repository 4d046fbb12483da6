use std::path::PathBuf;
use std::process::ExitCode;

use afdm_sim::output::{emit_csv, write_meta};
use afdm_sim::{run_sweep_with_workers, ExperimentConfig, Result};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "afdm-sim",
    version,
    about = "Monte Carlo MSE/BER sweeps for superimposed-pilot AFDM"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep and write CSV plus a `.meta` file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Defaults to the config's `output`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Check a config and print the derived frame parameters.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Validate { config } => {
            let c = ExperimentConfig::load(&config)?;
            let d = c.validate()?;
            println!("Q = {}", d.guard);
            println!("c1 = {}", d.afdm.c1());
            println!("c2 = {}", d.afdm.c2());
            println!("max pilot count = {}", d.max_pilot_count);
            println!("config sha256 = {}", c.hash());
        }
        Command::Run {
            config,
            out,
            seed,
            trials,
            workers,
        } => {
            let mut c = ExperimentConfig::load(&config)?;
            if let Some(s) = seed {
                c.seed = s;
            }
            if let Some(t) = trials {
                c.trials = t;
            }
            let out = out.or_else(|| c.output.clone()).ok_or_else(|| {
                afdm_sim::SimError::Config("no output path: pass --out or set `output`".into())
            })?;
            c.validate()?;
            let records = run_sweep_with_workers(&c, workers)?;
            for r in &records {
                let ber = r
                    .ber
                    .map_or_else(|| "-".to_string(), |b| format!("{b:.3e}"));
                eprintln!(
                    "snr_d {:>6} dB  pilots {:>3}  iter {}  mse {:.4e} ± {:.1e}  ber {}  ({:.1}s)",
                    r.snr_d_db,
                    r.pilot_count,
                    r.iterations,
                    r.mse,
                    1.96 * r.mse_std_err,
                    ber,
                    r.wall_time
                );
            }
            emit_csv(&records, c.seed, &out)?;
            let meta = write_meta(&c, &out)?;
            eprintln!("wrote {} and {}", out.display(), meta.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
