//! Configuration-driven Monte Carlo sweeps for the `afdm-core` link,
//! producing MSE and BER curves as CSV.

pub mod config;
pub mod error;
pub mod output;
pub mod sweep;

pub use config::ExperimentConfig;
pub use error::{Result, SimError};
pub use sweep::{run_sweep, run_sweep_with_workers, SweepRecord};
