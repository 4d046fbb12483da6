//! Experiment configuration.
//!
//! Config files are flat TOML key/value documents whose keys mirror the
//! [`ExperimentConfig`] fields:
//!
//! ```toml
//! n_subcarriers = 512
//! alpha_max = 2
//! l_max = 2
//! paths = 3
//! snr_p_db = 50.0
//! snr_d_db = [5.0, 10.0, 15.0, 21.0, 27.0, 33.0]
//! n0 = 1.0
//! pilot_counts = [1, 4, 16]
//! iterations = [1, 2, 3]
//! trials = 1000
//! seed = 2024
//! ```
//!
//! Optional keys: `c1` (must make `2·N·c1` an integer), `c2`,
//! `bits_per_symbol` (default 2), `output`, `noise_free`, `soft_feedback`,
//! `threshold`, `mp_max_iters`, `mp_damping`, `mp_tolerance`. A data SNR of
//! `-inf` sends no data at all.
//!
//! Powers follow `SNR_d = σ_d² / N_0` and `SNR_p = σ_p² / N_0`, where `σ_p²` is
//! the total pilot energy of the frame.

use std::fs;
use std::path::{Path, PathBuf};

use afdm_core::detection::MpParams;
use afdm_core::pilot::max_pilot_count;
use afdm_core::{AfdmConfig, ReceiverParams};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Result, SimError};

fn default_bits() -> usize {
    2
}

fn default_n0() -> f64 {
    1.0
}

fn default_trials() -> usize {
    1000
}

fn default_mp_iters() -> usize {
    MpParams::default().max_iters
}

fn default_damping() -> f64 {
    MpParams::default().damping
}

fn default_tolerance() -> f64 {
    MpParams::default().tolerance
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n_subcarriers: usize,
    pub alpha_max: usize,
    pub l_max: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c2: Option<f64>,
    #[serde(default = "default_bits")]
    pub bits_per_symbol: usize,
    /// Number of channel paths `P`.
    pub paths: usize,
    pub snr_p_db: f64,
    pub snr_d_db: Vec<f64>,
    #[serde(default = "default_n0")]
    pub n0: f64,
    pub pilot_counts: Vec<usize>,
    pub iterations: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Skip the channel AWGN; `n0` still sets the SNR reference and the
    /// receiver's noise model.
    #[serde(default)]
    pub noise_free: bool,
    #[serde(default)]
    pub soft_feedback: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default = "default_mp_iters")]
    pub mp_max_iters: usize,
    #[serde(default = "default_damping")]
    pub mp_damping: f64,
    #[serde(default = "default_tolerance")]
    pub mp_tolerance: f64,
}

/// Quantities derived from a validated config.
#[derive(Debug, Clone, PartialEq)]
pub struct Derived {
    pub afdm: AfdmConfig,
    pub guard: usize,
    pub max_pilot_count: usize,
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| SimError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    /// Baseline sweep: N = 512, QPSK, three paths, pilots at 50 dB.
    pub fn reference() -> Self {
        Self {
            n_subcarriers: 512,
            alpha_max: 2,
            l_max: 2,
            c1: None,
            c2: None,
            bits_per_symbol: 2,
            paths: 3,
            snr_p_db: 50.0,
            snr_d_db: vec![5.0, 10.0, 15.0, 21.0, 27.0, 33.0],
            n0: 1.0,
            pilot_counts: vec![1, 4, 16],
            iterations: vec![1, 2, 3],
            trials: default_trials(),
            seed: 0,
            output: None,
            noise_free: false,
            soft_feedback: false,
            threshold: None,
            mp_max_iters: default_mp_iters(),
            mp_damping: default_damping(),
            mp_tolerance: default_tolerance(),
        }
    }

    pub fn afdm_config(&self) -> Result<AfdmConfig> {
        let mut cfg = AfdmConfig::default_params(self.n_subcarriers, self.alpha_max, self.l_max)?;
        if let Some(c1) = self.c1 {
            cfg = cfg.with_c1(c1)?;
        }
        if let Some(c2) = self.c2 {
            cfg = cfg.with_c2(c2)?;
        }
        let cfg = AfdmConfig::new(
            cfg.n(),
            cfg.alpha_max(),
            cfg.l_max(),
            cfg.c1_steps(),
            cfg.c2(),
            self.bits_per_symbol,
        )?;
        cfg.check_grid()?;
        Ok(cfg)
    }

    /// Checks every invariant; nothing is simulated until this passes.
    pub fn validate(&self) -> Result<Derived> {
        let afdm = self.afdm_config()?;
        let bad = |msg: String| Err(SimError::Config(msg));
        if !(1..=2).contains(&self.bits_per_symbol) {
            return bad(format!(
                "bits_per_symbol = {} (1 or 2 supported)",
                self.bits_per_symbol
            ));
        }
        if self.paths == 0 || self.paths > self.l_max + 1 {
            return bad(format!(
                "paths = {} must lie in 1..={} (distinct delays)",
                self.paths,
                self.l_max + 1
            ));
        }
        if !(self.n0 > 0.0 && self.n0.is_finite()) {
            return bad(format!("n0 = {} must be positive", self.n0));
        }
        if !self.snr_p_db.is_finite() {
            return bad("snr_p_db must be finite".into());
        }
        if self.snr_d_db.is_empty()
            || self
                .snr_d_db
                .iter()
                .any(|s| s.is_nan() || *s == f64::INFINITY)
        {
            return bad("snr_d_db must be a non-empty list of finite values or -inf".into());
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.iterations.is_empty() || self.iterations.contains(&0) {
            return bad("iterations must be a non-empty list of positive counts".into());
        }
        let max = max_pilot_count(&afdm);
        if self.pilot_counts.is_empty() || self.pilot_counts.iter().any(|&p| p == 0 || p > max) {
            return bad(format!("pilot_counts must lie in 1..={max}"));
        }
        if let Some(t) = self.threshold {
            if !(t >= 0.0 && t.is_finite()) {
                return bad(format!("threshold = {t} must be nonnegative"));
            }
        }
        self.receiver_params(1).detector.validate()?;
        Ok(Derived {
            guard: afdm.guard(),
            max_pilot_count: max,
            afdm,
        })
    }

    pub fn sigma_p2(&self) -> f64 {
        self.n0 * db_to_linear(self.snr_p_db)
    }

    pub fn sigma_d2(&self, snr_d_db: f64) -> f64 {
        self.n0 * db_to_linear(snr_d_db)
    }

    pub fn max_iterations(&self) -> usize {
        self.iterations.iter().copied().max().unwrap_or(1)
    }

    pub fn receiver_params(&self, max_iters: usize) -> ReceiverParams {
        ReceiverParams {
            max_iters,
            detector: MpParams {
                max_iters: self.mp_max_iters,
                damping: self.mp_damping,
                tolerance: self.mp_tolerance,
            },
            soft_feedback: self.soft_feedback,
            threshold: self.threshold,
            ..ReceiverParams::default()
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the canonical TOML form.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml().as_bytes()))
    }
}
