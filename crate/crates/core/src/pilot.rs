//! Superimposed pilots.
//!
//! Pilots are added on top of the data symbols in the DAFT domain, with no
//! guard symbols removed from the data. `M+1` real pilots of amplitude
//! `σ_p/√(M+1)` sit at indices `0, Q+1, …, M(Q+1)`, so every pilot is
//! surrounded by at least `Q` pilot-free positions on each side (cyclically).
//! That spacing is what keeps the pilot observation matrix orthogonal.

use num_complex::Complex64;

use crate::daft::{AfdmConfig, DaftFrame};
use crate::error::{check_len, AfdmError, Result};

/// Guard width `Q = (l_max+1)(2·alpha_max+1) - 1`.
pub fn guard_q(cfg: &AfdmConfig) -> usize {
    cfg.guard()
}

/// Largest pilot count `M+1` with `M(Q+1) < N - Q`.
pub fn max_pilot_count(cfg: &AfdmConfig) -> usize {
    let q = cfg.guard();
    (cfg.n() - q - 1) / (q + 1) + 1
}

/// Placement and power of the superimposed pilots.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotConfig {
    pilot_count: usize,
    pilot_power: f64,
    guard: usize,
    indices: Vec<usize>,
}

impl PilotConfig {
    /// Equally spaced grid of `pilot_count` pilots with total energy
    /// `pilot_power` (`x_pᴴ x_p = σ_p²`).
    pub fn new(pilot_count: usize, pilot_power: f64, cfg: &AfdmConfig) -> Result<Self> {
        if pilot_count == 0 {
            return Err(AfdmError::InvalidPilot(
                "at least one pilot required".into(),
            ));
        }
        let q = cfg.guard();
        let last = (pilot_count - 1) * (q + 1);
        if last + q >= cfg.n() {
            return Err(AfdmError::InvalidPilot(format!(
                "{pilot_count} pilots need M(Q+1) = {last} < N - Q = {}",
                cfg.n() as i64 - q as i64
            )));
        }
        let indices = (0..pilot_count).map(|i| i * (q + 1)).collect();
        Self::with_indices(indices, pilot_power, cfg)
    }

    /// Arbitrary placement, accepted only if every pair of pilots is at least
    /// `Q+1` apart cyclically.
    pub fn with_indices(indices: Vec<usize>, pilot_power: f64, cfg: &AfdmConfig) -> Result<Self> {
        if indices.is_empty() {
            return Err(AfdmError::InvalidPilot(
                "at least one pilot required".into(),
            ));
        }
        if !(pilot_power >= 0.0 && pilot_power.is_finite()) {
            return Err(AfdmError::InvalidPilot(format!(
                "pilot power {pilot_power}"
            )));
        }
        let n = cfg.n();
        let q = cfg.guard();
        let mut sorted = indices.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != indices.len() || sorted.iter().any(|&i| i >= n) {
            return Err(AfdmError::InvalidPilot(format!("bad indices {indices:?}")));
        }
        if sorted.len() > 1 {
            let wrap = n + sorted[0] - sorted[sorted.len() - 1];
            let tight = sorted
                .windows(2)
                .map(|w| w[1] - w[0])
                .chain([wrap])
                .min()
                .unwrap();
            if tight <= q {
                return Err(AfdmError::InvalidPilot(format!(
                    "pilot spacing {tight} leaves fewer than Q = {q} guards"
                )));
            }
        }
        Ok(Self {
            pilot_count: indices.len(),
            pilot_power,
            guard: q,
            indices,
        })
    }

    pub fn pilot_count(&self) -> usize {
        self.pilot_count
    }

    /// Total pilot energy `σ_p²`.
    pub fn pilot_power(&self) -> f64 {
        self.pilot_power
    }

    pub fn guard(&self) -> usize {
        self.guard
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn amplitude(&self) -> f64 {
        (self.pilot_power / self.pilot_count as f64).sqrt()
    }
}

/// The pilot frame `x_p`.
pub fn build_pilot_vector(pc: &PilotConfig, cfg: &AfdmConfig) -> Result<DaftFrame> {
    if pc.guard() != cfg.guard() {
        return Err(AfdmError::InvalidPilot(format!(
            "pilot config built for Q = {}, frame has Q = {}",
            pc.guard(),
            cfg.guard()
        )));
    }
    // re-validates the placement against this frame length
    let pc = PilotConfig::with_indices(pc.indices().to_vec(), pc.pilot_power(), cfg)?;
    let mut x = DaftFrame::zeros(cfg.n());
    let amp = Complex64::new(pc.amplitude(), 0.0);
    for &i in pc.indices() {
        x[i] = amp;
    }
    Ok(x)
}

/// `x = x_p + x_d`.
pub fn superimpose(x_p: &[Complex64], x_d: &[Complex64]) -> Result<DaftFrame> {
    check_len(x_p.len(), x_d.len())?;
    Ok(x_p
        .iter()
        .zip(x_d)
        .map(|(a, b)| a + b)
        .collect::<Vec<_>>()
        .into())
}
