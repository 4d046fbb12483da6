//! Iterative channel estimation and data detection.
//!
//! Iteration 1 estimates the channel from the raw frame, cancels the pilot
//! through the estimated channel and detects the data with message passing.
//! Each later iteration first strips the re-synthesized data interference
//! `Ĥⁱ x̂_dⁱ` from the frame, re-estimates and re-thresholds the channel, and
//! detects again from `y − Ĥⁱ⁺¹ x_p`.

use num_complex::Complex64;

use crate::daft::{AfdmConfig, DaftFrame};
use crate::detection::{cancel_pilots, mp_detect_profiled, MpParams, SymbolAlphabet};
use crate::error::{check_len, AfdmError, Result};
use crate::estimation::{
    assemble_from_taps, build_phi_p, default_threshold, effective_noise_variance, grid_taps,
    ChannelPrior, EstimationResult, MmseEstimator,
};
use crate::pilot::{build_pilot_vector, PilotConfig};
use crate::sparse::{SparseChannel, Tap};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceiverParams {
    pub max_iters: usize,
    pub detector: MpParams,
    /// Stop early once `‖ĥⁱ⁺¹ − ĥⁱ‖∞` falls below this.
    pub stop_tolerance: f64,
    /// Feed posterior-mean symbols back instead of hard decisions.
    pub soft_feedback: bool,
    /// Overrides the default `3 √(σ_ŵ²/σ_p²)` path threshold.
    pub threshold: Option<f64>,
    /// Let the detector see the channel-estimation error: each observation's
    /// noise variance becomes `N_0 + Σ_t b_t var(ĥ_t) (|x_p|² + σ_d²)` at that
    /// row instead of plain `N_0`. The residual pilot left after cancellation
    /// is concentrated on a few rows, and ignoring it there misleads MP.
    pub error_aware_noise: bool,
}

impl Default for ReceiverParams {
    fn default() -> Self {
        Self {
            max_iters: 2,
            detector: MpParams::default(),
            stop_tolerance: 1e-6,
            soft_feedback: false,
            threshold: None,
            error_aware_noise: true,
        }
    }
}

/// Everything produced by one pass of the loop.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub estimate: EstimationResult,
    /// Hard symbol decisions (alphabet indices); empty when no data is sent.
    pub decisions: Vec<usize>,
    /// `‖y_d − Ĥ x̂_d‖₂` after detection.
    pub residual_norm: f64,
    pub detector_converged: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReceiverReport {
    pub iterations: Vec<IterationRecord>,
}

impl ReceiverReport {
    pub fn iteration_count(&self) -> usize {
        self.iterations.len()
    }

    /// Record of iteration `k` (1-based). Runs that stopped early repeat
    /// their final record.
    pub fn at(&self, k: usize) -> Option<&IterationRecord> {
        if k == 0 {
            return None;
        }
        self.iterations.get(k.min(self.iterations.len()) - 1)
    }

    pub fn last(&self) -> Option<&IterationRecord> {
        self.iterations.last()
    }
}

/// A receiver prepared for one pilot configuration and link budget. The
/// pilot matrix and grid subchannels are computed once; `run` takes `&self`
/// and can be called from many threads.
#[derive(Debug, Clone)]
pub struct Receiver {
    n: usize,
    x_p: DaftFrame,
    taps: Vec<Tap>,
    estimator: MmseEstimator,
    alphabet: SymbolAlphabet,
    sigma_d: f64,
    n0: f64,
    threshold: f64,
    params: ReceiverParams,
}

impl Receiver {
    pub fn new(
        cfg: &AfdmConfig,
        pc: &PilotConfig,
        prior: &ChannelPrior,
        sigma_d2: f64,
        n0: f64,
        params: ReceiverParams,
    ) -> Result<Self> {
        if params.max_iters == 0 {
            return Err(AfdmError::InvalidConfig(
                "receiver needs max_iters >= 1".into(),
            ));
        }
        if !(sigma_d2 >= 0.0 && n0 > 0.0) {
            return Err(AfdmError::InvalidConfig(format!(
                "need σ_d² >= 0 and N_0 > 0, got {sigma_d2} and {n0}"
            )));
        }
        params.detector.validate()?;
        check_len(cfg.grid_size(), prior.len())?;
        let x_p = build_pilot_vector(pc, cfg)?;
        let sigma_w2 = effective_noise_variance(prior, sigma_d2, n0);
        let estimator = MmseEstimator::new(build_phi_p(&x_p, cfg)?, prior, sigma_w2)?;
        let threshold = match params.threshold {
            Some(t) => t,
            None => default_threshold(sigma_w2, pc.pilot_power())?,
        };
        Ok(Self {
            n: cfg.n(),
            x_p,
            taps: grid_taps(cfg)?,
            estimator,
            alphabet: SymbolAlphabet::for_bits(cfg.bits_per_symbol())?,
            sigma_d: sigma_d2.sqrt(),
            n0,
            threshold,
            params,
        })
    }

    pub fn pilot(&self) -> &DaftFrame {
        &self.x_p
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn alphabet(&self) -> &SymbolAlphabet {
        &self.alphabet
    }

    pub fn params(&self) -> &ReceiverParams {
        &self.params
    }

    pub fn run(&self, y: &[Complex64]) -> Result<ReceiverReport> {
        check_len(self.n, y.len())?;
        let zero = Complex64::new(0.0, 0.0);
        let points = self.alphabet.scaled(self.sigma_d);
        let mut report = ReceiverReport::default();
        let mut interference = vec![zero; self.n];
        let mut previous: Option<Vec<Complex64>> = None;

        for _ in 0..self.params.max_iters {
            let observed: Vec<Complex64> =
                y.iter().zip(&interference).map(|(a, b)| a - b).collect();
            let estimate =
                EstimationResult::new(self.estimator.estimate(&observed)?, self.threshold);
            let h_eff =
                assemble_from_taps(&estimate.h_hat, &estimate.indicators, &self.taps, self.n)?;
            let y_d = cancel_pilots(y, &h_eff, &self.x_p)?;

            let (decisions, symbols, converged) = if self.sigma_d > 0.0 {
                let noise = self.noise_profile(&estimate.indicators);
                self.detect(&y_d, &h_eff, &points, &noise)?
            } else {
                (Vec::new(), vec![zero; self.n], true)
            };
            interference = h_eff.apply(&symbols)?;
            let residual_norm = y_d
                .iter()
                .zip(&interference)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();

            let change = previous.as_ref().map(|p| {
                p.iter()
                    .zip(&estimate.h_hat)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max)
            });
            previous = Some(estimate.h_hat.clone());
            report.iterations.push(IterationRecord {
                estimate,
                decisions,
                residual_norm,
                detector_converged: converged,
            });
            if change.is_some_and(|c| c < self.params.stop_tolerance) {
                break;
            }
        }
        Ok(report)
    }

    /// Per-row noise variance handed to the detector.
    pub fn noise_profile(&self, indicators: &[bool]) -> Vec<f64> {
        let mut noise = vec![self.n0; self.n];
        if !self.params.error_aware_noise {
            return noise;
        }
        let sigma_d2 = self.sigma_d * self.sigma_d;
        let err = self.estimator.error_variances();
        for ((tap, &e), _) in self
            .taps
            .iter()
            .zip(err)
            .zip(indicators)
            .filter(|(_, &b)| b)
        {
            for (m, v) in noise.iter_mut().enumerate() {
                *v += e * (self.x_p[tap.column(m)].norm_sqr() + sigma_d2);
            }
        }
        noise
    }

    /// Runs MP and returns (decisions, symbols fed back, converged).
    fn detect(
        &self,
        y_d: &[Complex64],
        h_eff: &SparseChannel,
        points: &SymbolAlphabet,
        noise: &[f64],
    ) -> Result<(Vec<usize>, Vec<Complex64>, bool)> {
        let out = mp_detect_profiled(y_d, h_eff, points, noise, &self.params.detector)?;
        let symbols = if self.params.soft_feedback {
            out.posteriors
                .chunks(points.len())
                .map(|p| p.iter().zip(points.points()).map(|(w, s)| s * *w).sum())
                .collect()
        } else {
            out.decisions.iter().map(|&i| points.points()[i]).collect()
        };
        Ok((out.decisions, symbols, out.converged))
    }
}

/// One-shot convenience wrapper around [`Receiver`].
pub fn run_receiver(
    y: &[Complex64],
    pc: &PilotConfig,
    prior: &ChannelPrior,
    cfg: &AfdmConfig,
    sigma_d2: f64,
    n0: f64,
    params: ReceiverParams,
) -> Result<ReceiverReport> {
    Receiver::new(cfg, pc, prior, sigma_d2, n0, params)?.run(y)
}
