//! Monte Carlo sweep over data SNR, pilot count and receiver iterations.
//!
//! Trial `i` draws everything from a ChaCha8 stream keyed by `(seed, i)`, in
//! the fixed order channel, bits, noise. The stream does not depend on the
//! SNR or the pilot count, so every sweep point sees the same channels and
//! noise (common random numbers) and results do not depend on scheduling.

use std::time::Instant;

use afdm_core::channel::{apply_time_domain, sample_channel};
use afdm_core::detection::modulate_bits;
use afdm_core::pilot::superimpose;
use afdm_core::{
    AfdmConfig, ChannelPrior, Complex64, Daft, PilotConfig, Receiver, ReceiverReport,
    SymbolAlphabet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::Result;

/// Per-trial figures of merit for one receiver iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    /// `‖ĥ - h‖²` over the full grid, with undetected taps zeroed.
    pub sq_error: f64,
    pub bit_errors: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub snr_d_db: f64,
    pub pilot_count: usize,
    pub iterations: usize,
    pub trials: usize,
    pub mse: f64,
    /// Standard error of `mse`.
    pub mse_std_err: f64,
    /// `None` when no data bits were sent.
    pub ber: Option<f64>,
    pub wall_time: f64,
}

impl SweepRecord {
    /// Normal-approximation 95% interval for the mean MSE.
    pub fn mse_ci95(&self) -> (f64, f64) {
        let half = 1.96 * self.mse_std_err;
        (self.mse - half, self.mse + half)
    }
}

pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Everything one trial needs that does not change across trials.
pub struct PointSetup<'a> {
    pub cfg: &'a AfdmConfig,
    pub transform: &'a Daft,
    pub receiver: &'a Receiver,
    pub alphabet: &'a SymbolAlphabet,
    pub paths: usize,
    pub sigma_d2: f64,
    pub n0: f64,
    pub noise_free: bool,
}

/// Runs one frame and reports the outcome after each requested iteration
/// count, in the order of `iterations`.
pub fn run_trial(
    setup: &PointSetup<'_>,
    seed: u64,
    trial: usize,
    iterations: &[usize],
) -> Result<Vec<TrialOutcome>> {
    let cfg = setup.cfg;
    let n = cfg.n();
    let mut rng = trial_rng(seed, trial);
    let channel = sample_channel(&mut rng, setup.paths, cfg)?;
    let bits: Vec<bool> = (0..n * setup.alphabet.bits_per_symbol())
        .map(|_| rng.random())
        .collect();
    let send_data = setup.sigma_d2 > 0.0;
    let x_d = if send_data {
        modulate_bits(&bits, setup.alphabet, setup.sigma_d2.sqrt())?
    } else {
        vec![Complex64::new(0.0, 0.0); n].into()
    };
    let x = superimpose(setup.receiver.pilot(), &x_d)?;
    let s = setup.transform.inverse(&x)?;
    let noise = if setup.noise_free { 0.0 } else { setup.n0 };
    let r = apply_time_domain(&s, &channel, cfg, noise, &mut rng)?;
    let y = setup.transform.forward(&r)?;

    let report = setup.receiver.run(&y)?;
    let h = channel.grid_vector(cfg)?;
    Ok(iterations
        .iter()
        .map(|&k| outcome(&report, k, &h, &bits, setup.alphabet, send_data))
        .collect())
}

fn outcome(
    report: &ReceiverReport,
    k: usize,
    h: &[Complex64],
    bits: &[bool],
    alphabet: &SymbolAlphabet,
    send_data: bool,
) -> TrialOutcome {
    let rec = report.at(k).expect("receiver ran at least once");
    let sq_error = rec
        .estimate
        .masked()
        .iter()
        .zip(h)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum();
    let bit_errors = if send_data {
        alphabet
            .indices_to_bits(&rec.decisions)
            .iter()
            .zip(bits)
            .filter(|(a, b)| a != b)
            .count()
    } else {
        0
    };
    TrialOutcome {
        sq_error,
        bit_errors,
    }
}

/// Runs every trial of one (SNR_d, pilot count) point. Returns one record
/// per entry of `config.iterations`.
pub fn run_point(
    config: &ExperimentConfig,
    cfg: &AfdmConfig,
    snr_d_db: f64,
    pilot_count: usize,
) -> Result<Vec<SweepRecord>> {
    let start = Instant::now();
    let sigma_d2 = config.sigma_d2(snr_d_db);
    let pc = PilotConfig::new(pilot_count, config.sigma_p2(), cfg)?;
    let prior = ChannelPrior::uniform(cfg.grid_size());
    let params = config.receiver_params(config.max_iterations());
    let receiver = Receiver::new(cfg, &pc, &prior, sigma_d2, config.n0, params)?;
    let alphabet = SymbolAlphabet::for_bits(config.bits_per_symbol)?;
    let transform = Daft::new(cfg);
    let setup = PointSetup {
        cfg,
        transform: &transform,
        receiver: &receiver,
        alphabet: &alphabet,
        paths: config.paths,
        sigma_d2,
        n0: config.n0,
        noise_free: config.noise_free,
    };

    // Collected in trial order, so the reductions below are deterministic.
    let per_trial: Vec<Vec<TrialOutcome>> = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(&setup, config.seed, t, &config.iterations))
        .collect::<Result<_>>()?;
    let wall_time = start.elapsed().as_secs_f64();

    let trials = config.trials as f64;
    let total_bits = config.trials * cfg.n() * alphabet.bits_per_symbol();
    Ok(config
        .iterations
        .iter()
        .enumerate()
        .map(|(j, &k)| {
            let mse = per_trial.iter().map(|o| o[j].sq_error).sum::<f64>() / trials;
            let var = if config.trials > 1 {
                per_trial
                    .iter()
                    .map(|o| (o[j].sq_error - mse).powi(2))
                    .sum::<f64>()
                    / (trials - 1.0)
            } else {
                0.0
            };
            let errors: usize = per_trial.iter().map(|o| o[j].bit_errors).sum();
            SweepRecord {
                snr_d_db,
                pilot_count,
                iterations: k,
                trials: config.trials,
                mse,
                mse_std_err: (var / trials).sqrt(),
                ber: (sigma_d2 > 0.0).then(|| errors as f64 / total_bits as f64),
                wall_time,
            }
        })
        .collect())
}

/// Full sweep on the ambient rayon pool. Records are ordered by SNR_d, then
/// pilot count, then iterations, following the config lists.
pub fn run_sweep(config: &ExperimentConfig) -> Result<Vec<SweepRecord>> {
    let cfg = config.validate()?.afdm;
    let mut records = Vec::new();
    for &snr in &config.snr_d_db {
        for &pilots in &config.pilot_counts {
            records.extend(run_point(config, &cfg, snr, pilots)?);
        }
    }
    Ok(records)
}

/// [`run_sweep`] on a dedicated pool of `workers` threads (0 = rayon default).
pub fn run_sweep_with_workers(
    config: &ExperimentConfig,
    workers: usize,
) -> Result<Vec<SweepRecord>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()?;
    pool.install(|| run_sweep(config))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        ExperimentConfig {
            n_subcarriers: 64,
            snr_d_db: vec![10.0],
            pilot_counts: vec![1, 4],
            iterations: vec![1, 2],
            trials: 8,
            seed: 3,
            ..ExperimentConfig::reference()
        }
    }

    #[test]
    fn trial_streams_are_independent_of_order() {
        let a: Vec<u64> = (0..4).map(|t| trial_rng(9, t).random()).collect();
        let b: Vec<u64> = (0..4).rev().map(|t| trial_rng(9, t).random()).collect();
        assert_eq!(a, b.into_iter().rev().collect::<Vec<_>>());
        assert_ne!(a[0], a[1]);
        assert_ne!(
            trial_rng(9, 0).random::<u64>(),
            trial_rng(10, 0).random::<u64>()
        );
    }

    #[test]
    fn records_follow_config_order() {
        let recs = run_sweep(&small()).unwrap();
        let keys: Vec<(usize, usize)> =
            recs.iter().map(|r| (r.pilot_count, r.iterations)).collect();
        assert_eq!(keys, vec![(1, 1), (1, 2), (4, 1), (4, 2)]);
        for r in &recs {
            assert!(r.mse >= 0.0 && r.mse.is_finite());
            let ber = r.ber.unwrap();
            assert!((0.0..=1.0).contains(&ber));
            assert_eq!(r.trials, 8);
        }
    }

    #[test]
    fn no_data_means_no_ber() {
        let config = ExperimentConfig {
            snr_d_db: vec![f64::NEG_INFINITY],
            pilot_counts: vec![1],
            iterations: vec![1],
            trials: 1,
            noise_free: true,
            ..small()
        };
        let recs = run_sweep(&config).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].ber, None);
        assert!(recs[0].mse < 1e-6, "mse {}", recs[0].mse);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let one = run_sweep_with_workers(&small(), 1).unwrap();
        let three = run_sweep_with_workers(&small(), 3).unwrap();
        for (a, b) in one.iter().zip(&three) {
            assert_eq!(a.mse.to_bits(), b.mse.to_bits());
            assert_eq!(a.ber, b.ber);
        }
    }
}
