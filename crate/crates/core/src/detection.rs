//! Symbol mapping, pilot cancellation and data detection.
//!
//! QPSK uses the Gray map below (first bit on the in-phase axis, second bit on
//! the quadrature axis), scaled by `σ_d` so each symbol carries energy `σ_d²`:
//!
//! | bits | symbol            |
//! |------|-------------------|
//! | 00   | `( 1 + j) / √2`   |
//! | 01   | `( 1 - j) / √2`   |
//! | 10   | `(-1 + j) / √2`   |
//! | 11   | `(-1 - j) / √2`   |
//!
//! Detection runs message passing (MP) on the factor graph of the sparse
//! effective channel. Each observation node approximates the interference
//! from the other symbols it sees as Gaussian and sends a mean/variance
//! message; each variable node returns a damped probability vector over the
//! alphabet. [`exact_map_oracle`] enumerates every candidate frame and is
//! only usable on tiny instances.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::daft::DaftFrame;
use crate::error::{check_len, AfdmError, Result};
use crate::sparse::SparseChannel;

/// A labelled constellation. `points[i]` carries the bit label `i`
/// (most significant bit first).
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolAlphabet {
    points: Vec<Complex64>,
    bits_per_symbol: usize,
}

impl SymbolAlphabet {
    pub fn new(points: Vec<Complex64>) -> Result<Self> {
        let m = points.len();
        if m < 2 || !m.is_power_of_two() {
            return Err(AfdmError::InvalidConfig(format!(
                "alphabet size {m} is not a power of two >= 2"
            )));
        }
        Ok(Self {
            bits_per_symbol: m.trailing_zeros() as usize,
            points,
        })
    }

    /// Gray-mapped QPSK with unit average energy.
    pub fn qpsk() -> Self {
        let s = FRAC_1_SQRT_2;
        Self {
            points: vec![
                Complex64::new(s, s),
                Complex64::new(s, -s),
                Complex64::new(-s, s),
                Complex64::new(-s, -s),
            ],
            bits_per_symbol: 2,
        }
    }

    pub fn bpsk() -> Self {
        Self {
            points: vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
            bits_per_symbol: 1,
        }
    }

    /// Constellation for the given bits per symbol (1 or 2).
    pub fn for_bits(bits_per_symbol: usize) -> Result<Self> {
        match bits_per_symbol {
            1 => Ok(Self::bpsk()),
            2 => Ok(Self::qpsk()),
            b => Err(AfdmError::InvalidConfig(format!(
                "unsupported bits_per_symbol {b}"
            ))),
        }
    }

    /// Same labelling with every point multiplied by `scale`.
    pub fn scaled(&self, scale: f64) -> Self {
        Self {
            points: self.points.iter().map(|p| p * scale).collect(),
            bits_per_symbol: self.bits_per_symbol,
        }
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    pub fn average_energy(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / self.points.len() as f64
    }

    pub fn nearest(&self, z: Complex64) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, p) in self.points.iter().enumerate() {
            let d = (z - p).norm_sqr();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }

    /// Packs groups of `bits_per_symbol` bits into symbol indices.
    pub fn bits_to_indices(&self, bits: &[bool]) -> Result<Vec<usize>> {
        let b = self.bits_per_symbol;
        if !bits.len().is_multiple_of(b) {
            return Err(AfdmError::LengthMismatch {
                expected: bits.len().div_ceil(b) * b,
                actual: bits.len(),
            });
        }
        Ok(bits
            .chunks(b)
            .map(|c| c.iter().fold(0usize, |acc, &bit| (acc << 1) | bit as usize))
            .collect())
    }

    pub fn indices_to_bits(&self, indices: &[usize]) -> Vec<bool> {
        let b = self.bits_per_symbol;
        indices
            .iter()
            .flat_map(|&i| (0..b).rev().map(move |k| (i >> k) & 1 == 1))
            .collect()
    }
}

/// Maps bits to a DAFT-domain data frame with per-symbol energy `σ_d²`.
pub fn modulate_bits(bits: &[bool], alphabet: &SymbolAlphabet, sigma_d: f64) -> Result<DaftFrame> {
    let idx = alphabet.bits_to_indices(bits)?;
    Ok(idx
        .into_iter()
        .map(|i| alphabet.points()[i] * sigma_d)
        .collect::<Vec<_>>()
        .into())
}

/// Symbol-wise nearest-point slicing back to bits.
pub fn demodulate_hard(frame: &[Complex64], alphabet: &SymbolAlphabet, sigma_d: f64) -> Vec<bool> {
    let scaled = alphabet.scaled(sigma_d);
    let idx: Vec<usize> = frame.iter().map(|z| scaled.nearest(*z)).collect();
    alphabet.indices_to_bits(&idx)
}

/// `y_d = y − Ĥ_eff x_p`.
pub fn cancel_pilots(
    y: &[Complex64],
    h_eff_hat: &SparseChannel,
    x_p: &[Complex64],
) -> Result<DaftFrame> {
    check_len(h_eff_hat.n(), y.len())?;
    let hp = h_eff_hat.apply(x_p)?;
    Ok(y.iter()
        .zip(&hp)
        .map(|(a, b)| a - b)
        .collect::<Vec<_>>()
        .into())
}

/// Message-passing detector settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpParams {
    pub max_iters: usize,
    /// Weight of the new message in `p = Δ·new + (1−Δ)·old`; 1 disables damping.
    pub damping: f64,
    /// Early stop once no posterior probability moves by more than this.
    pub tolerance: f64,
}

impl Default for MpParams {
    fn default() -> Self {
        Self {
            max_iters: 30,
            damping: 0.6,
            tolerance: 1e-4,
        }
    }
}

impl MpParams {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(AfdmError::InvalidConfig(
                "MP needs at least one iteration".into(),
            ));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(AfdmError::InvalidConfig(format!(
                "MP damping {} outside (0, 1]",
                self.damping
            )));
        }
        Ok(())
    }
}

/// Result of [`mp_detect`].
#[derive(Debug, Clone, PartialEq)]
pub struct MpOutput {
    /// Hard decisions as alphabet indices.
    pub decisions: Vec<usize>,
    /// Row-major `N × |A|` symbol posteriors at the last iteration.
    pub posteriors: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Posterior mass above which a symbol counts as settled when picking the
/// best iterate.
const CONFIDENT: f64 = 0.99;

/// Message-passing state for one frame; [`MessagePassing::step`] runs one
/// iteration.
#[derive(Debug, Clone)]
pub struct MessagePassing<'a> {
    y: &'a [Complex64],
    h: &'a SparseChannel,
    points: &'a [Complex64],
    /// Noise variance of each observation.
    noise: Vec<f64>,
    damping: f64,
    /// Variable-to-observation messages, indexed `(tap·N + row)·|A| + a`.
    messages: Vec<f64>,
    posteriors: Vec<f64>,
    // scratch, indexed by edge
    edge_mean: Vec<Complex64>,
    edge_var: Vec<f64>,
    iterations: usize,
}

impl<'a> MessagePassing<'a> {
    /// `points` is the alphabet already scaled to the transmitted energy.
    pub fn new(
        y: &'a [Complex64],
        h: &'a SparseChannel,
        points: &'a [Complex64],
        n0: f64,
        damping: f64,
    ) -> Result<Self> {
        Self::with_noise_profile(y, h, points, vec![n0; y.len()], damping)
    }

    /// Like [`MessagePassing::new`] with a separate noise variance per
    /// observation.
    pub fn with_noise_profile(
        y: &'a [Complex64],
        h: &'a SparseChannel,
        points: &'a [Complex64],
        noise: Vec<f64>,
        damping: f64,
    ) -> Result<Self> {
        check_len(h.n(), y.len())?;
        check_len(h.n(), noise.len())?;
        if let Some(v) = noise.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(AfdmError::InvalidConfig(format!(
                "MP noise variance {v} must be positive"
            )));
        }
        if points.is_empty() {
            return Err(AfdmError::InvalidConfig("empty alphabet".into()));
        }
        let n = h.n();
        let a = points.len();
        let edges = h.taps().len() * n;
        Ok(Self {
            y,
            h,
            points,
            noise,
            damping,
            messages: vec![1.0 / a as f64; edges * a],
            posteriors: vec![1.0 / a as f64; n * a],
            edge_mean: vec![Complex64::new(0.0, 0.0); edges],
            edge_var: vec![0.0; edges],
            iterations: 0,
        })
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn posteriors(&self) -> &[f64] {
        &self.posteriors
    }

    pub fn decisions(&self) -> Vec<usize> {
        self.posteriors
            .chunks(self.points.len())
            .map(|p| {
                p.iter()
                    .enumerate()
                    .fold((0, f64::NEG_INFINITY), |best, (i, &v)| {
                        if v > best.1 {
                            (i, v)
                        } else {
                            best
                        }
                    })
                    .0
            })
            .collect()
    }

    /// Fraction of symbols whose largest posterior exceeds [`CONFIDENT`].
    pub fn confident_fraction(&self) -> f64 {
        let a = self.points.len();
        let settled = self
            .posteriors
            .chunks(a)
            .filter(|p| p.iter().cloned().fold(0.0, f64::max) > CONFIDENT)
            .count();
        settled as f64 / (self.posteriors.len() / a) as f64
    }

    /// One round of observation and variable updates. Returns the largest
    /// change of any posterior probability.
    pub fn step(&mut self) -> f64 {
        let n = self.h.n();
        let a = self.points.len();
        let taps = self.h.taps();

        // symbol statistics carried by each variable-to-observation message
        for (e, probs) in self.messages.chunks(a).enumerate() {
            let mut mean = Complex64::new(0.0, 0.0);
            let mut second = 0.0;
            for (p, s) in probs.iter().zip(self.points) {
                mean += s * *p;
                second += p * s.norm_sqr();
            }
            self.edge_mean[e] = mean;
            self.edge_var[e] = (second - mean.norm_sqr()).max(0.0);
        }

        // observation nodes: Gaussian interference seen by each edge, stored
        // in place as (mean, variance) of y_m minus the edge's own symbol term
        for m in 0..n {
            let mut total_mean = Complex64::new(0.0, 0.0);
            let n0 = self.noise[m];
            let mut total_var = n0;
            for (k, tap) in taps.iter().enumerate() {
                let g = tap.coeffs[m];
                let e = k * n + m;
                total_mean += g * self.edge_mean[e];
                total_var += g.norm_sqr() * self.edge_var[e];
            }
            for (k, tap) in taps.iter().enumerate() {
                let g = tap.coeffs[m];
                let e = k * n + m;
                self.edge_mean[e] = total_mean - g * self.edge_mean[e];
                self.edge_var[e] = (total_var - g.norm_sqr() * self.edge_var[e]).max(n0);
            }
        }

        // variable nodes
        let mut loglik = vec![0.0; taps.len() * a];
        let mut total = vec![0.0; a];
        let mut buf = vec![0.0; a];
        let mut max_change: f64 = 0.0;
        for col in 0..n {
            total.iter_mut().for_each(|v| *v = 0.0);
            for (k, tap) in taps.iter().enumerate() {
                let m = tap.row(col);
                let e = k * n + m;
                let g = tap.coeffs[m];
                let resid = self.y[m] - self.edge_mean[e];
                let var = self.edge_var[e];
                for (i, s) in self.points.iter().enumerate() {
                    let l = -(resid - g * s).norm_sqr() / var;
                    loglik[k * a + i] = l;
                    total[i] += l;
                }
            }
            normalize_log(&total, &mut buf);
            let post = &mut self.posteriors[col * a..(col + 1) * a];
            for (old, new) in post.iter_mut().zip(&buf) {
                max_change = max_change.max((*old - new).abs());
                *old = *new;
            }
            for (k, tap) in taps.iter().enumerate() {
                let e = k * n + tap.row(col);
                let ext: Vec<f64> = (0..a).map(|i| total[i] - loglik[k * a + i]).collect();
                normalize_log(&ext, &mut buf);
                let msg = &mut self.messages[e * a..(e + 1) * a];
                for (old, new) in msg.iter_mut().zip(&buf) {
                    *old = self.damping * new + (1.0 - self.damping) * *old;
                }
            }
        }
        self.iterations += 1;
        max_change
    }
}

/// Normalized `exp(log_p)` via log-sum-exp.
fn normalize_log(log_p: &[f64], out: &mut [f64]) {
    let max = log_p.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for (o, l) in out.iter_mut().zip(log_p) {
        *o = (l - max).exp();
        sum += *o;
    }
    for o in out.iter_mut() {
        *o /= sum;
    }
}

/// Message-passing detection of `y_d = H x + w` over the sparse channel `h`.
///
/// `alphabet` must already be scaled to the transmitted symbol energy.
/// Decisions come from the iterate with the largest fraction of confident
/// symbols; running out of iterations is reported through `converged`, not
/// as an error.
pub fn mp_detect(
    y_d: &[Complex64],
    h: &SparseChannel,
    alphabet: &SymbolAlphabet,
    n0: f64,
    params: &MpParams,
) -> Result<MpOutput> {
    mp_detect_profiled(y_d, h, alphabet, &vec![n0; y_d.len()], params)
}

/// [`mp_detect`] with a separate noise variance for each observation.
pub fn mp_detect_profiled(
    y_d: &[Complex64],
    h: &SparseChannel,
    alphabet: &SymbolAlphabet,
    noise: &[f64],
    params: &MpParams,
) -> Result<MpOutput> {
    params.validate()?;
    let mut mp = MessagePassing::with_noise_profile(
        y_d,
        h,
        alphabet.points(),
        noise.to_vec(),
        params.damping,
    )?;
    let mut best = (f64::NEG_INFINITY, Vec::new());
    let mut converged = false;
    while mp.iterations() < params.max_iters {
        let change = mp.step();
        let eta = mp.confident_fraction();
        if eta > best.0 {
            best = (eta, mp.decisions());
        }
        if change < params.tolerance {
            converged = true;
            break;
        }
    }
    let decisions = if converged { mp.decisions() } else { best.1 };
    Ok(MpOutput {
        decisions,
        posteriors: mp.posteriors().to_vec(),
        iterations: mp.iterations(),
        converged,
    })
}

/// Largest instance the exhaustive search accepts, in bits per frame.
pub const MAP_ORACLE_MAX_BITS: usize = 20;

/// Exhaustive minimization of `‖y_d − H x‖²` over every frame `x ∈ Aᴺ`
/// (joint MAP under uniform priors). `alphabet` must be pre-scaled.
pub fn exact_map_oracle(
    y_d: &[Complex64],
    h_eff: &DMatrix<Complex64>,
    alphabet: &SymbolAlphabet,
) -> Result<Vec<usize>> {
    let n = h_eff.ncols();
    check_len(h_eff.nrows(), y_d.len())?;
    let bits = n * alphabet.bits_per_symbol();
    if bits > MAP_ORACLE_MAX_BITS {
        return Err(AfdmError::InstanceTooLarge(bits, MAP_ORACLE_MAX_BITS));
    }
    // contributions[j][i] = H[:, j] * points[i]
    let contributions: Vec<Vec<Vec<Complex64>>> = (0..n)
        .map(|j| {
            alphabet
                .points()
                .iter()
                .map(|s| h_eff.column(j).iter().map(|h| h * s).collect())
                .collect()
        })
        .collect();

    struct Search<'c> {
        contributions: &'c [Vec<Vec<Complex64>>],
        current: Vec<usize>,
        best: Vec<usize>,
        best_cost: f64,
    }

    impl Search<'_> {
        fn descend(&mut self, depth: usize, residual: &[Complex64]) {
            if depth == self.contributions.len() {
                let cost: f64 = residual.iter().map(|r| r.norm_sqr()).sum();
                if cost < self.best_cost {
                    self.best_cost = cost;
                    self.best.clone_from(&self.current);
                }
                return;
            }
            let mut next = residual.to_vec();
            for i in 0..self.contributions[depth].len() {
                for ((nx, r), c) in next
                    .iter_mut()
                    .zip(residual)
                    .zip(&self.contributions[depth][i])
                {
                    *nx = r - c;
                }
                self.current[depth] = i;
                self.descend(depth + 1, &next);
            }
        }
    }

    let mut search = Search {
        contributions: &contributions,
        current: vec![0; n],
        best: vec![0; n],
        best_cost: f64::INFINITY,
    };
    search.descend(0, y_d);
    Ok(search.best)
}
