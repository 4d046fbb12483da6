//! Doubly selective multipath channels with integer delay and Doppler.
//!
//! A path with gain `h`, delay `l` and Doppler index `α` acts on the
//! time-domain samples as `r[n] += h · exp(-j2π α n / N) · s[n - l]`. The
//! transmitter prepends a chirp-periodic prefix (CPP) of `l_max` samples, so in
//! the DAFT domain every path becomes a single cyclic diagonal located at
//! `loc = α + 2N·c1·l`, with the closed-form entries
//!
//! ```text
//! Θ(m, n) = exp(j 2π/N · (N c1 l² − n l + N c2 (n² − m²)))   if n ≡ m + loc (mod N)
//! ```
//!
//! [`effective_matrix`] builds the sparse sum of these diagonals, and
//! [`apply_time_domain`] runs the sample-level simulation the matrices must
//! agree with.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::index::sample;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::daft::{daft_matrix, phasor, AfdmConfig};
use crate::error::{check_len, AfdmError, Result};
use crate::sparse::{SparseChannel, Tap};

/// One propagation path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelPath {
    pub gain: Complex64,
    /// Integer delay index `l`, in samples.
    pub delay: usize,
    /// Integer Doppler index `α = N·f`.
    pub doppler: i64,
}

/// A validated set of paths with pairwise distinct delays.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    paths: Vec<ChannelPath>,
}

impl ChannelRealization {
    pub fn new(paths: Vec<ChannelPath>, cfg: &AfdmConfig) -> Result<Self> {
        if paths.is_empty() {
            return Err(AfdmError::InvalidChannel(
                "at least one path required".into(),
            ));
        }
        if paths.len() > cfg.grid_size() {
            return Err(AfdmError::InvalidChannel(format!(
                "{} paths exceed Q+1 = {}",
                paths.len(),
                cfg.grid_size()
            )));
        }
        for p in &paths {
            check_bounds(p.delay, p.doppler, cfg)?;
        }
        for (i, a) in paths.iter().enumerate() {
            if paths[i + 1..].iter().any(|b| b.delay == a.delay) {
                return Err(AfdmError::InvalidChannel(format!(
                    "delay {} used by more than one path",
                    a.delay
                )));
            }
        }
        Ok(Self { paths })
    }

    pub fn paths(&self) -> &[ChannelPath] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// The channel written on the `(Q+1)`-point delay/Doppler grid, with zeros
    /// where no path exists.
    pub fn grid_vector(&self, cfg: &AfdmConfig) -> Result<Vec<Complex64>> {
        let mut h = vec![Complex64::new(0.0, 0.0); cfg.grid_size()];
        for p in &self.paths {
            h[delay_doppler_to_index(p.delay, p.doppler, cfg)? - 1] += p.gain;
        }
        Ok(h)
    }
}

fn check_bounds(delay: usize, doppler: i64, cfg: &AfdmConfig) -> Result<()> {
    if delay > cfg.l_max() || doppler.unsigned_abs() as usize > cfg.alpha_max() {
        Err(AfdmError::PathOutOfBounds { delay, doppler })
    } else {
        Ok(())
    }
}

/// Circularly-symmetric complex Gaussian sample with variance `var`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R, var: f64) -> Complex64 {
    let s = (var / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re * s, im * s)
}

/// Draws `p` paths: gains i.i.d. `CN(0, 1/p)`, distinct delays uniform over
/// `[0, l_max]` and Doppler indices uniform over `[-alpha_max, alpha_max]`.
pub fn sample_channel<R: Rng + ?Sized>(
    rng: &mut R,
    p: usize,
    cfg: &AfdmConfig,
) -> Result<ChannelRealization> {
    if p == 0 || p > cfg.l_max() + 1 {
        return Err(AfdmError::InvalidChannel(format!(
            "cannot draw {p} distinct delays from [0, {}]",
            cfg.l_max()
        )));
    }
    let var = 1.0 / p as f64;
    let alpha = cfg.alpha_max() as i64;
    let delays = sample(rng, cfg.l_max() + 1, p);
    let paths = delays
        .into_iter()
        .map(|delay| {
            let gain = complex_normal(rng, var);
            let doppler = rng.random_range(-alpha..=alpha);
            ChannelPath {
                gain,
                delay,
                doppler,
            }
        })
        .collect();
    ChannelRealization::new(paths, cfg)
}

/// Diagonal offset `loc = α + 2N·c1·l` of a path in the DAFT domain.
pub fn loc(delay: usize, doppler: i64, cfg: &AfdmConfig) -> i64 {
    doppler + (cfg.c1_steps() * delay) as i64
}

/// Maps grid index `t ∈ [1, Q+1]` to `(delay, doppler)`.
pub fn index_to_delay_doppler(t: usize, cfg: &AfdmConfig) -> Result<(usize, i64)> {
    cfg.check_grid()?;
    if t == 0 || t > cfg.grid_size() {
        return Err(AfdmError::IndexOutOfRange {
            index: t,
            max: cfg.grid_size(),
        });
    }
    let k = cfg.c1_steps();
    let delay = (t - 1) / k;
    let doppler = ((t - 1) % k) as i64 - cfg.alpha_max() as i64;
    Ok((delay, doppler))
}

/// Inverse of [`index_to_delay_doppler`].
pub fn delay_doppler_to_index(delay: usize, doppler: i64, cfg: &AfdmConfig) -> Result<usize> {
    cfg.check_grid()?;
    check_bounds(delay, doppler, cfg)?;
    Ok(delay * cfg.c1_steps() + (doppler + cfg.alpha_max() as i64) as usize + 1)
}

/// The unit-gain subchannel of one path as a cyclic diagonal.
pub fn theta_tap(delay: usize, doppler: i64, cfg: &AfdmConfig) -> Result<Tap> {
    check_bounds(delay, doppler, cfg)?;
    let n = cfg.n();
    let shift = loc(delay, doppler, cfg).rem_euclid(n as i64) as usize;
    let two_n = 2 * n as u128;
    let l = delay as u128;
    // c1 l² in exact arithmetic
    let c1_turns = ((cfg.c1_steps() as u128 * l * l) % two_n) as f64 / two_n as f64;
    let c2 = cfg.c2();
    let c2_turns = |i: usize| (c2 * (i as f64) * (i as f64)).fract();
    let coeffs = (0..n)
        .map(|m| {
            let col = (m + shift) % n;
            let lin = ((col as u128 * l) % n as u128) as f64 / n as f64;
            phasor(c1_turns - lin + c2_turns(col) - c2_turns(m))
        })
        .collect();
    Ok(Tap { shift, coeffs })
}

/// Dense closed-form subchannel matrix of one path.
pub fn theta_matrix(delay: usize, doppler: i64, cfg: &AfdmConfig) -> Result<DMatrix<Complex64>> {
    let mut h = SparseChannel::zeros(cfg.n());
    h.add_scaled(Complex64::new(1.0, 0.0), &theta_tap(delay, doppler, cfg)?);
    Ok(h.to_dense())
}

/// The same subchannel built as the product
/// `A · Γ_cpp · Δ · Πˡ · Aᴴ` with `A = Λ(c2) F Λ(c1)`.
///
/// `O(N³)`; used to cross-check [`theta_matrix`].
pub fn theta_matrix_product(
    delay: usize,
    doppler: i64,
    cfg: &AfdmConfig,
) -> Result<DMatrix<Complex64>> {
    check_bounds(delay, doppler, cfg)?;
    let n = cfg.n();
    let a = daft_matrix(cfg);
    // Γ_cpp · Δ · Πˡ has one nonzero per row: row k reads column (k - l) mod N
    let mut inner = DMatrix::<Complex64>::zeros(n, n);
    for k in 0..n {
        let doppler_phase = phasor(-((doppler * k as i64).rem_euclid(n as i64) as f64) / n as f64);
        let prefix_phase = if k < delay {
            cpp_phase(delay - k, cfg)
        } else {
            Complex64::new(1.0, 0.0)
        };
        inner[(k, (k + n - delay) % n)] = prefix_phase * doppler_phase;
    }
    Ok(&a * inner * a.adjoint())
}

/// Phase applied to the sample copied `q` positions before the frame start,
/// `exp(-j2π c1 (N² − 2Nq))`.
fn cpp_phase(q: usize, cfg: &AfdmConfig) -> Complex64 {
    let n = cfg.n() as i128;
    let two_n = 2 * n;
    let k = (cfg.c1_steps() as i128 * (n * n - 2 * n * q as i128)).rem_euclid(two_n);
    phasor(-(k as f64) / two_n as f64)
}

/// DAFT-domain effective channel `Σ_i h_i Θ_i`.
pub fn effective_matrix(ch: &ChannelRealization, cfg: &AfdmConfig) -> Result<SparseChannel> {
    let mut h = SparseChannel::zeros(cfg.n());
    for p in ch.paths() {
        h.add_scaled(p.gain, &theta_tap(p.delay, p.doppler, cfg)?);
    }
    Ok(h)
}

/// Noise-free sample-level propagation: CPP insertion, per-path delay and
/// Doppler, prefix removal.
pub fn propagate(
    s: &[Complex64],
    ch: &ChannelRealization,
    cfg: &AfdmConfig,
) -> Result<Vec<Complex64>> {
    let n = cfg.n();
    check_len(n, s.len())?;
    let cp = cfg.l_max();
    // extended[cp + k] holds transmitted sample k, for k in -cp..N
    let mut extended = Vec::with_capacity(cp + n);
    for q in (1..=cp).rev() {
        extended.push(s[n - q] * cpp_phase(q, cfg));
    }
    extended.extend_from_slice(s);

    let mut r = vec![Complex64::new(0.0, 0.0); n];
    for p in ch.paths() {
        for (k, out) in r.iter_mut().enumerate() {
            let doppler = phasor(-((p.doppler * k as i64).rem_euclid(n as i64) as f64) / n as f64);
            *out += p.gain * doppler * extended[cp + k - p.delay];
        }
    }
    Ok(r)
}

/// [`propagate`] followed by additive white Gaussian noise of variance `n0`
/// per sample.
pub fn apply_time_domain<R: Rng + ?Sized>(
    s: &[Complex64],
    ch: &ChannelRealization,
    cfg: &AfdmConfig,
    n0: f64,
    rng: &mut R,
) -> Result<Vec<Complex64>> {
    let mut r = propagate(s, ch, cfg)?;
    if n0 > 0.0 {
        for v in r.iter_mut() {
            *v += complex_normal(rng, n0);
        }
    }
    Ok(r)
}
