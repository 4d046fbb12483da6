//! Discrete affine Fourier transform (DAFT).
//!
//! The forward transform maps a time-domain frame `r` into the DAFT domain as
//! `y = Λ(c2) · F · Λ(c1) · r`, where `Λ(c) = diag(exp(-j2π c n²))` for
//! `n = 0..N` and `F` is the unitary DFT. The inverse is the Hermitian
//! transpose. Both directions run as chirp · FFT · chirp in `O(N log N)`; a
//! dense matrix form is kept for cross-checking.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Deref, DerefMut};
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{check_len, AfdmError, Result};

/// `exp(j 2π turns)`, with the integer part of `turns` discarded first so
/// large arguments keep full precision.
pub(crate) fn phasor(turns: f64) -> Complex64 {
    let frac = turns - turns.floor();
    Complex64::from_polar(1.0, 2.0 * PI * frac)
}

/// Static parameters of an AFDM frame.
///
/// `c1` is held as the integer `2·N·c1` ([`AfdmConfig::c1_steps`]) so that
/// chirp phases involving `c1` are computed in exact integer arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct AfdmConfig {
    n_subcarriers: usize,
    alpha_max: usize,
    l_max: usize,
    c1_steps: usize,
    c2: f64,
    bits_per_symbol: usize,
}

/// Golden-ratio fraction used as the irrational part of the default `c2`.
pub const GOLDEN_FRACTION: f64 = 0.618_033_988_749_894_8;

impl AfdmConfig {
    /// Builds a configuration with explicit chirp parameters.
    ///
    /// `c1_steps` is `2·N·c1`. Only the frame-level invariants are checked here;
    /// operations that need the delay/Doppler grid additionally require
    /// `c1_steps == 2·alpha_max + 1` (see [`AfdmConfig::check_grid`]).
    pub fn new(
        n_subcarriers: usize,
        alpha_max: usize,
        l_max: usize,
        c1_steps: usize,
        c2: f64,
        bits_per_symbol: usize,
    ) -> Result<Self> {
        if n_subcarriers == 0 {
            return Err(AfdmError::InvalidConfig("N must be positive".into()));
        }
        if bits_per_symbol == 0 {
            return Err(AfdmError::InvalidConfig(
                "bits_per_symbol must be positive".into(),
            ));
        }
        if l_max >= n_subcarriers {
            return Err(AfdmError::InvalidConfig(format!(
                "l_max = {l_max} must be smaller than N = {n_subcarriers}"
            )));
        }
        let footprint = (l_max + 1) * (2 * alpha_max + 1);
        if footprint > n_subcarriers {
            return Err(AfdmError::InvalidConfig(format!(
                "(l_max+1)(2·alpha_max+1) = {footprint} exceeds N = {n_subcarriers}"
            )));
        }
        if !c2.is_finite() {
            return Err(AfdmError::InvalidConfig("c2 must be finite".into()));
        }
        Ok(Self {
            n_subcarriers,
            alpha_max,
            l_max,
            c1_steps,
            c2,
            bits_per_symbol,
        })
    }

    /// The standard parameter choice: `c1 = (2·alpha_max + 1) / (2N)`,
    /// `c2 = GOLDEN_FRACTION / (2N)` and QPSK.
    pub fn default_params(n: usize, alpha_max: usize, l_max: usize) -> Result<Self> {
        Self::new(
            n,
            alpha_max,
            l_max,
            2 * alpha_max + 1,
            GOLDEN_FRACTION / (2.0 * n as f64),
            2,
        )
    }

    /// Replaces `c2`.
    pub fn with_c2(mut self, c2: f64) -> Result<Self> {
        if !c2.is_finite() {
            return Err(AfdmError::InvalidConfig("c2 must be finite".into()));
        }
        self.c2 = c2;
        Ok(self)
    }

    /// Replaces `c1` by a real value, which must make `2·N·c1` a nonnegative
    /// integer.
    pub fn with_c1(mut self, c1: f64) -> Result<Self> {
        let steps = 2.0 * self.n_subcarriers as f64 * c1;
        let rounded = steps.round();
        if !steps.is_finite() || rounded < 0.0 || (steps - rounded).abs() > 1e-9 {
            return Err(AfdmError::InvalidConfig(format!(
                "2·N·c1 = {steps} is not a nonnegative integer"
            )));
        }
        self.c1_steps = rounded as usize;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n_subcarriers
    }

    pub fn alpha_max(&self) -> usize {
        self.alpha_max
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    /// `2·N·c1`.
    pub fn c1_steps(&self) -> usize {
        self.c1_steps
    }

    pub fn c1(&self) -> f64 {
        self.c1_steps as f64 / (2.0 * self.n_subcarriers as f64)
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    /// Guard width `Q = (l_max+1)(2·alpha_max+1) - 1`.
    pub fn guard(&self) -> usize {
        (self.l_max + 1) * (2 * self.alpha_max + 1) - 1
    }

    /// Number of delay/Doppler hypotheses, `Q + 1`.
    pub fn grid_size(&self) -> usize {
        self.guard() + 1
    }

    /// The delay/Doppler index maps need `2·N·c1 = 2·alpha_max + 1`.
    pub fn check_grid(&self) -> Result<()> {
        if self.c1_steps == 2 * self.alpha_max + 1 {
            Ok(())
        } else {
            Err(AfdmError::InvalidConfig(format!(
                "2·N·c1 = {} must equal 2·alpha_max+1 = {} for the delay/Doppler grid",
                self.c1_steps,
                2 * self.alpha_max + 1
            )))
        }
    }

    /// Diagonal entry `n` of `Λ(c1)`, i.e. `exp(-j2π c1 n²)`.
    pub fn chirp1(&self, n: usize) -> Complex64 {
        let modulus = 2 * self.n_subcarriers as u128;
        let k = (self.c1_steps as u128 * (n as u128 * n as u128)) % modulus;
        phasor(-(k as f64) / modulus as f64)
    }

    /// Diagonal entry `n` of `Λ(c2)`, i.e. `exp(-j2π c2 n²)`.
    pub fn chirp2(&self, n: usize) -> Complex64 {
        let sq = (n as f64) * (n as f64);
        phasor(-(self.c2 * sq).fract())
    }
}

impl fmt::Display for AfdmConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "N={} alpha_max={} l_max={} c1={}/{} c2={:e} bits_per_symbol={}",
            self.n_subcarriers,
            self.alpha_max,
            self.l_max,
            self.c1_steps,
            2 * self.n_subcarriers,
            self.c2,
            self.bits_per_symbol
        )
    }
}

/// A length-`N` vector living in the DAFT domain.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DaftFrame(Vec<Complex64>);

impl DaftFrame {
    pub fn new(values: Vec<Complex64>) -> Self {
        Self(values)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }
}

impl From<Vec<Complex64>> for DaftFrame {
    fn from(values: Vec<Complex64>) -> Self {
        Self(values)
    }
}

impl Deref for DaftFrame {
    type Target = [Complex64];

    fn deref(&self) -> &[Complex64] {
        &self.0
    }
}

impl DerefMut for DaftFrame {
    fn deref_mut(&mut self) -> &mut [Complex64] {
        &mut self.0
    }
}

/// A planned DAFT of a fixed size. Cheap to share between threads.
#[derive(Clone)]
pub struct Daft {
    chirp1: Vec<Complex64>,
    chirp2: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scale: f64,
}

impl fmt::Debug for Daft {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Daft")
            .field("n", &self.chirp1.len())
            .finish()
    }
}

impl Daft {
    pub fn new(cfg: &AfdmConfig) -> Self {
        let n = cfg.n();
        let mut planner = FftPlanner::new();
        Self {
            chirp1: (0..n).map(|i| cfg.chirp1(i)).collect(),
            chirp2: (0..n).map(|i| cfg.chirp2(i)).collect(),
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            scale: 1.0 / (n as f64).sqrt(),
        }
    }

    pub fn len(&self) -> usize {
        self.chirp1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chirp1.is_empty()
    }

    /// Time domain to DAFT domain.
    pub fn forward(&self, r: &[Complex64]) -> Result<DaftFrame> {
        check_len(self.len(), r.len())?;
        let mut buf: Vec<Complex64> = r.iter().zip(&self.chirp1).map(|(a, c)| a * c).collect();
        self.forward.process(&mut buf);
        for (v, c) in buf.iter_mut().zip(&self.chirp2) {
            *v *= c * self.scale;
        }
        Ok(DaftFrame(buf))
    }

    /// DAFT domain to time domain.
    pub fn inverse(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self.len(), x.len())?;
        let mut buf: Vec<Complex64> = x
            .iter()
            .zip(&self.chirp2)
            .map(|(a, c)| a * c.conj())
            .collect();
        self.inverse.process(&mut buf);
        for (v, c) in buf.iter_mut().zip(&self.chirp1) {
            *v *= c.conj() * self.scale;
        }
        Ok(buf)
    }
}

/// Forward DAFT, `y = Λ(c2) F Λ(c1) r`.
pub fn daft(r: &[Complex64], cfg: &AfdmConfig) -> Result<DaftFrame> {
    check_len(cfg.n(), r.len())?;
    Daft::new(cfg).forward(r)
}

/// Inverse DAFT, `s = Λ(c1)ᴴ Fᴴ Λ(c2)ᴴ x`.
pub fn idaft(x: &[Complex64], cfg: &AfdmConfig) -> Result<Vec<Complex64>> {
    check_len(cfg.n(), x.len())?;
    Daft::new(cfg).inverse(x)
}

/// Unitary DFT matrix, `F(m, n) = exp(-j2π mn/N) / √N`.
pub fn dft_matrix(n: usize) -> DMatrix<Complex64> {
    let scale = 1.0 / (n as f64).sqrt();
    DMatrix::from_fn(n, n, |r, c| {
        let k = (r * c) % n;
        phasor(-(k as f64) / n as f64) * scale
    })
}

/// Dense `Λ(c2) F Λ(c1)`.
pub fn daft_matrix(cfg: &AfdmConfig) -> DMatrix<Complex64> {
    let n = cfg.n();
    let f = dft_matrix(n);
    DMatrix::from_fn(n, n, |r, c| cfg.chirp2(r) * f[(r, c)] * cfg.chirp1(c))
}
