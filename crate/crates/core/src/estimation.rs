//! MMSE channel estimation from a superimposed-pilot frame.
//!
//! The received DAFT-domain frame is written over the `Q+1` delay/Doppler
//! hypotheses as `y = Φ_p h + Φ_d h + w`, where column `t` of `Φ_p` is
//! `Θ_t x_p`. Data and noise together form the effective noise
//! `ŵ = Φ_d h + w` with covariance `σ_ŵ² I`, `σ_ŵ² = (Σ σ_h²) σ_d² + N_0`, and
//! the estimate is
//!
//! ```text
//! ĥ = (Φ_pᴴ Φ_p / σ_ŵ² + C_h⁻¹)⁻¹ Φ_pᴴ y / σ_ŵ²
//! ```
//!
//! When the pilot grid is legal `Φ_pᴴ Φ_p = σ_p² I` and the solve collapses to
//! a per-entry shrinkage. Grid entries whose magnitude clears
//! `γ = 3 √(σ_ŵ² / σ_p²)` are declared active paths.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::channel::{index_to_delay_doppler, theta_tap};
use crate::daft::AfdmConfig;
use crate::error::{check_len, AfdmError, Result};
use crate::sparse::{SparseChannel, Tap};

/// Diagonal prior covariance `C_h` of the grid channel vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelPrior {
    variances: Vec<f64>,
}

impl ChannelPrior {
    pub fn new(variances: Vec<f64>) -> Result<Self> {
        if variances.is_empty() || variances.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(AfdmError::InvalidConfig(
                "prior variances must be positive and finite".into(),
            ));
        }
        Ok(Self { variances })
    }

    /// Equal variance `1/(Q+1)` on every grid point (unit total power).
    pub fn uniform(grid_size: usize) -> Self {
        Self {
            variances: vec![1.0 / grid_size as f64; grid_size],
        }
    }

    pub fn variances(&self) -> &[f64] {
        &self.variances
    }

    pub fn total_power(&self) -> f64 {
        self.variances.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.variances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variances.is_empty()
    }
}

/// Output of one estimation pass.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationResult {
    pub h_hat: Vec<Complex64>,
    pub indicators: Vec<bool>,
    pub threshold: f64,
}

impl EstimationResult {
    pub fn new(h_hat: Vec<Complex64>, threshold: f64) -> Self {
        let indicators = threshold_paths(&h_hat, threshold);
        Self {
            h_hat,
            indicators,
            threshold,
        }
    }

    /// `b ⊙ ĥ`: the estimate with undetected grid points zeroed.
    pub fn masked(&self) -> Vec<Complex64> {
        self.h_hat
            .iter()
            .zip(&self.indicators)
            .map(|(h, &b)| if b { *h } else { Complex64::new(0.0, 0.0) })
            .collect()
    }
}

/// Unit-gain subchannels `Θ_1 … Θ_{Q+1}` in grid order.
pub fn grid_taps(cfg: &AfdmConfig) -> Result<Vec<Tap>> {
    (1..=cfg.grid_size())
        .map(|t| {
            let (l, a) = index_to_delay_doppler(t, cfg)?;
            theta_tap(l, a, cfg)
        })
        .collect()
}

/// `Φ_p = [Θ_1 x_p, …, Θ_{Q+1} x_p]`, an `N×(Q+1)` matrix.
pub fn build_phi_p(x_p: &[Complex64], cfg: &AfdmConfig) -> Result<DMatrix<Complex64>> {
    check_len(cfg.n(), x_p.len())?;
    let taps = grid_taps(cfg)?;
    let mut phi = DMatrix::zeros(cfg.n(), taps.len());
    for (t, tap) in taps.iter().enumerate() {
        for m in 0..cfg.n() {
            phi[(m, t)] = tap.coeffs[m] * x_p[tap.column(m)];
        }
    }
    Ok(phi)
}

/// `σ_ŵ² = (Σ_t σ_ht²) σ_d² + N_0`.
pub fn effective_noise_variance(prior: &ChannelPrior, sigma_d2: f64, n0: f64) -> f64 {
    prior.total_power() * sigma_d2 + n0
}

fn check_estimation_inputs(
    y: &[Complex64],
    phi_p: &DMatrix<Complex64>,
    prior: &ChannelPrior,
    sigma_w2: f64,
) -> Result<()> {
    check_len(phi_p.nrows(), y.len())?;
    check_len(phi_p.ncols(), prior.len())?;
    if sigma_w2.is_nan() || sigma_w2 <= 0.0 {
        return Err(AfdmError::InvalidConfig(format!(
            "σ_ŵ² = {sigma_w2} must be positive"
        )));
    }
    Ok(())
}

/// `(Φ_pᴴ Φ_p / σ_ŵ² + C_h⁻¹)`.
fn information_matrix(
    phi_p: &DMatrix<Complex64>,
    prior: &ChannelPrior,
    sigma_w2: f64,
) -> DMatrix<Complex64> {
    let mut a = phi_p.adjoint() * phi_p / Complex64::new(sigma_w2, 0.0);
    for (i, v) in prior.variances().iter().enumerate() {
        a[(i, i)] += 1.0 / v;
    }
    a
}

/// Error covariance `C_ĥ = (Φ_pᴴ C_ŵ⁻¹ Φ_p + C_h⁻¹)⁻¹`.
pub fn error_covariance(
    phi_p: &DMatrix<Complex64>,
    prior: &ChannelPrior,
    sigma_w2: f64,
) -> Result<DMatrix<Complex64>> {
    check_len(phi_p.ncols(), prior.len())?;
    let chol = information_matrix(phi_p, prior, sigma_w2)
        .cholesky()
        .ok_or(AfdmError::SingularSystem)?;
    Ok(chol.inverse())
}

/// MMSE estimate through a Cholesky solve of the full `(Q+1)×(Q+1)` system.
pub fn mmse_estimate(
    y: &[Complex64],
    phi_p: &DMatrix<Complex64>,
    prior: &ChannelPrior,
    sigma_w2: f64,
) -> Result<Vec<Complex64>> {
    check_estimation_inputs(y, phi_p, prior, sigma_w2)?;
    let chol = information_matrix(phi_p, prior, sigma_w2)
        .cholesky()
        .ok_or(AfdmError::SingularSystem)?;
    let rhs = phi_p.adjoint() * DVector::from_column_slice(y) / Complex64::new(sigma_w2, 0.0);
    Ok(chol.solve(&rhs).as_slice().to_vec())
}

/// Largest off-diagonal magnitude of `Φ_pᴴ Φ_p` relative to its largest
/// diagonal entry.
fn gram_off_diagonal_ratio(gram: &DMatrix<Complex64>) -> f64 {
    let diag = (0..gram.nrows())
        .map(|i| gram[(i, i)].norm())
        .fold(0.0, f64::max);
    let mut off: f64 = 0.0;
    for r in 0..gram.nrows() {
        for c in 0..gram.ncols() {
            if r != c {
                off = off.max(gram[(r, c)].norm());
            }
        }
    }
    if diag > 0.0 {
        off / diag
    } else {
        off
    }
}

const DIAGONAL_TOLERANCE: f64 = 1e-9;

fn shrinkage_weights(gram: &DMatrix<Complex64>, prior: &ChannelPrior, sigma_w2: f64) -> Vec<f64> {
    prior
        .variances()
        .iter()
        .enumerate()
        .map(|(t, v)| 1.0 / (gram[(t, t)].re + sigma_w2 / v))
        .collect()
}

/// Per-entry MMSE estimate, valid when `Φ_pᴴ Φ_p` is diagonal:
/// `ĥ_t = (Φ_pᴴ y)_t / (‖Φ_p[:, t]‖² + σ_ŵ² / σ_ht²)`.
pub fn mmse_estimate_diagonal(
    y: &[Complex64],
    phi_p: &DMatrix<Complex64>,
    prior: &ChannelPrior,
    sigma_w2: f64,
) -> Result<Vec<Complex64>> {
    check_estimation_inputs(y, phi_p, prior, sigma_w2)?;
    let gram = phi_p.adjoint() * phi_p;
    if gram_off_diagonal_ratio(&gram) > DIAGONAL_TOLERANCE {
        return Err(AfdmError::InvalidPilot("Φ_pᴴ Φ_p is not diagonal".into()));
    }
    let corr = phi_p.adjoint() * DVector::from_column_slice(y);
    Ok(shrinkage_weights(&gram, prior, sigma_w2)
        .iter()
        .zip(corr.iter())
        .map(|(w, c)| c * *w)
        .collect())
}

#[derive(Debug, Clone)]
enum EstimatorForm {
    /// `ĥ_t = w_t (Φ_pᴴ y)_t`.
    Diagonal(Vec<f64>),
    /// `ĥ = W y` with a precomputed `(Q+1)×N` matrix.
    Full(DMatrix<Complex64>),
}

/// An MMSE estimator prepared once per pilot configuration and shared
/// read-only across frames.
#[derive(Debug, Clone)]
pub struct MmseEstimator {
    phi_p_adjoint: DMatrix<Complex64>,
    form: EstimatorForm,
    sigma_w2: f64,
    error_variances: Vec<f64>,
}

impl MmseEstimator {
    /// Uses the per-entry shortcut when `Φ_pᴴ Φ_p` is verified diagonal and
    /// the full solve otherwise.
    pub fn new(phi_p: DMatrix<Complex64>, prior: &ChannelPrior, sigma_w2: f64) -> Result<Self> {
        check_len(phi_p.ncols(), prior.len())?;
        if sigma_w2.is_nan() || sigma_w2 <= 0.0 {
            return Err(AfdmError::InvalidConfig(format!(
                "σ_ŵ² = {sigma_w2} must be positive"
            )));
        }
        let phi_p_adjoint = phi_p.adjoint();
        let gram = &phi_p_adjoint * &phi_p;
        let (form, error_variances) = if gram_off_diagonal_ratio(&gram) <= DIAGONAL_TOLERANCE {
            let w = shrinkage_weights(&gram, prior, sigma_w2);
            let err = w.iter().map(|w| w * sigma_w2).collect();
            (EstimatorForm::Diagonal(w), err)
        } else {
            let chol = information_matrix(&phi_p, prior, sigma_w2)
                .cholesky()
                .ok_or(AfdmError::SingularSystem)?;
            let err = chol.inverse().diagonal().iter().map(|v| v.re).collect();
            let w = chol.solve(&(&phi_p_adjoint / Complex64::new(sigma_w2, 0.0)));
            (EstimatorForm::Full(w), err)
        };
        Ok(Self {
            phi_p_adjoint,
            form,
            sigma_w2,
            error_variances,
        })
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self.form, EstimatorForm::Diagonal(_))
    }

    pub fn sigma_w2(&self) -> f64 {
        self.sigma_w2
    }

    /// Diagonal of the error covariance `C_ĥ`.
    pub fn error_variances(&self) -> &[f64] {
        &self.error_variances
    }

    pub fn estimate(&self, y: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self.phi_p_adjoint.ncols(), y.len())?;
        let y = DVector::from_column_slice(y);
        Ok(match &self.form {
            EstimatorForm::Diagonal(w) => (&self.phi_p_adjoint * y)
                .iter()
                .zip(w)
                .map(|(c, w)| c * *w)
                .collect(),
            EstimatorForm::Full(m) => (m * y).as_slice().to_vec(),
        })
    }
}

/// `γ = 3 √(σ_ŵ² / σ_p²)`.
pub fn default_threshold(sigma_w2: f64, sigma_p2: f64) -> Result<f64> {
    if sigma_p2.is_nan() || sigma_p2 <= 0.0 {
        return Err(AfdmError::InvalidConfig(
            "pilot power must be positive".into(),
        ));
    }
    Ok(3.0 * (sigma_w2 / sigma_p2).sqrt())
}

/// `b_t = 1` iff `|ĥ_t| > γ`.
pub fn threshold_paths(h_hat: &[Complex64], gamma: f64) -> Vec<bool> {
    h_hat.iter().map(|h| h.norm() > gamma).collect()
}

/// `Ĥ_eff = Σ_t b_t ĥ_t Θ_t` over precomputed grid subchannels.
pub fn assemble_from_taps(
    h_hat: &[Complex64],
    indicators: &[bool],
    taps: &[Tap],
    n: usize,
) -> Result<SparseChannel> {
    check_len(taps.len(), h_hat.len())?;
    check_len(taps.len(), indicators.len())?;
    let mut h = SparseChannel::zeros(n);
    for ((tap, g), &b) in taps.iter().zip(h_hat).zip(indicators) {
        if b {
            h.add_scaled(*g, tap);
        }
    }
    Ok(h)
}

/// `Ĥ_eff = Σ_t b_t ĥ_t Θ_t`.
pub fn assemble_h_eff(
    h_hat: &[Complex64],
    indicators: &[bool],
    cfg: &AfdmConfig,
) -> Result<SparseChannel> {
    assemble_from_taps(h_hat, indicators, &grid_taps(cfg)?, cfg.n())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{complex_normal, effective_matrix, sample_channel};
    use crate::pilot::{build_pilot_vector, PilotConfig};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    fn gram_error(phi: &DMatrix<Complex64>, sigma_p2: f64) -> (f64, f64) {
        let g = phi.adjoint() * phi;
        let mut diag: f64 = 0.0;
        let mut off: f64 = 0.0;
        for r in 0..g.nrows() {
            for col in 0..g.ncols() {
                if r == col {
                    diag = diag.max((g[(r, col)] - sigma_p2).norm());
                } else {
                    off = off.max(g[(r, col)].norm());
                }
            }
        }
        (diag, off)
    }

    #[test]
    fn single_hypothesis_phi() {
        let cfg = AfdmConfig::default_params(8, 0, 0).unwrap();
        let mut e0 = vec![c(0.0, 0.0); 8];
        e0[0] = c(1.0, 0.0);
        let phi = build_phi_p(&e0, &cfg).unwrap();
        assert_eq!(phi.shape(), (8, 1));
        assert_eq!(phi[(0, 0)], c(1.0, 0.0));
    }

    #[test]
    fn legal_grid_gives_orthogonal_columns() {
        let cfg = AfdmConfig::default_params(64, 2, 2).unwrap();
        let pc = PilotConfig::new(2, 3.0, &cfg).unwrap();
        let phi = build_phi_p(&build_pilot_vector(&pc, &cfg).unwrap(), &cfg).unwrap();
        let (diag, off) = gram_error(&phi, 3.0);
        assert!(diag < 1e-9 && off < 1e-9);
    }

    #[test]
    fn spacing_q_breaks_orthogonality() {
        let cfg = AfdmConfig::default_params(64, 2, 2).unwrap();
        let mut xp = vec![c(0.0, 0.0); 64];
        xp[0] = c(1.0 / 2f64.sqrt(), 0.0);
        xp[14] = xp[0];
        let phi = build_phi_p(&xp, &cfg).unwrap();
        let (_, off) = gram_error(&phi, 1.0);
        assert!(off > 1e-6);
    }

    #[test]
    fn noise_variance_examples() {
        let prior = ChannelPrior::new(vec![0.25; 4]).unwrap();
        assert_eq!(effective_noise_variance(&prior, 10.0, 1.0), 11.0);
        assert_eq!(effective_noise_variance(&prior, 0.0, 1.5), 1.5);
    }

    #[test]
    fn prior_must_be_positive() {
        assert!(ChannelPrior::new(vec![1.0, 0.0]).is_err());
        assert!(ChannelPrior::new(vec![]).is_err());
        assert!((ChannelPrior::uniform(15).total_power() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn threshold_examples() {
        assert!((default_threshold(1.0, 1e5).unwrap() - 9.486_832_980_505_138e-3).abs() < 1e-12);
        assert_eq!(default_threshold(0.0, 1e5).unwrap(), 0.0);
        assert!((default_threshold(9.0, 1.0).unwrap() - 9.0).abs() < 1e-12);
        assert!(default_threshold(1.0, 0.0).is_err());
        assert_eq!(
            threshold_paths(&[c(0.5, 0.0), c(0.01, 0.0)], 0.1),
            vec![true, false]
        );
        assert_eq!(
            threshold_paths(&[c(0.0, 0.0), c(0.0, 1e-12), c(-3.0, 0.0)], 0.0),
            vec![false, true, true]
        );
    }

    #[test]
    fn zero_observation_gives_zero_estimate() {
        let cfg = AfdmConfig::default_params(64, 2, 2).unwrap();
        let xp = build_pilot_vector(&PilotConfig::new(3, 100.0, &cfg).unwrap(), &cfg).unwrap();
        let phi = build_phi_p(&xp, &cfg).unwrap();
        let prior = ChannelPrior::uniform(15);
        let h = mmse_estimate(&[c(0.0, 0.0); 64], &phi, &prior, 1.0).unwrap();
        assert!(h.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn full_and_diagonal_forms_agree() {
        let cfg = AfdmConfig::default_params(64, 2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let xp = build_pilot_vector(&PilotConfig::new(4, 1e3, &cfg).unwrap(), &cfg).unwrap();
        let phi = build_phi_p(&xp, &cfg).unwrap();
        let prior = ChannelPrior::new((1..=15).map(|i| 0.02 * i as f64).collect()).unwrap();
        let est = MmseEstimator::new(phi.clone(), &prior, 3.0).unwrap();
        assert!(est.is_diagonal());
        for _ in 0..20 {
            let y: Vec<Complex64> = (0..64).map(|_| complex_normal(&mut rng, 5.0)).collect();
            let full = mmse_estimate(&y, &phi, &prior, 3.0).unwrap();
            let diag = mmse_estimate_diagonal(&y, &phi, &prior, 3.0).unwrap();
            assert!(max_diff(&full, &diag) < 1e-10);
            assert!(max_diff(&full, &est.estimate(&y).unwrap()) < 1e-10);
        }
    }

    #[test]
    fn error_variances_match_covariance_diagonal() {
        let cfg = AfdmConfig::default_params(64, 2, 2).unwrap();
        let prior = ChannelPrior::new((1..=15).map(|i| 0.02 * i as f64).collect()).unwrap();
        let legal = build_pilot_vector(&PilotConfig::new(4, 1e3, &cfg).unwrap(), &cfg).unwrap();
        let mut packed = vec![c(0.0, 0.0); 64];
        packed[0] = c(10.0, 0.0);
        packed[3] = c(10.0, 0.0);
        for xp in [legal.to_vec(), packed] {
            let phi = build_phi_p(&xp, &cfg).unwrap();
            let cov = error_covariance(&phi, &prior, 3.0).unwrap();
            let est = MmseEstimator::new(phi, &prior, 3.0).unwrap();
            for (t, v) in est.error_variances().iter().enumerate() {
                assert!((v - cov[(t, t)].re).abs() < 1e-12 * v.max(1.0));
            }
        }
    }

    #[test]
    fn non_orthogonal_pilots_use_full_solve() {
        let cfg = AfdmConfig::default_params(64, 2, 2).unwrap();
        let mut xp = vec![c(0.0, 0.0); 64];
        xp[0] = c(10.0, 0.0);
        xp[3] = c(10.0, 0.0);
        let phi = build_phi_p(&xp, &cfg).unwrap();
        let prior = ChannelPrior::uniform(15);
        let est = MmseEstimator::new(phi.clone(), &prior, 1.0).unwrap();
        assert!(!est.is_diagonal());
        assert!(mmse_estimate_diagonal(&xp, &phi, &prior, 1.0).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let y: Vec<Complex64> = (0..64).map(|_| complex_normal(&mut rng, 1.0)).collect();
        let a = est.estimate(&y).unwrap();
        let b = mmse_estimate(&y, &phi, &prior, 1.0).unwrap();
        assert!(max_diff(&a, &b) < 1e-10);
    }

    #[test]
    fn noise_free_estimate_is_scalar_shrinkage() {
        let cfg = AfdmConfig::default_params(64, 2, 2).unwrap();
        let sigma_p2 = 1e5;
        let xp = build_pilot_vector(&PilotConfig::new(1, sigma_p2, &cfg).unwrap(), &cfg).unwrap();
        let phi = build_phi_p(&xp, &cfg).unwrap();
        let prior = ChannelPrior::new(vec![1.0; 15]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let h: Vec<Complex64> = (0..15).map(|_| complex_normal(&mut rng, 1.0)).collect();
        let y = &phi * DVector::from_vec(h.clone());
        let est = mmse_estimate(y.as_slice(), &phi, &prior, 1.0).unwrap();
        for (e, t) in est.iter().zip(&h) {
            assert!((e - t).norm() < 2e-5 * t.norm() + 1e-9);
            // exact shrinkage factor
            let expected = t * (sigma_p2 / (sigma_p2 + 1.0));
            assert!((e - expected).norm() < 1e-10);
        }
    }

    #[test]
    fn noise_free_three_paths_detected_exactly() {
        let cfg = AfdmConfig::default_params(64, 2, 2).unwrap();
        let sigma_p2 = 1e5;
        let xp = build_pilot_vector(&PilotConfig::new(2, sigma_p2, &cfg).unwrap(), &cfg).unwrap();
        let phi = build_phi_p(&xp, &cfg).unwrap();
        let prior = ChannelPrior::uniform(15);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let ch = sample_channel(&mut rng, 3, &cfg).unwrap();
        let y = effective_matrix(&ch, &cfg).unwrap().apply(&xp).unwrap();
        let sigma_w2 = effective_noise_variance(&prior, 0.0, 1.0);
        let h_hat = MmseEstimator::new(phi, &prior, sigma_w2)
            .unwrap()
            .estimate(&y)
            .unwrap();
        let res = EstimationResult::new(h_hat, default_threshold(sigma_w2, sigma_p2).unwrap());
        let truth = ch.grid_vector(&cfg).unwrap();
        let support: Vec<bool> = truth.iter().map(|h| h.norm() > 0.0).collect();
        assert_eq!(res.indicators, support);
    }

    #[test]
    fn assemble_examples() {
        let cfg = AfdmConfig::default_params(32, 1, 1).unwrap();
        let zeros = vec![c(0.0, 0.0); 6];
        assert!(assemble_h_eff(&zeros, &[false; 6], &cfg).unwrap().is_zero());

        // grid index of (delay 0, doppler 0) is alpha_max + 1 = 2
        let mut h = zeros.clone();
        h[1] = c(1.0, 0.0);
        let mut b = [false; 6];
        b[1] = true;
        let dense = assemble_h_eff(&h, &b, &cfg).unwrap().to_dense();
        assert!((dense - DMatrix::identity(32, 32))
            .iter()
            .all(|v| v.norm() < 1e-12));

        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let ch = sample_channel(&mut rng, 2, &cfg).unwrap();
        let grid = ch.grid_vector(&cfg).unwrap();
        let support: Vec<bool> = grid.iter().map(|v| v.norm() > 0.0).collect();
        let a = assemble_h_eff(&grid, &support, &cfg).unwrap().to_dense();
        let e = effective_matrix(&ch, &cfg).unwrap().to_dense();
        assert!((a - e).iter().all(|v| v.norm() < 1e-10));
    }

    #[test]
    fn trace_identity() {
        let cfg = AfdmConfig::default_params(512, 2, 2).unwrap();
        for count in [1, 4, 16, 34] {
            let pc = PilotConfig::new(count, 7.0, &cfg).unwrap();
            let phi = build_phi_p(&build_pilot_vector(&pc, &cfg).unwrap(), &cfg).unwrap();
            let tr: f64 = (phi.adjoint() * &phi).trace().re;
            assert!((tr - 15.0 * 7.0).abs() < 1e-9);
        }
    }
}
