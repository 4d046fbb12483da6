use afdm_core::channel::{
    complex_normal, effective_matrix, propagate, sample_channel, theta_matrix, theta_matrix_product,
};
use afdm_core::daft::daft_matrix;
use afdm_core::estimation::build_phi_p;
use afdm_core::pilot::{build_pilot_vector, max_pilot_count};
use afdm_core::{AfdmConfig, Complex64, Daft, PilotConfig};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn frame(seed: u64, n: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| complex_normal(&mut rng, 1.0)).collect()
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn energy(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum()
}

/// Any frame length with the largest grid that fits.
fn config() -> impl Strategy<Value = AfdmConfig> {
    (1usize..300, 0usize..3, 0usize..3).prop_filter_map("grid must fit", |(n, a, l)| {
        AfdmConfig::default_params(n, a, l).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn daft_is_unitary(cfg in config(), seed: u64, c2 in -1.0f64..1.0) {
        let cfg = cfg.with_c2(c2).unwrap();
        let t = Daft::new(&cfg);
        let x = frame(seed, cfg.n());
        let y = t.forward(&x).unwrap();
        prop_assert!((energy(&y) - energy(&x)).abs() < 1e-9 * energy(&x).max(1.0));
        prop_assert!(max_diff(&t.inverse(&y).unwrap(), &x) < 1e-10);
    }

    #[test]
    fn fast_daft_matches_dense_matrix(n in 1usize..40, seed: u64) {
        let cfg = AfdmConfig::default_params(n, 0, 0).unwrap();
        let x = frame(seed, n);
        let dense = daft_matrix(&cfg) * DVector::from_column_slice(&x);
        prop_assert!(max_diff(&Daft::new(&cfg).forward(&x).unwrap(), dense.as_slice()) < 1e-10);
    }

    #[test]
    fn subchannels_are_unitary_and_match_product_form(
        n in 15usize..48,
        delay in 0usize..=2,
        doppler in -2i64..=2,
    ) {
        let cfg = AfdmConfig::default_params(n, 2, 2).unwrap();
        let closed = theta_matrix(delay, doppler, &cfg).unwrap();
        let product = theta_matrix_product(delay, doppler, &cfg).unwrap();
        let eye = DMatrix::<Complex64>::identity(n, n);
        let dev = (&closed * closed.adjoint() - eye).iter().map(|v| v.norm()).fold(0.0, f64::max);
        prop_assert!(dev < 1e-10);
        prop_assert!((closed - product).iter().map(|v| v.norm()).fold(0.0, f64::max) < 1e-10);
    }

    #[test]
    fn channel_matrix_matches_time_domain(n in 15usize..80, paths in 1usize..=3, seed: u64) {
        let cfg = AfdmConfig::default_params(n, 2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = sample_channel(&mut rng, paths, &cfg).unwrap();
        let t = Daft::new(&cfg);
        let x = frame(seed ^ 1, n);
        let y = t.forward(&propagate(&t.inverse(&x).unwrap(), &ch, &cfg).unwrap()).unwrap();
        let h = effective_matrix(&ch, &cfg).unwrap();
        prop_assert!(max_diff(&y, &h.apply(&x).unwrap()) < 1e-10);
        prop_assert_eq!(h.taps().len(), paths);
    }

    #[test]
    fn legal_pilot_grids_are_orthogonal(n in 15usize..600, pick in 0.0f64..1.0, power in 1.0f64..1e5) {
        let cfg = AfdmConfig::default_params(n, 2, 2).unwrap();
        let count = 1 + (pick * max_pilot_count(&cfg) as f64) as usize;
        let count = count.min(max_pilot_count(&cfg));
        let pc = PilotConfig::new(count, power, &cfg).unwrap();
        let phi = build_phi_p(&build_pilot_vector(&pc, &cfg).unwrap(), &cfg).unwrap();
        let gram = phi.adjoint() * &phi;
        for r in 0..gram.nrows() {
            for c in 0..gram.ncols() {
                let expect = if r == c { power } else { 0.0 };
                prop_assert!((gram[(r, c)] - expect).norm() < 1e-9 * power.max(1.0));
            }
        }
    }

    #[test]
    fn pilot_grid_never_exceeds_the_frame(n in 15usize..600) {
        let cfg = AfdmConfig::default_params(n, 2, 2).unwrap();
        let m = max_pilot_count(&cfg);
        let pc = PilotConfig::new(m, 1.0, &cfg).unwrap();
        let last = *pc.indices().last().unwrap();
        prop_assert!(last + cfg.guard() < n);
        prop_assert!(PilotConfig::new(m + 1, 1.0, &cfg).is_err());
    }
}
