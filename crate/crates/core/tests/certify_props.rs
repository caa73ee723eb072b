use entmap_core::certify::{
    b_matrix, binomial, elementary_symmetric, f_eval, grid_min_f, h_closed_form, h_eval, h_eval_point,
    m_by_determinant, m_closed_form, m_coefficients, BMatrixSpec, HPoint,
};
use entmap_core::matcore::{eigenvalues_hermitian, is_psd, Tolerance};
use entmap_core::sampling::seeded;
use proptest::prelude::*;
use rand::Rng;

/// Positive point with product 1: exponentials of centred log-coordinates.
fn unit_product_point(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = seeded(seed);
    let logs: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
    let mean = logs.iter().sum::<f64>() / n as f64;
    logs.iter().map(|l| (l - mean).exp()).collect()
}

#[test]
fn determinant_route_matches_closed_form() {
    let mut rng = seeded(41);
    for _ in 0..1000 {
        let n = rng.random_range(2..=8);
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..5.0)).collect();
        let (det, closed) = (h_eval(&x), h_closed_form(&x));
        assert!((det - closed).abs() <= 1e-9 * closed.abs().max(1.0), "{x:?}: {det} vs {closed}");
    }
}

#[test]
fn coefficient_extraction_matches_both_routes() {
    for n in 3..=8 {
        let m = m_coefficients(n).unwrap();
        assert_eq!(m.get(n), 1.0);
        assert_eq!(m.get(n - 1), n as f64 - 2.0);
        assert_eq!(m.m0, (n as f64 - 1.0).powi(n as i32 - 1));
        for k in 1..=n {
            assert_eq!(m.get(k), m_closed_form(n, k), "n={n} k={k}");
            if k < n {
                assert_eq!(m.get(k), m_by_determinant(n, k).round(), "n={n} k={k}");
            }
        }
        assert_eq!(m.weighted_sum(), m.m0);
        // The unweighted sum differs from M₀.
        assert_ne!(m.unweighted_sum(), m.m0);
    }
    assert_eq!(m_coefficients(3).unwrap().unweighted_sum(), 2.0);
    assert_eq!(binomial(8, 4), 70);
}

#[test]
fn b_matrix_threshold() {
    let tol = Tolerance::default();
    for n in 2..=8 {
        let edge = n as f64 - 1.0;
        let lambda = eigenvalues_hermitian(&b_matrix(&BMatrixSpec::uniform(n, edge + 0.3).unwrap())).unwrap()[0];
        assert!((lambda - 0.3).abs() < 1e-9);
        assert!(is_psd(&b_matrix(&BMatrixSpec::uniform(n, edge + 1e-6).unwrap()), &tol).unwrap().psd);
        assert!(!is_psd(&b_matrix(&BMatrixSpec::uniform(n, edge - 1e-6).unwrap()), &tol).unwrap().psd);
    }
}

#[test]
fn grid_minimum_is_zero() {
    for (n, res) in [(3, 40), (4, 40), (5, 20), (6, 12)] {
        let g = grid_min_f(n, res).unwrap();
        assert!(g.value >= -1e-10 && g.value <= 1e-6, "n={n}: {}", g.value);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn h_is_nonnegative_on_the_product_constraint(seed in any::<u64>(), n in 2usize..9) {
        let p = HPoint::constrained(unit_product_point(seed, n)).unwrap();
        prop_assert!(h_eval_point(&p) >= -1e-9 * h_closed_form(&p.x).abs().max(1.0));
    }

    #[test]
    fn elementary_symmetric_sums_are_at_least_one(seed in any::<u64>(), n in 2usize..9) {
        let x = unit_product_point(seed, n);
        let e = elementary_symmetric(&x);
        for (k, ek) in e.iter().enumerate().skip(1) {
            // Maclaurin: eₖ / C(n,k) ≥ (Πxᵢ)^{k/n} = 1.
            prop_assert!(ek / binomial(n, k) as f64 >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn f_factorises_through_h(seed in any::<u64>(), n in 3usize..7) {
        let mut rng = seeded(seed);
        let r: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..2.0)).collect();
        let x: Vec<f64> = (0..n).map(|i| (r[(i + 1) % n] / r[i]).powi(2)).collect();
        let prod: f64 = r.iter().product();
        let lhs = f_eval(&r);
        let rhs = prod * prod * h_eval(&x);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs().max(lhs.abs()).max(1e-12));
    }

    #[test]
    fn b_matrix_sign_follows_all_entries(seed in any::<u64>(), n in 2usize..9) {
        let mut rng = seeded(seed);
        let edge = n as f64 - 1.0;
        let tol = Tolerance::default();
        let above: Vec<f64> = (0..n).map(|_| edge + rng.random_range(0.0..3.0)).collect();
        prop_assert!(is_psd(&b_matrix(&BMatrixSpec::new(above).unwrap()), &tol).unwrap().psd);
        let below: Vec<f64> = (0..n).map(|_| edge - rng.random_range(1e-3..3.0)).collect();
        let b = b_matrix(&BMatrixSpec::new(below).unwrap());
        let ones = vec![entmap_core::Complex64::new(1.0, 0.0); n];
        let quad: f64 = b.mat_vec(&ones).iter().map(|z| z.re).sum();
        prop_assert!(quad < 0.0);
    }
}
