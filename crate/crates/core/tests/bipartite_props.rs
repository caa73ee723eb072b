use entmap_core::bipartite::{
    apply_map_first, convex_mix, partial_transpose_first, partial_transpose_first_matrix, realign, schmidt,
    BipartiteDims, DensityMatrix, PureState,
};
use entmap_core::matcore::{eigenvalues_hermitian, is_psd, rank, trace_norm, ComplexMatrix, Tolerance};
use entmap_core::posmaps::{build_map, ElementaryOperator, MapDescriptor, MapFamily, Term};
use entmap_core::sampling::{density, gaussian_complex, seeded, simplex, unit_vector, unitary};
use entmap_core::Complex64;
use proptest::prelude::*;

fn random_state(seed: u64, da: usize, db: usize) -> DensityMatrix {
    let mut rng = seeded(seed);
    DensityMatrix::new(BipartiteDims::new(da, db).unwrap(), density(&mut rng, da * db), &Tolerance::default())
        .unwrap()
}

fn random_separable(seed: u64, da: usize, db: usize, terms: usize) -> DensityMatrix {
    let mut rng = seeded(seed);
    let tol = Tolerance::default();
    let parts: Vec<DensityMatrix> = (0..terms)
        .map(|_| {
            let u = unit_vector(&mut rng, da);
            DensityMatrix::product(&ComplexMatrix::outer(&u, &u), &density(&mut rng, db), &tol).unwrap()
        })
        .collect();
    let w = simplex(&mut rng, terms);
    let sum: f64 = w.iter().sum();
    let mix: Vec<(f64, &DensityMatrix)> = w.iter().map(|x| x / sum).zip(parts.iter()).collect();
    convex_mix(&mix).unwrap()
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn partial_transpose_is_a_trace_preserving_involution(seed in any::<u64>(), da in 1usize..5, db in 1usize..5) {
        let rho = random_state(seed, da, db);
        let pt = partial_transpose_first(&rho);
        prop_assert!(pt.hermitian_defect() < 1e-12);
        prop_assert!((pt.trace() - rho.matrix().trace()).norm() < 1e-12);
        let back = partial_transpose_first_matrix(&pt, rho.dims()).unwrap();
        prop_assert!((&back - rho.matrix()).max_abs() == 0.0);
    }

    #[test]
    fn partial_transpose_spectrum_ignores_factor_order(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
        // Swapping the factors turns a first-factor transpose into a
        // second-factor one; both have the same spectrum.
        let rho = random_state(seed, da, db);
        let swap: Vec<usize> = (0..da * db).map(|p| (p % da) * db + p / da).collect();
        let swapped = rho.matrix().permuted(&swap);
        let dims = BipartiteDims::new(db, da).unwrap();
        let pt_second = partial_transpose_first_matrix(&swapped, dims).unwrap().transpose();
        let a = sorted(eigenvalues_hermitian(&partial_transpose_first(&rho)).unwrap());
        let b = sorted(eigenvalues_hermitian(&pt_second).unwrap());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn realignment_norm_is_local_unitary_invariant(seed in any::<u64>(), da in 2usize..5, db in 2usize..5) {
        let rho = random_state(seed, da, db);
        let mut rng = seeded(seed ^ 0xabc);
        let rotated = rho.local_unitary(&unitary(&mut rng, da), &unitary(&mut rng, db)).unwrap();
        prop_assert!((trace_norm(&realign(&rho)) - trace_norm(&realign(&rotated))).abs() < 1e-9);
    }

    #[test]
    fn separable_mixtures_pass_both_criteria(seed in any::<u64>(), da in 2usize..5, db in 2usize..5, terms in 1usize..9) {
        let rho = random_separable(seed, da, db, terms);
        rho.validate(&Tolerance::default()).unwrap();
        prop_assert!(is_psd(&partial_transpose_first(&rho), &Tolerance::default()).unwrap().psd);
        prop_assert!(trace_norm(&realign(&rho)) <= 1.0 + 1e-9);
    }

    #[test]
    fn schmidt_matches_reshaped_rank(seed in any::<u64>(), da in 1usize..6, db in 1usize..6, cut in 1usize..6) {
        let mut rng = seeded(seed);
        // Rank at most `cut` by construction.
        let mut v = vec![Complex64::new(0.0, 0.0); da * db];
        for _ in 0..cut {
            let (u, w) = (unit_vector(&mut rng, da), unit_vector(&mut rng, db));
            let c = gaussian_complex(&mut rng);
            for i in 0..da {
                for j in 0..db {
                    v[i * db + j] += c * u[i] * w[j];
                }
            }
        }
        let psi = PureState::normalized(BipartiteDims::new(da, db).unwrap(), v).unwrap();
        let s = schmidt(&psi);
        let reshaped = ComplexMatrix::from_fn(da, db, |i, j| psi.vector()[i * db + j]);
        prop_assert_eq!(s.rank, rank(&reshaped, 1e-10));
        prop_assert!(s.rank <= cut.min(da).min(db));
        prop_assert!((s.coefficients.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-10);
        prop_assert!(s.coefficients.windows(2).all(|w| w[0] >= w[1]));
        let err: f64 = s.reconstruct().iter().zip(psi.vector()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        prop_assert!(err <= 1e-9);
    }

    #[test]
    fn map_application_is_linear_and_matches_blocks(seed in any::<u64>(), db in 1usize..4, terms in 1usize..4) {
        let mut rng = seeded(seed);
        let (da, dk) = (3, 2);
        let random = |rng: &mut _, r, c| ComplexMatrix::from_fn(r, c, |_, _| gaussian_complex(rng));
        let t: Vec<Term> = (0..terms).map(|_| Term { left: random(&mut rng, dk, da), right: random(&mut rng, da, dk) }).collect();
        let phi = ElementaryOperator::new(da, dk, t).unwrap();
        let dims = BipartiteDims::new(da, db).unwrap();
        let x = DensityMatrix::raw(dims, random(&mut rng, da * db, da * db)).unwrap();
        let y = DensityMatrix::raw(dims, random(&mut rng, da * db, da * db)).unwrap();
        let a = Complex64::new(0.3, -1.2);
        let combo = DensityMatrix::raw(dims, &x.matrix().scale(a) + y.matrix()).unwrap();
        let lhs = apply_map_first(&phi, &combo).unwrap();
        let rhs = &apply_map_first(&phi, &x).unwrap().scale(a) + &apply_map_first(&phi, &y).unwrap();
        prop_assert!((&lhs - &rhs).max_abs() < 1e-10 * (1.0 + lhs.max_abs()));

        let mut blocks = ComplexMatrix::zeros(dk * db, dk * db);
        for i in 0..da {
            for j in 0..da {
                let image = phi.evaluate(&ComplexMatrix::unit(da, da, i, j)).unwrap();
                blocks += &image.kron(&x.matrix().block(i * db, j * db, db, db));
            }
        }
        let direct = apply_map_first(&phi, &x).unwrap();
        prop_assert!((&direct - &blocks).max_abs() < 1e-10 * (1.0 + direct.max_abs()));
    }
}

#[test]
fn hermiticity_preserving_maps_give_hermitian_output() {
    let rho = random_state(5, 4, 3);
    for k in 1..4 {
        let phi = build_map(&MapDescriptor::phi_nk(4, k).unwrap()).unwrap();
        assert!(apply_map_first(&phi, &rho).unwrap().hermitian_defect() < 1e-12);
    }
    let phi0 = build_map(&MapDescriptor::embedded(MapFamily::Phi0, 4, 3).unwrap()).unwrap();
    let out = apply_map_first(&phi0, &rho).unwrap();
    assert_eq!(out.shape(), (9, 9));
    assert!(out.hermitian_defect() < 1e-12);
}
