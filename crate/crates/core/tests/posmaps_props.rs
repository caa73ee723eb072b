use entmap_core::bipartite::{apply_map_first, BipartiteDims, DensityMatrix};
use entmap_core::matcore::{eigenvalues_hermitian, ComplexMatrix, Tolerance};
use entmap_core::posmaps::{
    build_map, grid_min_eigenvalue, ncp_quick_check, sampled_min_eigenvalue, MapDescriptor, MapFamily, NcpVerdict,
};
use entmap_core::sampling::{density, gaussian_complex, seeded, unit_vector, unitary, DEFAULT_SEED};
use entmap_core::Complex64;
use proptest::prelude::*;

fn certified_families() -> Vec<MapFamily> {
    let mut f = vec![
        MapFamily::Phi0,
        MapFamily::Psi0,
        MapFamily::Phi33,
        MapFamily::Phi33Prime,
        MapFamily::Phi4 { variant: 1 },
        MapFamily::Phi4 { variant: 2 },
        MapFamily::Phi4 { variant: 3 },
        MapFamily::DeltaT { t: vec![3.0, 3.5, 4.0] },
        MapFamily::DeltaT { t: vec![4.0; 4] },
        MapFamily::PsiPi { pi: vec![2, 0, 1, 3] },
        MapFamily::PsiPi { pi: vec![1, 0, 3, 2, 4] },
        MapFamily::PsiPi { pi: vec![0, 1, 2] },
    ];
    for n in 3..=6 {
        for k in 1..n {
            f.push(MapFamily::PhiNK { n, k });
        }
    }
    f
}

fn build(f: &MapFamily) -> entmap_core::posmaps::ElementaryOperator {
    build_map(&MapDescriptor::new(f.clone()).unwrap()).unwrap()
}

#[test]
fn built_in_families_survive_positivity_sampling() {
    for f in certified_families() {
        let phi = build(&f);
        let sampled = sampled_min_eigenvalue(&phi, 100_000, DEFAULT_SEED).unwrap();
        let grid = grid_min_eigenvalue(&phi, 12).unwrap();
        assert!(sampled >= -1e-10, "{f}: sampled {sampled}");
        assert!(grid >= -1e-10, "{f}: grid {grid}");
    }
}

#[test]
fn undersized_delta_is_not_positive() {
    for n in 2..=6 {
        let phi = build(&MapFamily::DeltaT { t: vec![n as f64 - 0.1; n] });
        let ones = vec![Complex64::new(1.0, 0.0); n];
        let image = phi.evaluate(&ComplexMatrix::outer(&ones, &ones)).unwrap();
        assert!(eigenvalues_hermitian(&image).unwrap()[0] < 0.0, "n={n}");
    }
}

#[test]
fn quick_ncp_verdict_implies_non_cp() {
    let tol = Tolerance::default();
    for f in certified_families() {
        let phi = build(&f);
        let quick = ncp_quick_check(phi.kraus_form().unwrap()).unwrap();
        let cp = phi.is_completely_positive(&tol).unwrap();
        if quick.verdict == NcpVerdict::ProvedNcp {
            assert!(!cp.completely_positive, "{f}");
        }
        if let MapFamily::PhiNK { .. } = f {
            assert_eq!(quick.verdict, NcpVerdict::ProvedNcp);
            assert!(cp.choi_min_eigenvalue < -1e-6);
        }
    }
    let delta = build(&MapFamily::DeltaT { t: vec![3.0; 3] });
    assert!(delta.is_completely_positive(&tol).unwrap().completely_positive);
}

#[test]
fn phi_nk_three_one_has_the_named_choi_matrix() {
    assert_eq!(build(&MapFamily::PhiNK { n: 3, k: 1 }).choi(), build(&MapFamily::Phi33).choi());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn built_ins_preserve_hermiticity(seed in any::<u64>(), pick in 0usize..30) {
        let families = certified_families();
        let f = &families[pick % families.len()];
        let phi = build(f);
        let mut rng = seeded(seed);
        let d = phi.dim_in();
        let x = ComplexMatrix::from_fn(d, d, |_, _| gaussian_complex(&mut rng));
        let lhs = phi.evaluate(&x.adjoint()).unwrap();
        let rhs = phi.evaluate(&x).unwrap().adjoint();
        prop_assert!((&lhs - &rhs).max_abs() < 1e-12);
        prop_assert!(phi.is_hermiticity_preserving(&Tolerance::default()));
    }

    #[test]
    fn conjugation_matches_its_definition(seed in any::<u64>(), n in 3usize..6, k in 1usize..5) {
        prop_assume!(k < n);
        let phi = build(&MapFamily::PhiNK { n, k });
        let mut rng = seeded(seed);
        let (u, v) = (unitary(&mut rng, n), unitary(&mut rng, n));
        let conj = phi.conjugate(&u, &v).unwrap();
        let x = ComplexMatrix::from_fn(n, n, |_, _| gaussian_complex(&mut rng));
        let direct = &(&v.adjoint() * &phi.evaluate(&(&(&u.adjoint() * &x) * &u)).unwrap()) * &v;
        prop_assert!((&conj.evaluate(&x).unwrap() - &direct).max_abs() < 1e-10);
    }

    #[test]
    fn conjugation_commutes_with_rotating_the_state(seed in any::<u64>(), db in 1usize..4) {
        // (Φ^{U,V} ⊗ I)((U ⊗ I)ρ(U ⊗ I)†) = (V† ⊗ I)(Φ ⊗ I)ρ(V ⊗ I): same spectrum.
        let n = 3;
        let phi = build(&MapFamily::PhiNK { n, k: 1 });
        let mut rng = seeded(seed);
        let (u, v) = (unitary(&mut rng, n), unitary(&mut rng, n));
        let dims = BipartiteDims::new(n, db).unwrap();
        let rho = DensityMatrix::new(dims, density(&mut rng, n * db), &Tolerance::default()).unwrap();
        let rotated = rho.local_unitary(&u, &ComplexMatrix::identity(db)).unwrap();
        let a = eigenvalues_hermitian(&apply_map_first(&phi.conjugate(&u, &v).unwrap(), &rotated).unwrap()).unwrap();
        let b = eigenvalues_hermitian(&apply_map_first(&phi, &rho).unwrap()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn rotated_swap_map_detects_two_level_pure_states(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let psi = unit_vector(&mut rng, 4);
        let dims = BipartiteDims::square(2).unwrap();
        let state = entmap_core::bipartite::PureState::new(dims, psi).unwrap();
        let s = entmap_core::bipartite::schmidt(&state);
        prop_assume!(s.rank == 2);
        let u = s.left_unitary(2).unwrap();
        let v = unitary(&mut rng, 2);
        let phi = build(&MapFamily::Phi0).conjugate(&u, &v).unwrap();
        let lambda = eigenvalues_hermitian(&apply_map_first(&phi, &state.density()).unwrap()).unwrap()[0];
        prop_assert!((lambda + s.coefficients[0] * s.coefficients[1]).abs() < 1e-9);
    }
}
