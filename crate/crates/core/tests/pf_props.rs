use pfspace_core::channels::{direct_sum, embed_classical, Channel, ClassicalMatrix};
use pfspace_core::numerics::{herm_eig, range_projection, rank};
use pfspace_core::pf::{
    analyze, classical_pf, cw_bounds, cw_certify, eigen_residual, eigenspace, irreducibility_certificates, is_irreducible,
    p_max, pf_left, pf_right, spectrum,
};
use pfspace_core::random::{random_channel, random_cp_map, random_unitary, rng_from_seed};
use pfspace_core::Tolerances;
use proptest::prelude::*;
use rand::Rng;

fn tol() -> Tolerances {
    Tolerances::default()
}

/// Block sum of two random CP maps, hidden by a random unitary change of basis.
fn hidden_block_sum(seed: u64, na: usize, nb: usize) -> Channel {
    let mut rng = rng_from_seed(seed);
    let a = random_cp_map(&mut rng, na, 2);
    let b = random_cp_map(&mut rng, nb, 2);
    let u = random_unitary(&mut rng, na + nb);
    direct_sum(&a, &b).sandwich(&u, &u.adjoint())
}

fn positive_matrix(seed: u64, n: usize) -> ClassicalMatrix {
    let mut rng = rng_from_seed(seed);
    ClassicalMatrix::new(n, (0..n * n).map(|_| rng.random_range(0.05..2.0)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigenvectors_solve_eigen_equation(seed in any::<u64>(), n in 2usize..=4, m in 1usize..=3) {
        let ch = random_cp_map(&mut rng_from_seed(seed), n, m);
        let a = analyze(&ch, &tol()).unwrap();
        prop_assert!(a.residuals.right <= 1e-7, "{:?}", a.residuals);
        prop_assert!(a.residuals.left <= 1e-7, "{:?}", a.residuals);
        prop_assert!(a.residuals.zeta <= 1e-7, "{:?}", a.residuals);
        for y in &a.eig_space_basis {
            prop_assert!(eigen_residual(&ch, y, a.r) <= 1e-7);
        }
        prop_assert_eq!(a.zeta_rank, a.p_max_rank);
        prop_assert!(range_projection(&a.zeta, &tol()).dist(&a.p_max) < 1e-6);
    }

    #[test]
    fn radius_is_a_spectral_value(seed in any::<u64>(), n in 2usize..=4) {
        let ch = random_cp_map(&mut rng_from_seed(seed), n, 2);
        let sp = spectrum(&ch, &tol()).unwrap();
        let eigs = sp.schur().eigenvalues();
        prop_assert!(eigs.iter().any(|z| (z.re - sp.r).abs() <= 1e-8 * sp.r && z.im.abs() <= 1e-8 * sp.r));
        prop_assert!(eigs.iter().all(|z| z.norm() <= sp.r * (1.0 + 1e-9)));
    }

    #[test]
    fn irreducible_maps_have_a_faithful_simple_eigenvector(seed in any::<u64>(), n in 2usize..=4) {
        let ch = random_cp_map(&mut rng_from_seed(seed), n, 2);
        prop_assume!(is_irreducible(&ch));
        prop_assert_eq!(eigenspace(&ch, &tol()).unwrap().len(), 1);
        for y in [pf_right(&ch, &tol()).unwrap(), pf_left(&ch, &tol()).unwrap()] {
            let e = herm_eig(&y.hermitian_part(), &tol()).unwrap();
            prop_assert!(e.min() > 1e-10 * e.max(), "{:?}", e.values);
        }
        prop_assert_eq!(rank(&p_max(&ch, &tol()).unwrap(), &tol()), n);
    }

    #[test]
    fn reducible_sums_are_detected(seed in any::<u64>(), na in 1usize..=2, nb in 1usize..=2) {
        let ch = hidden_block_sum(seed, na, nb);
        prop_assert!(!is_irreducible(&ch));
        let cert = irreducibility_certificates(&ch, 8, seed, &tol());
        prop_assert!(cert.concordant(), "{cert:?}");
    }

    #[test]
    fn certificates_agree_on_random_channels(seed in any::<u64>(), n in 2usize..=3, m in 1usize..=2) {
        let ch = random_channel(&mut rng_from_seed(seed), n, m);
        let cert = irreducibility_certificates(&ch, 8, seed ^ 0x5a5a, &tol());
        prop_assert!(cert.concordant(), "{cert:?}");
    }

    #[test]
    fn collatz_wielandt_brackets_radius(seed in any::<u64>(), n in 2usize..=5) {
        let a = positive_matrix(seed, n);
        let mut rng = rng_from_seed(seed.wrapping_add(1));
        let z: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..3.0)).collect();
        let (lo, hi) = cw_bounds(&a, &z).unwrap();
        let (r, v) = classical_pf(&a, &tol()).unwrap();
        prop_assert!(lo <= r * (1.0 + 1e-12) && r <= hi * (1.0 + 1e-12), "{lo} {r} {hi}");
        let (lo, hi) = cw_bounds(&a, &v).unwrap();
        prop_assert!((hi - lo).abs() <= 1e-8 * r && (lo - r).abs() <= 1e-8 * r);
    }

    #[test]
    fn left_eigenvector_fires_the_eigen_clause(seed in any::<u64>(), n in 2usize..=4) {
        let ch = embed_classical(&positive_matrix(seed, n)).unwrap();
        let z = pf_left(&ch, &tol()).unwrap();
        let cert = cw_certify(&ch, &z, &tol()).unwrap();
        prop_assert!(cert.clauses.contains(&3), "{cert:?}");
        prop_assert!(cert.conclusions_hold);
    }
}
