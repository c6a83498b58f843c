use pfspace_core::numerics::{herm_eig, inv_sqrt_on_support, polar, range_projection, sqrt_psd};
use pfspace_core::random::{ginibre, random_hermitian, random_psd, rng_from_seed};
use pfspace_core::{CMatrix, Tolerances};
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), n in 2usize..=8) {
        let mut rng = rng_from_seed(seed);
        let m = random_hermitian(&mut rng, n);
        let e = herm_eig(&m, &tol()).unwrap();
        prop_assert!(e.reconstruct().dist(&m) <= 1e-9 * m.fro_norm());
        prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn polar_factors(seed in any::<u64>(), n in 2usize..=6, rank in 1usize..=6) {
        let mut rng = rng_from_seed(seed);
        let rank = rank.min(n);
        let m = &ginibre(&mut rng, n, rank) * &ginibre(&mut rng, rank, n);
        let pd = polar(&m, &tol()).unwrap();
        prop_assert!((&pd.u * &pd.p).dist(&m) <= 1e-9 * m.fro_norm());
        prop_assert!((&pd.u * &pd.u.adjoint()).dist(&range_projection(&m, &tol())) < 1e-8);
        prop_assert!((&pd.u.adjoint() * &pd.u).dist(&range_projection(&m.adjoint(), &tol())) < 1e-8);
    }

    #[test]
    fn inverse_root_times_root_is_range(seed in any::<u64>(), n in 2usize..=6, rank in 1usize..=6) {
        let mut rng = rng_from_seed(seed);
        let a = random_psd(&mut rng, n, rank.min(n));
        let s = sqrt_psd(&a, &tol()).unwrap();
        let w = inv_sqrt_on_support(&a, &tol()).unwrap();
        prop_assert!((&w * &s).dist(&range_projection(&a, &tol())) < 1e-7);
    }

    #[test]
    fn range_projection_is_projection_and_right_invariant(seed in any::<u64>(), n in 2usize..=6, rank in 1usize..=6) {
        let mut rng = rng_from_seed(seed);
        let rank = rank.min(n);
        let m = &ginibre(&mut rng, n, rank) * &ginibre(&mut rng, rank, n);
        let p = range_projection(&m, &tol());
        prop_assert!((&p * &p).dist(&p) < 1e-10);
        prop_assert!(p.hermitian_deviation() < 1e-12);
        prop_assert!((p.trace().re - rank as f64).abs() < 1e-9);
        let g = ginibre(&mut rng, n, n);
        prop_assert!(range_projection(&(&m * &g), &tol()).dist(&p) < 1e-7);
    }
}

#[test]
fn zero_matrix_has_rank_zero() {
    assert_eq!(range_projection(&CMatrix::zeros(4, 4), &tol()).fro_norm(), 0.0);
}
