use pfspace_core::channels::{compose, convolve, embed_classical, map_of_choi, Choi, ClassicalMatrix};
use pfspace_core::numerics::herm_eig;
use pfspace_core::random::{ginibre, random_channel, random_cp_map, random_psd, rng_from_seed};
use pfspace_core::{CMatrix, Tolerances};
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn transpose_map(n: usize) -> Choi {
    Choi::from_map(n, |d| d.transpose())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn kraus_channels_are_cp(seed in any::<u64>(), n in 2usize..=4, m in 1usize..=4) {
        let mut rng = rng_from_seed(seed);
        prop_assert!(random_channel(&mut rng, n, m).choi().is_cp(&tol()));
    }

    #[test]
    fn negative_choi_is_not_cp(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = rng_from_seed(seed);
        let c = random_psd(&mut rng, n * n, n * n - 1);
        let e = herm_eig(&c, &tol()).unwrap();
        // push the kernel direction below zero
        let v = e.vectors.column(n * n - 1);
        let shifted = &c - &CMatrix::outer(&v).scale_re(0.1 * e.max());
        prop_assert!(!Choi::new(n, shifted).unwrap().is_cp(&tol()));
    }

    #[test]
    fn convolution_of_psd_is_psd(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = rng_from_seed(seed);
        let c1 = Choi::new(n, random_psd(&mut rng, n * n, n * n)).unwrap();
        let c2 = Choi::new(n, random_psd(&mut rng, n * n, 1 + (seed as usize % (n * n)))).unwrap();
        let c = convolve(&c1, &c2).unwrap();
        let e = herm_eig(&c.matrix().hermitian_part(), &tol()).unwrap();
        prop_assert!(e.min() >= -1e-9 * c.matrix().fro_norm());
    }

    #[test]
    fn convolution_matches_composition(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = rng_from_seed(seed);
        let a = random_cp_map(&mut rng, n, 2);
        let b = random_cp_map(&mut rng, n, 3);
        let lhs = convolve(&a.choi(), &b.choi()).unwrap();
        let rhs = compose(&b, &a).unwrap().choi();
        prop_assert!(lhs.matrix().dist(rhs.matrix()) <= 1e-10 * rhs.matrix().fro_norm());
    }

    #[test]
    fn apply_is_linear_and_matches_choi(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = rng_from_seed(seed);
        let ch = random_cp_map(&mut rng, n, 2);
        let (d1, d2) = (ginibre(&mut rng, n, n), ginibre(&mut rng, n, n));
        let a = pfspace_core::C64::new(0.3, -1.2);
        let lhs = ch.apply(&(&d1 + &d2.scale(a))).unwrap();
        let rhs = &ch.apply(&d1).unwrap() + &ch.apply(&d2).unwrap().scale(a);
        prop_assert!(lhs.dist(&rhs) <= 1e-10 * rhs.fro_norm());
        let via_choi = map_of_choi(&ch.choi(), &d1).unwrap();
        prop_assert!(via_choi.dist(&ch.apply(&d1).unwrap()) <= 1e-10 * via_choi.fro_norm());
    }

    #[test]
    fn embedding_is_multiplicative_on_diagonals(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = rng_from_seed(seed);
        use rand::Rng;
        let mut entries = || (0..n * n).map(|_| rng.random_range(0.0..2.0)).collect::<Vec<f64>>();
        let a = ClassicalMatrix::new(n, entries()).unwrap();
        let b = ClassicalMatrix::new(n, entries()).unwrap();
        let ab: Vec<f64> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| (0..n).map(|k| a.get(i, k) * b.get(k, j)).sum()).collect();
        let ab = ClassicalMatrix::new(n, ab).unwrap();
        let composite = compose(&embed_classical(&a).unwrap(), &embed_classical(&b).unwrap()).unwrap();
        let direct = embed_classical(&ab).unwrap();
        let v: Vec<f64> = (0..n).map(|i| 0.5 + i as f64).collect();
        let d = CMatrix::diag(&v);
        prop_assert!(composite.apply(&d).unwrap().dist(&direct.apply(&d).unwrap()) <= 1e-10 * (1.0 + direct.apply(&d).unwrap().fro_norm()));
    }
}

#[test]
fn transpose_map_is_not_cp() {
    for n in 2..=4 {
        assert!(!transpose_map(n).is_cp(&tol()));
    }
}
