use pfspace_core::channels::{direct_sum, tensor, Channel};
use pfspace_core::numerics::vnorm;
use pfspace_core::random::{gaussian_c64, random_channel, random_unitary, rng_from_seed};
use pfspace_core::structure::{
    algebra_a, algebra_b, algebra_c, block_decompose, center, commutant, commutation_defect, max_principal_angle,
    verify_structure, verify_zeta_central,
};
use pfspace_core::{CMatrix, Tolerances, C64};
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn scaled(ch: &Channel, s: f64) -> Channel {
    Channel::new(ch.kraus().iter().map(|f| f.scale_re(s.sqrt())).collect()).unwrap()
}

/// One member of the constructed suite: irreducible channels, hidden two-block
/// sums (equal or unequal radii) and `id ⊗ Ψ`.
fn instance(kind: u8, seed: u64) -> Channel {
    let mut rng = rng_from_seed(seed);
    match kind % 4 {
        0 => random_channel(&mut rng, 3, 2),
        1 | 2 => {
            let a = random_channel(&mut rng, 2, 2);
            let b = random_channel(&mut rng, 3, 2);
            let b = if kind % 4 == 2 { scaled(&b, 0.5) } else { b };
            let u = random_unitary(&mut rng, 5);
            direct_sum(&a, &b).sandwich(&u, &u.adjoint())
        }
        _ => tensor(&Channel::identity(2), &random_channel(&mut rng, 2, 2)),
    }
}

/// Kraus set `F'_i = Σ_j U_ij F_j` for a random unitary `U`, padded with one
/// zero operator so the gauge mixes into a larger space.
fn regauge(ch: &Channel, seed: u64) -> Channel {
    let mut rng = rng_from_seed(seed);
    let n = ch.dim();
    let mut ks = ch.kraus().to_vec();
    ks.push(CMatrix::zeros(n, n));
    let u = random_unitary(&mut rng, ks.len());
    let mixed = (0..ks.len())
        .map(|i| ks.iter().enumerate().fold(CMatrix::zeros(n, n), |acc, (j, f)| &acc + &f.scale(u[(i, j)])))
        .collect();
    Channel::new(mixed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn commutant_elements_commute(seed in any::<u64>(), n in 2usize..=4, m in 1usize..=3) {
        let mut rng = rng_from_seed(seed);
        let gens: Vec<CMatrix> = (0..m).map(|_| CMatrix::from_fn(n, n, |_, _| gaussian_c64(&mut rng))).collect();
        let alg = commutant(&gens, None, &tol()).unwrap();
        prop_assert!(!alg.is_empty());
        prop_assert!(commutation_defect(&alg, &gens) <= 1e-8);
        prop_assert!(alg.contains(&CMatrix::identity(n), &tol()));
    }

    #[test]
    fn bicommutant_contains_generators(kind in 0u8..4, seed in any::<u64>()) {
        let ch = instance(kind, seed);
        let c = algebra_c(&ch, &tol());
        prop_assert!(c.star_closed);
        let cc = commutant(c.basis(), None, &tol()).unwrap();
        for f in ch.kraus() {
            prop_assert!(cc.distance(f) <= 1e-8 * f.fro_norm(), "{}", cc.distance(f));
        }
        // the center of a commutant is the center of the bicommutant
        let z1 = center(&c, &tol());
        let z2 = center(&cc, &tol());
        prop_assert!(max_principal_angle(z1.basis(), z2.basis()) <= 1e-8);
    }

    #[test]
    fn exchange_algebras_are_related(kind in 0u8..4, seed in any::<u64>()) {
        let ch = instance(kind, seed);
        let rep = verify_structure(&ch, 4, seed, &tol()).unwrap();
        prop_assert!(rep.a_vs_b_star <= 1e-8, "{}", rep.a_vs_b_star);
        prop_assert!(rep.c_vs_intersection <= 1e-8, "{}", rep.c_vs_intersection);
        prop_assert!(rep.hypothesis);
        prop_assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn algebras_do_not_depend_on_kraus_gauge(kind in 0u8..4, seed in any::<u64>()) {
        let ch = instance(kind, seed);
        let other = regauge(&ch, seed ^ 0xabcd);
        for (x, y) in [
            (algebra_a(&ch, &tol()), algebra_a(&other, &tol())),
            (algebra_b(&ch, &tol()), algebra_b(&other, &tol())),
            (algebra_c(&ch, &tol()), algebra_c(&other, &tol())),
        ] {
            prop_assert!(max_principal_angle(x.basis(), y.basis()) <= 1e-8);
        }
        // also without the canonical Kraus form in between
        let raw = commutant(ch.kraus(), None, &tol()).unwrap();
        let mixed = commutant(other.kraus(), None, &tol()).unwrap();
        prop_assert!(max_principal_angle(raw.basis(), mixed.basis()) <= 1e-8);
    }

    #[test]
    fn zeta_is_central(kind in 0u8..4, seed in any::<u64>()) {
        let ch = instance(kind, seed);
        let rep = verify_zeta_central(&ch, &tol()).unwrap();
        prop_assert!(rep.max_residual() <= 1e-7, "{rep:?}");
    }

    #[test]
    fn blocks_partition_the_unit(kind in 0u8..4, seed in any::<u64>()) {
        let ch = instance(kind, seed);
        let c = algebra_c(&ch, &tol());
        let blocks = block_decompose(&c, seed, &tol()).unwrap();
        let n = ch.dim();
        let sum = blocks.iter().fold(CMatrix::zeros(n, n), |acc, b| &acc + &b.projection);
        prop_assert!(sum.dist(&CMatrix::identity(n)) <= 1e-8);
        let dim: usize = blocks.iter().map(|b| b.k * b.k).sum();
        prop_assert_eq!(dim, c.len());
        let rank: usize = blocks.iter().map(|b| b.k * b.multiplicity).sum();
        prop_assert_eq!(rank, n);
        for w in blocks.windows(2) {
            prop_assert!(w[0].rank() >= w[1].rank());
        }
    }
}

#[test]
fn tensor_with_identity_has_full_matrix_factor() {
    for seed in 0..6 {
        let ch = instance(3, seed);
        let c = algebra_c(&ch, &tol());
        // {id ⊗ G}′ = M_2 ⊗ 1 for an irreducible Ψ
        assert_eq!(c.len(), 4);
        let blocks = block_decompose(&c, seed, &tol()).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!((blocks[0].k, blocks[0].multiplicity), (2, 2));
    }
}

#[test]
fn hidden_sums_expose_two_central_projections() {
    for seed in 0..6 {
        let c = algebra_c(&instance(1, seed), &tol());
        assert_eq!(c.len(), 2);
        let z = center(&c, &tol());
        assert_eq!(z.len(), 2);
        let v: Vec<C64> = z.basis()[0].vec_col();
        assert!(vnorm(&v) > 0.0);
    }
}
