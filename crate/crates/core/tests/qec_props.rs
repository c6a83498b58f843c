use pfspace_core::channels::Channel;
use pfspace_core::numerics::herm_eig;
use pfspace_core::qec::{analyze_code, build_recovery, check_kl, commutant_gap, kl_from_pf, verify_correction};
use pfspace_core::random::{random_channel, random_cp_map, random_projection, random_unitary, rng_from_seed};
use pfspace_core::{CMatrix, Tolerances};
use proptest::prelude::*;
use rand::Rng;

fn tol() -> Tolerances {
    Tolerances::default()
}

/// Random errors and code: `n ∈ {2,3,4}`, `1 ≤ rank p < n`, one to three
/// Kraus operators, trace preserving or not.
fn random_pair(seed: u64) -> (Channel, CMatrix) {
    let mut rng = rng_from_seed(seed);
    let n = rng.random_range(2..=4);
    let m = rng.random_range(1..=3);
    let errors = if rng.random_bool(0.5) { random_channel(&mut rng, n, m) } else { random_cp_map(&mut rng, n, m) };
    let k = rng.random_range(1..n);
    (errors, random_projection(&mut rng, n, k))
}

/// A two-dimensional code in `ℂ⁴` with errors `a I` and `b W`, where `W`
/// swaps the code with its complement; everything conjugated by a random
/// unitary.
fn hidden_swap_code(seed: u64) -> (Channel, CMatrix) {
    let mut rng = rng_from_seed(seed);
    let a: f64 = rng.random_range(0.2..0.9);
    let b = (1.0 - a * a).sqrt();
    let w = CMatrix::from_real(4, 4, &[
        0.0, 0.0, 1.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        1.0, 0.0, 0.0, 0.0, //
        0.0, 1.0, 0.0, 0.0,
    ]);
    let u = random_unitary(&mut rng, 4);
    let conj = |m: &CMatrix| &(&u * m) * &u.adjoint();
    let errors = Channel::new(vec![conj(&CMatrix::identity(4).scale_re(a)), conj(&w.scale_re(b))]).unwrap();
    (errors, conj(&CMatrix::diag(&[1.0, 1.0, 0.0, 0.0])))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn polar_parts_give_the_interaction_algebra(seed in any::<u64>()) {
        let (errors, p) = random_pair(seed);
        let gap = commutant_gap(&errors, &p, &tol()).unwrap();
        prop_assert!(gap <= 1e-8, "{gap}");
    }

    #[test]
    fn recovery_is_trace_nonincreasing(seed in any::<u64>()) {
        let (errors, p) = random_pair(seed);
        let rec = build_recovery(&errors, &p, &tol()).unwrap();
        prop_assert!(rec.c >= 1.0 - 1e-12);
        let top = herm_eig(&rec.channel.kraus_sum(), &tol()).unwrap().max();
        prop_assert!(top <= 1.0 + tol().psd_floor, "{top}");
    }

    #[test]
    fn corrected_block_and_bound(seed in any::<u64>()) {
        let (errors, p) = random_pair(seed);
        let rep = analyze_code(&errors, &p, seed, &tol()).unwrap();
        prop_assert!(rep.residual() <= 1e-7, "{:?}", rep.correction);
        prop_assert!(rep.correction.injective);
        prop_assert!(rep.bound_holds(1e-8), "r={} s={} c={}", rep.r, rep.s, rep.c);
        prop_assert!(rep.commutant_gap <= 1e-8);
        prop_assert!(rep.recovery_defect <= tol().psd_floor);
        let q = kl_from_pf(&errors, &p, seed, &tol()).unwrap();
        prop_assert!(check_kl(&errors, &q, &tol()).unwrap().holds);
        // q sits inside the code
        prop_assert!((&q * &p).dist(&q) <= 1e-8);
    }

    #[test]
    fn channel_errors_satisfy_inverse_c_bound(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let n = rng.random_range(2..=4);
        let (m, k) = (rng.random_range(1..=3), rng.random_range(1..n));
        let errors = random_channel(&mut rng, n, m);
        let p = random_projection(&mut rng, n, k);
        let rep = analyze_code(&errors, &p, seed, &tol()).unwrap();
        prop_assert!(rep.r >= 1.0 / rep.c - 1e-8, "r={} c={}", rep.r, rep.c);
    }

    #[test]
    fn hidden_swap_code_is_exactly_correctable(seed in any::<u64>()) {
        let (errors, p) = hidden_swap_code(seed);
        let kl = check_kl(&errors, &p, &tol()).unwrap();
        prop_assert!(kl.holds, "{}", kl.residual);
        let rep = analyze_code(&errors, &p, seed, &tol()).unwrap();
        prop_assert!((rep.c - 1.0).abs() <= 1e-10);
        prop_assert!((rep.r - 1.0).abs() <= 1e-10);
        prop_assert_eq!(rep.correctable_block.k(), 2);
        prop_assert!(rep.kl_projection.dist(&p) <= 1e-8);
        let check = verify_correction(&errors, &rep.recovery, &[p.clone()], &rep.zeta_p, rep.r).unwrap();
        prop_assert!(check.residual() <= 1e-9);
    }
}
