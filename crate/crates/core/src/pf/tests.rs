use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::channels::{direct_sum, embed_classical, ClassicalMatrix};
use crate::numerics::C64;
use crate::random::{ginibre, random_channel, rng_from_seed};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn x() -> CMatrix {
    CMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

fn z() -> CMatrix {
    CMatrix::diag(&[1.0, -1.0])
}

fn pauli_channel() -> Channel {
    let s = 0.5f64.sqrt();
    Channel::new(vec![x().scale_re(s), z().scale_re(s)]).unwrap()
}

fn scaled(ch: &Channel, s: f64) -> Channel {
    Channel::new(ch.kraus().iter().map(|f| f.scale_re(s.sqrt())).collect()).unwrap()
}

fn classical(rows: &[&[f64]]) -> ClassicalMatrix {
    ClassicalMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

#[test]
fn superop_examples() {
    assert_eq!(superop(&Channel::identity(3)).matrix, CMatrix::identity(9));
    let s = superop(&Channel::new(vec![x()]).unwrap());
    // X E_ij X = E_{1-i,1-j}: vec index j*2+i maps to (1-j)*2+(1-i)
    for i in 0..2 {
        for j in 0..2 {
            let col = j * 2 + i;
            let row = (1 - j) * 2 + (1 - i);
            assert_eq!(s.matrix[(row, col)], C64::new(1.0, 0.0));
        }
    }
    let mut rng = rng_from_seed(2);
    let ch = random_channel(&mut rng, 3, 2);
    let s = superop(&ch);
    for _ in 0..20 {
        let d = ginibre(&mut rng, 3, 3);
        assert!(s.apply(&d).dist(&ch.apply(&d).unwrap()) < 1e-12 * d.fro_norm());
    }
}

#[test]
fn spectral_radius_examples() {
    let mut rng = rng_from_seed(4);
    for n in 2..=4 {
        let r = spectral_radius(&random_channel(&mut rng, n, 3), &tol()).unwrap();
        assert!((r - 1.0).abs() < 1e-10);
    }
    let perm = embed_classical(&classical(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap();
    assert!((spectral_radius(&perm, &tol()).unwrap() - 1.0).abs() < 1e-12);
    let a = embed_classical(&classical(&[&[1.0, 2.0], &[3.0, 4.0]])).unwrap();
    let expected = (5.0 + 33f64.sqrt()) / 2.0;
    assert!((spectral_radius(&a, &tol()).unwrap() - expected).abs() < 1e-12);
}

#[test]
fn pf_right_examples() {
    let paulis = [CMatrix::identity(2), x(), z(), CMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 1) => C64::new(0.0, -1.0),
        (1, 0) => C64::new(0.0, 1.0),
        _ => C64::new(0.0, 0.0),
    })];
    let depol = Channel::new(paulis.iter().map(|p| p.scale_re(0.5)).collect()).unwrap();
    assert!(pf_right(&depol, &tol()).unwrap().dist(&CMatrix::identity(2).scale_re(0.5)) < 1e-12);

    let a = embed_classical(&classical(&[&[1.0, 2.0], &[3.0, 4.0]])).unwrap();
    let y = pf_right(&a, &tol()).unwrap();
    let v = [4.0, 3.0 + 33f64.sqrt()];
    let s = v[0] + v[1];
    assert!(y.dist(&CMatrix::diag(&[v[0] / s, v[1] / s])) < 1e-12);

    let id = pf_right(&Channel::identity(3), &tol()).unwrap();
    assert!((id.trace().re - 1.0).abs() < 1e-12);
    assert!(eigen_residual(&Channel::identity(3), &id, 1.0) < 1e-15);
}

#[test]
fn eigenspace_examples() {
    assert_eq!(eigenspace(&Channel::identity(2), &tol()).unwrap().len(), 4);
    assert_eq!(eigenspace(&pauli_channel(), &tol()).unwrap().len(), 1);
    let block = direct_sum(&pauli_channel(), &pauli_channel());
    assert_eq!(eigenspace(&block, &tol()).unwrap().len(), 2);
}

#[test]
fn p_max_and_zeta_examples() {
    assert!(p_max(&Channel::identity(2), &tol()).unwrap().dist(&CMatrix::identity(2)) < 1e-12);
    let collapse = Channel::new(vec![CMatrix::unit(2, 0, 0)]).unwrap();
    let pm = p_max(&collapse, &tol()).unwrap();
    assert!(pm.dist(&CMatrix::diag(&[1.0, 0.0])) < 1e-12);
    let mut rng = rng_from_seed(8);
    let full = random_channel(&mut rng, 3, 3);
    assert!(p_max(&full, &tol()).unwrap().dist(&CMatrix::identity(3)) < 1e-10);

    assert!(zeta(&Channel::identity(2), &CMatrix::identity(2), &tol()).unwrap().dist(&CMatrix::identity(2)) < 1e-12);
    let zc = zeta(&collapse, &pm, &tol()).unwrap();
    assert!(zc.dist(&CMatrix::diag(&[1.0, 0.0])) < 1e-12);

    let fast_slow = direct_sum(&pauli_channel(), &scaled(&pauli_channel(), 0.5));
    let zf = zeta(&fast_slow, &CMatrix::identity(4), &tol()).unwrap();
    assert!(zf.dist(&CMatrix::diag(&[1.0, 1.0, 0.0, 0.0])) < 1e-10);
}

#[test]
fn zeta_agrees_with_cesaro() {
    let mut rng = rng_from_seed(21);
    let ch = direct_sum(&random_channel(&mut rng, 2, 2), &scaled(&random_channel(&mut rng, 2, 2), 0.7));
    let pm = p_max(&ch, &tol()).unwrap();
    let a = zeta(&ch, &pm, &tol()).unwrap();
    let b = zeta_cesaro(&ch, &pm, &tol()).unwrap();
    assert!(a.dist(&b) < 1e-6 * a.fro_norm());
}

#[test]
fn jordan_block_at_r_keeps_only_true_support() {
    // A = [[1,1],[0,1]] has a 2x2 Jordan block at 1; the only eigenvector is e1.
    let a = embed_classical(&classical(&[&[1.0, 1.0], &[0.0, 1.0]])).unwrap();
    let ms = max_support(&a, &tol()).unwrap();
    assert_eq!(ms.spectrum.pole_order, 2);
    assert!(ms.support.dist(&CMatrix::diag(&[1.0, 0.0])) < 1e-8);
    assert!(eigen_residual(&a, &ms.vector, ms.spectrum.r) < 1e-7);
}

#[test]
fn zero_radius_is_reported() {
    let nil = Channel::new(vec![CMatrix::unit(2, 0, 1)]).unwrap();
    assert_eq!(spectral_radius(&nil, &tol()).unwrap(), 0.0);
    assert_eq!(pf_right(&nil, &tol()), Err(Error::ZeroSpectralRadius));
}

#[test]
fn irreducibility_examples() {
    assert!(is_irreducible(&pauli_channel()));
    let diag = Channel::new(vec![CMatrix::unit(2, 0, 0), CMatrix::unit(2, 1, 1)]).unwrap();
    assert!(!is_irreducible(&diag));
    let cycle = classical(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]]);
    assert!(is_irreducible(&embed_classical(&cycle).unwrap()));

    let c = irreducibility_certificates(&pauli_channel(), 16, 1, &tol());
    assert!(c.burnside && c.b_join && c.cond7 && c.cond8);
    let c = irreducibility_certificates(&diag, 16, 1, &tol());
    assert!(!c.burnside && !c.b_join && !c.cond7 && !c.cond8);
}

#[test]
fn hidden_invariant_subspace_is_found() {
    let mut rng = rng_from_seed(33);
    let block = direct_sum(&random_channel(&mut rng, 2, 2), &random_channel(&mut rng, 1, 1));
    let u = crate::random::random_unitary(&mut rng, 3);
    let rotated = block.sandwich(&u, &u.adjoint());
    let c = irreducibility_certificates(&rotated, 8, 5, &tol());
    assert!(!c.burnside);
    assert!(c.concordant(), "{c:?}");
}

#[test]
fn cw_examples() {
    let a = classical(&[&[1.0, 2.0], &[3.0, 4.0]]);
    assert_eq!(cw_bounds(&a, &[1.0, 1.0]).unwrap(), (3.0, 7.0));
    let id = classical(&[&[1.0, 0.0], &[0.0, 1.0]]);
    assert_eq!(cw_bounds(&id, &[0.3, 2.0]).unwrap(), (1.0, 1.0));
    let r = (5.0 + 33f64.sqrt()) / 2.0;
    let (lo, hi) = cw_bounds(&a, &[4.0, 3.0 + 33f64.sqrt()]).unwrap();
    assert!((lo - r).abs() < 1e-12 && (hi - r).abs() < 1e-12);
    assert_eq!(cw_bounds(&a, &[1.0, 0.0]), Err(Error::NonPositiveTestVector { index: 1 }));
}

#[test]
fn cw_certify_examples() {
    let mut rng = rng_from_seed(3);
    let ch = random_channel(&mut rng, 3, 3);
    let left = pf_left(&ch, &tol()).unwrap();
    let cert = cw_certify(&ch, &left, &tol()).unwrap();
    assert!(cert.clauses.contains(&3) && cert.conclusions_hold);
    assert!((cert.r_tilde.unwrap() - cert.r).abs() < 1e-9);
    let cert = cw_certify(&ch, &left.scale_re(7.0), &tol()).unwrap();
    assert!(cert.clauses.contains(&1) && cert.conclusions_hold);

    // p_max = E_11 and z = (1, 3): A^T z = (1, 2.5) <= z, support not inside p_max
    let tri = embed_classical(&classical(&[&[1.0, 1.0], &[0.0, 0.5]])).unwrap();
    let cert = cw_certify(&tri, &CMatrix::diag(&[1.0, 3.0]), &tol()).unwrap();
    assert!(cert.clauses.is_empty());
    assert_eq!(cert.describe(), "no clause applies");
}

#[test]
fn extreme_support_examples() {
    assert_eq!(extreme_support_check(&pauli_channel(), &CMatrix::identity(2), &tol()).unwrap(), 1);
    let block = direct_sum(&pauli_channel(), &pauli_channel());
    let first = CMatrix::diag(&[1.0, 1.0, 0.0, 0.0]);
    assert_eq!(extreme_support_check(&block, &first, &tol()).unwrap(), 1);
    assert_eq!(extreme_support_check(&block, &CMatrix::identity(4), &tol()).unwrap(), 2);
    let bad = CMatrix::diag(&[1.0, 0.0, 0.0, 0.0]);
    assert_eq!(extreme_support_check(&block, &bad, &tol()), Err(Error::NotInQ));
}

#[test]
fn analysis_invariants() {
    let mut rng = rng_from_seed(12);
    let ch = direct_sum(&random_channel(&mut rng, 2, 2), &scaled(&random_channel(&mut rng, 3, 2), 0.6));
    let a = analyze(&ch, &tol()).unwrap();
    assert!((a.r - 1.0).abs() < 1e-10);
    assert_eq!(a.p_max_rank, 2);
    assert_eq!(a.zeta_rank, 2);
    assert!(a.residuals.right < 1e-9 && a.residuals.left < 1e-9 && a.residuals.zeta < 1e-9);
    assert!(a.residuals.cesaro_gap.unwrap() < 1e-6);
}

