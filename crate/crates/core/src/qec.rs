//! Mixed-state error correction from Perron-Frobenius data.
//!
//! Given an error channel `Φ_E` with Kraus operators `E_i` and a code
//! projection `p`, the polar parts `u_j` of `E_j p` give a recovery channel
//! with Kraus operators `c^{-1/2} u_j*`, `c = ‖Σ R(E_j p)‖`. The composite
//! `Φ_R Φ_E` cut down to `p` has a maximal-support eigenvector `ζ_p`, and
//! every matrix summand `𝒟` of the interaction algebra with `ζ_p 𝒟 ≠ 0` is
//! corrected up to the factor `r`.

use alloc::vec::Vec;

#[allow(unused_imports)] // float methods come from std when it is linked
use num_traits::Float;

use crate::channels::{compose, Channel};
use crate::numerics::eig::herm_eig_sym;
use crate::numerics::{polar, range_projection, CMatrix, Tolerances, C64};
use crate::random::rng_from_seed;
use crate::structure::{block_decompose, commutant, max_principal_angle, span_dim, Block, OperatorAlgebra};
use crate::{Error, Result};

/// Reject anything that is not a nonzero orthogonal projection.
pub fn check_projection(p: &CMatrix, n: usize, tol: &Tolerances) -> Result<()> {
    if p.rows() != n || p.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: p.rows() });
    }
    let scale = p.fro_norm().max(1.0);
    if p.hermitian_deviation() > tol.residual * scale || (p * p).dist(p) > tol.residual * scale {
        return Err(Error::InvalidMatrix("code projection must be a Hermitian idempotent"));
    }
    if p.trace().re < 0.5 {
        return Err(Error::ZeroCode);
    }
    Ok(())
}

/// Recovery channel and the constant `c = ‖Σ R(E_j p)‖`.
#[derive(Debug, Clone)]
pub struct Recovery {
    pub channel: Channel,
    pub c: f64,
    /// Partial isometries `u_j` of `E_j p = u_j |E_j p|`.
    pub isometries: Vec<CMatrix>,
}

pub fn build_recovery(errors: &Channel, p: &CMatrix, tol: &Tolerances) -> Result<Recovery> {
    let n = errors.dim();
    check_projection(p, n, tol)?;
    let mut isometries = Vec::with_capacity(errors.kraus().len());
    let mut ranges = CMatrix::zeros(n, n);
    for e in errors.kraus() {
        let ep = e * p;
        isometries.push(polar(&ep, tol)?.u);
        ranges = &ranges + &range_projection(&ep, tol);
    }
    let c = ranges.op_norm();
    if c == 0.0 {
        return Err(Error::NumericalDegeneracy("every error annihilates the code"));
    }
    let s = 1.0 / c.sqrt();
    let channel = Channel::new(isometries.iter().map(|u| u.adjoint().scale_re(s)).collect())?;
    Ok(Recovery { channel, c, isometries })
}

fn interaction_generators(errors: &Channel, p: &CMatrix) -> Vec<CMatrix> {
    let ks = errors.kraus();
    let mut out = Vec::with_capacity(ks.len() * ks.len());
    for ei in ks {
        let left = p * &ei.adjoint();
        for ej in ks {
            out.push(&(&left * ej) * p);
        }
    }
    out
}

/// `{p E_i* E_j p}′ ∩ p M_n p`.
pub fn interaction_algebra(errors: &Channel, p: &CMatrix, tol: &Tolerances) -> Result<OperatorAlgebra> {
    check_projection(p, errors.dim(), tol)?;
    commutant(&interaction_generators(errors, p), Some(p), tol)
}

/// `{u_j* E_i p, p E_i* u_j}′ ∩ p M_n p`, built from the polar parts.
pub fn polar_commutant(errors: &Channel, p: &CMatrix, tol: &Tolerances) -> Result<OperatorAlgebra> {
    let rec = build_recovery(errors, p, tol)?;
    let mut gens = Vec::new();
    for u in &rec.isometries {
        for e in errors.kraus() {
            let g = &(&u.adjoint() * e) * p;
            gens.push(g.adjoint());
            gens.push(g);
        }
    }
    commutant(&gens, Some(p), tol)
}

/// Sine of the largest principal angle between the interaction algebra and
/// its polar-part description.
pub fn commutant_gap(errors: &Channel, p: &CMatrix, tol: &Tolerances) -> Result<f64> {
    let a = interaction_algebra(errors, p, tol)?;
    let b = polar_commutant(errors, p, tol)?;
    Ok(max_principal_angle(a.basis(), b.basis()))
}

/// The summand `𝒟 ≅ M_k` of `alg` chosen as the logical algebra.
#[derive(Debug, Clone)]
pub struct CorrectableBlock {
    pub algebra: OperatorAlgebra,
    pub block: Block,
}

impl CorrectableBlock {
    pub fn k(&self) -> usize {
        self.block.k
    }

    /// `log₂ k`.
    pub fn logical_qubits(&self) -> f64 {
        (self.block.k as f64).log2()
    }
}

/// Among summands not annihilated by `ζ_p`, the one with the largest `k`;
/// ties go to the larger central projection, then to the one whose range
/// starts at the lower basis index.
pub fn select_correctable_block(alg: &OperatorAlgebra, zeta_p: &CMatrix, seed: u64, tol: &Tolerances) -> Result<CorrectableBlock> {
    let blocks = block_decompose(alg, seed, tol)?;
    let zn = zeta_p.fro_norm();
    let mut best: Option<&Block> = None;
    for b in &blocks {
        if (zeta_p * &b.projection).fro_norm() <= 1e-9 * zn {
            continue;
        }
        if best.is_none_or(|cur| b.k > cur.k) {
            best = Some(b);
        }
    }
    let block = best.ok_or(Error::NoUsableBlock)?.clone();
    let parts: Vec<CMatrix> = alg.basis().iter().map(|x| &block.projection * x).collect();
    let algebra = OperatorAlgebra::from_span(&block.projection, &parts, tol);
    Ok(CorrectableBlock { algebra, block })
}

/// Residuals of `Φ_R Φ_E (ζ_p D) = r ζ_p D` over a basis of `𝒟`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionCheck {
    /// `max ‖Φ_R Φ_E(ζ_p D) − r ζ_p D‖ / (r ‖ζ_p D‖)`.
    pub eigen: f64,
    /// `max ‖[ζ_p, D]‖ / (‖ζ_p‖ ‖D‖)`.
    pub commutation: f64,
    /// `D ↦ ζ_p D` is injective on `𝒟`.
    pub injective: bool,
}

impl CorrectionCheck {
    pub fn residual(&self) -> f64 {
        self.eigen.max(self.commutation)
    }
}

pub fn verify_correction(
    errors: &Channel,
    recovery: &Channel,
    d_basis: &[CMatrix],
    zeta_p: &CMatrix,
    r: f64,
) -> Result<CorrectionCheck> {
    let composite = compose(recovery, errors)?;
    let zn = zeta_p.fro_norm();
    let (mut eigen, mut comm) = (0.0f64, 0.0f64);
    let mut images = Vec::with_capacity(d_basis.len());
    for d in d_basis {
        let y = zeta_p * d;
        let out = composite.apply(&y)?;
        let yn = y.fro_norm();
        if yn > 0.0 {
            eigen = eigen.max(out.dist(&y.scale_re(r)) / (r * yn));
        }
        comm = comm.max(zeta_p.commutator(d).fro_norm() / (zn * d.fro_norm()).max(f64::MIN_POSITIVE));
        images.push(y);
    }
    Ok(CorrectionCheck { eigen, commutation: comm, injective: span_dim(&images) == d_basis.len() })
}

/// Knill-Laflamme test `p E_i* E_j p = λ_ij p`.
#[derive(Debug, Clone)]
pub struct KlCheck {
    pub holds: bool,
    /// Fitted `λ_ij = Tr(p E_i* E_j p) / Tr p`.
    pub lambda: CMatrix,
    /// `max ‖p E_i* E_j p − λ_ij p‖ / (‖E_i‖ ‖E_j‖)`.
    pub residual: f64,
}

pub fn check_kl(errors: &Channel, p: &CMatrix, tol: &Tolerances) -> Result<KlCheck> {
    check_projection(p, errors.dim(), tol)?;
    let ks = errors.kraus();
    let m = ks.len();
    let tr = p.trace().re;
    let norms: Vec<f64> = ks.iter().map(CMatrix::op_norm).collect();
    let mut lambda = CMatrix::zeros(m, m);
    let mut residual = 0.0f64;
    for (i, ei) in ks.iter().enumerate() {
        let left = p * &ei.adjoint();
        for (j, ej) in ks.iter().enumerate() {
            let block = &(&left * ej) * p;
            let l = block.trace() / tr;
            lambda[(i, j)] = l;
            let scale = norms[i] * norms[j];
            if scale > 0.0 {
                residual = residual.max(block.dist(&p.scale(l)) / scale);
            }
        }
    }
    Ok(KlCheck { holds: residual <= tol.residual, lambda, residual })
}

/// Composite `Φ_R Φ_E`, its eigenvalue `r` on the code corner and `ζ_p`.
fn composite_zeta(errors: &Channel, recovery: &Channel, p: &CMatrix, tol: &Tolerances) -> Result<(f64, CMatrix)> {
    let composite = compose(recovery, errors)?;
    let ms = crate::pf::max_support(&composite.cut_down(p), tol)?;
    let r = ms.spectrum.r;
    let zeta_p = crate::pf::zeta(&composite, p, tol)?;
    let tr = zeta_p.trace().re;
    if tr <= 0.0 {
        return Err(Error::ZeroZeta);
    }
    Ok((r, zeta_p.scale_re(1.0 / tr)))
}

/// A minimal projection of `𝒟′ ∩ p M_n p` below the unit of `𝒟`. It
/// satisfies the Knill-Laflamme conditions; this is asserted.
pub fn kl_from_pf(errors: &Channel, p: &CMatrix, seed: u64, tol: &Tolerances) -> Result<CMatrix> {
    let rec = build_recovery(errors, p, tol)?;
    let (_, zeta_p) = composite_zeta(errors, &rec.channel, p, tol)?;
    let alg = interaction_algebra(errors, p, tol)?;
    let d = select_correctable_block(&alg, &zeta_p, seed, tol)?;
    let q = minimal_projection_below(&d, p, seed, tol)?;
    if !check_kl(errors, &q, tol)?.holds {
        return Err(Error::NumericalDegeneracy("minimal projection of the relative commutant fails Knill-Laflamme"));
    }
    Ok(q)
}

fn minimal_projection_below(d: &CorrectableBlock, p: &CMatrix, seed: u64, tol: &Tolerances) -> Result<CMatrix> {
    let rel = commutant(d.algebra.basis(), Some(p), tol)?;
    let blocks = block_decompose(&rel, seed, tol)?;
    let unit = &d.block.projection;
    let target = blocks
        .iter()
        .filter(|b| (&b.projection * unit).fro_norm() > 0.5)
        .max_by(|a, b| (&a.projection * unit).fro_norm().total_cmp(&(&b.projection * unit).fro_norm()))
        .ok_or(Error::NoUsableBlock)?;
    // eigenprojections of a generic Hermitian element, compressed to the
    // block, are minimal in the block
    let mut rng = rng_from_seed(seed ^ 0x9e37_79b9);
    let q = crate::numerics::range_basis(&target.projection, tol);
    for _ in 0..5 {
        let h = rel.random_hermitian(&mut rng);
        let local = &(&q.adjoint() * &h) * &q;
        let groups = crate::structure::eigen_groups(&local);
        if groups.len() != target.k || groups.iter().any(|g| g.len() != target.multiplicity) {
            continue;
        }
        let vs: Vec<Vec<C64>> = groups[0].iter().map(|v| q.mul_vec(v)).collect();
        return Ok(crate::numerics::decomp::projector_onto(p.rows(), &vs));
    }
    Err(Error::NumericalDegeneracy("minimal projection: eigenvalue collisions in every draw"))
}

/// Everything computed for one `(errors, p)` pair.
#[derive(Debug, Clone)]
pub struct QecReport {
    pub p: CMatrix,
    pub recovery: Channel,
    pub c: f64,
    pub r: f64,
    /// `λ_min(Σ E_i* E_i)`, so that `Tr Φ_E(D) ≥ s Tr D` for `D ⪰ 0`.
    pub s: f64,
    pub zeta_p: CMatrix,
    pub interaction_algebra: OperatorAlgebra,
    pub correctable_block: CorrectableBlock,
    pub kl: KlCheck,
    pub correction: CorrectionCheck,
    /// Gap between the two commutant descriptions of the interaction algebra.
    pub commutant_gap: f64,
    /// Minimal projection extracted from the relative commutant of `𝒟`.
    pub kl_projection: CMatrix,
    pub recovery_defect: f64,
}

impl QecReport {
    pub fn kl_holds(&self) -> bool {
        self.kl.holds
    }

    pub fn residual(&self) -> f64 {
        self.correction.residual()
    }

    /// `r ≥ s / c` up to `slack`.
    pub fn bound_holds(&self, slack: f64) -> bool {
        self.r >= self.s / self.c - slack
    }
}

pub fn analyze_code(errors: &Channel, p: &CMatrix, seed: u64, tol: &Tolerances) -> Result<QecReport> {
    let rec = build_recovery(errors, p, tol)?;
    let (r, zeta_p) = composite_zeta(errors, &rec.channel, p, tol)?;
    let alg = interaction_algebra(errors, p, tol)?;
    let block = select_correctable_block(&alg, &zeta_p, seed, tol)?;
    let correction = verify_correction(errors, &rec.channel, block.algebra.basis(), &zeta_p, r)?;
    let kl = check_kl(errors, p, tol)?;
    let gap = max_principal_angle(alg.basis(), polar_commutant(errors, p, tol)?.basis());
    let kl_projection = kl_from_pf(errors, p, seed, tol)?;
    let s = herm_eig_sym(&errors.kraus_sum())?.min();
    let recovery_defect = herm_eig_sym(&rec.channel.kraus_sum())?.max() - 1.0;
    Ok(QecReport {
        p: p.clone(),
        recovery: rec.channel,
        c: rec.c,
        r,
        s,
        zeta_p,
        interaction_algebra: alg,
        correctable_block: block,
        kl,
        correction,
        commutant_gap: gap,
        kl_projection,
        recovery_defect,
    })
}

/// Computational-basis projection `Σ |b⟩⟨b|` for the listed basis states.
pub fn basis_projection(n: usize, states: &[usize]) -> CMatrix {
    let mut p = CMatrix::zeros(n, n);
    for &s in states {
        p[(s, s)] = C64::new(1.0, 0.0);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn t() -> Tolerances {
        Tolerances::default()
    }

    fn x() -> CMatrix {
        CMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
    }

    fn z() -> CMatrix {
        CMatrix::diag(&[1.0, -1.0])
    }

    fn on_qubit(op: &CMatrix, k: usize) -> CMatrix {
        let i2 = CMatrix::identity(2);
        let mut m = CMatrix::identity(1);
        for q in 0..3 {
            m = m.kron(if q == k { op } else { &i2 });
        }
        m
    }

    fn bit_flip() -> (Channel, CMatrix) {
        let mut ks = vec![CMatrix::identity(8).scale_re(0.5)];
        ks.extend((0..3).map(|k| on_qubit(&x(), k).scale_re(0.5)));
        (Channel::new(ks).unwrap(), basis_projection(8, &[0, 7]))
    }

    #[test]
    fn recovery_examples() {
        let p = CMatrix::diag(&[1.0, 0.0, 1.0]);
        let rec = build_recovery(&Channel::identity(3), &p, &t()).unwrap();
        assert!((rec.c - 1.0).abs() < 1e-14);
        assert!(rec.isometries[0].dist(&p) < 1e-14);

        let (errors, p) = bit_flip();
        let rec = build_recovery(&errors, &p, &t()).unwrap();
        assert!((rec.c - 1.0).abs() < 1e-12);
        assert!(rec.channel.is_trace_nonincreasing(&t()));

        let e11 = Channel::new(vec![CMatrix::unit(2, 0, 0)]).unwrap();
        let rec = build_recovery(&e11, &CMatrix::identity(2), &t()).unwrap();
        assert!((rec.c - 1.0).abs() < 1e-14);
        assert!(rec.isometries[0].dist(&CMatrix::unit(2, 0, 0)) < 1e-14);

        assert_eq!(build_recovery(&e11, &CMatrix::zeros(2, 2), &t()).unwrap_err(), Error::ZeroCode);
    }

    #[test]
    fn kl_examples() {
        let (errors, p) = bit_flip();
        let kl = check_kl(&errors, &p, &t()).unwrap();
        assert!(kl.holds);
        assert!(kl.lambda.dist(&CMatrix::identity(4).scale_re(0.25)) < 1e-12);

        let zf = Channel::new(vec![CMatrix::identity(8), on_qubit(&z(), 0)]).unwrap();
        assert!(!check_kl(&zf, &p, &t()).unwrap().holds);
        assert!(check_kl(&zf, &basis_projection(8, &[3]), &t()).unwrap().holds);
    }

    #[test]
    fn interaction_examples() {
        let (errors, p) = bit_flip();
        assert_eq!(interaction_algebra(&errors, &p, &t()).unwrap().len(), 4);
        let zf = Channel::new(vec![CMatrix::identity(8), on_qubit(&z(), 0)]).unwrap();
        assert_eq!(interaction_algebra(&zf, &p, &t()).unwrap().len(), 2);
        let q = CMatrix::diag(&[1.0, 1.0, 0.0]);
        assert_eq!(interaction_algebra(&Channel::identity(3), &q, &t()).unwrap().len(), 4);
        assert!(commutant_gap(&zf, &p, &t()).unwrap() < 1e-8);
    }

    #[test]
    fn bit_flip_end_to_end() {
        let (errors, p) = bit_flip();
        let rep = analyze_code(&errors, &p, 1, &t()).unwrap();
        assert!((rep.r - 1.0).abs() < 1e-10);
        assert_eq!(rep.correctable_block.k(), 2);
        assert!((rep.correctable_block.logical_qubits() - 1.0).abs() < 1e-15);
        assert!(rep.residual() < 1e-9);
        assert!(rep.kl_projection.dist(&p) < 1e-9);
        // exact correction on the whole corner
        let composite = compose(&rep.recovery, &errors).unwrap();
        for d in rep.correctable_block.algebra.basis() {
            assert!(composite.apply(d).unwrap().dist(d) < 1e-10);
        }
    }

    #[test]
    fn phase_error_keeps_classical_block() {
        let (_, p) = bit_flip();
        let s = 0.5f64.sqrt();
        let zf = Channel::new(vec![CMatrix::identity(8).scale_re(s), on_qubit(&z(), 0).scale_re(s)]).unwrap();
        let rep = analyze_code(&zf, &p, 1, &t()).unwrap();
        assert!(!rep.kl_holds());
        assert_eq!(rep.correctable_block.k(), 1);
        assert!(rep.residual() < 1e-8);
        assert!(rep.bound_holds(1e-8));
        assert!(check_kl(&zf, &rep.kl_projection, &t()).unwrap().holds);
    }

    #[test]
    fn two_block_instance_selects_matrix_block() {
        let (a, b) = (0.8f64.sqrt(), 0.2f64.sqrt());
        let errors = Channel::new(vec![CMatrix::identity(3).scale_re(a), CMatrix::diag(&[b, b, -b])]).unwrap();
        let p = CMatrix::identity(3);
        let rep = analyze_code(&errors, &p, 1, &t()).unwrap();
        assert!((rep.c - 2.0).abs() < 1e-12);
        assert_eq!(rep.correctable_block.k(), 2);
        assert!(rep.correctable_block.block.projection.dist(&CMatrix::diag(&[1.0, 1.0, 0.0])) < 1e-9);
        assert!(rep.residual() < 1e-8);
        assert!(rep.kl_projection.dist(&CMatrix::diag(&[1.0, 1.0, 0.0])) < 1e-9);
    }

    #[test]
    fn rank_one_code() {
        let (errors, _) = bit_flip();
        let q = basis_projection(8, &[5]);
        let rep = analyze_code(&errors, &q, 1, &t()).unwrap();
        assert!(rep.kl_holds());
        assert_eq!(rep.correctable_block.k(), 1);
        assert_eq!(rep.correctable_block.logical_qubits(), 0.0);
    }
}
