use alloc::vec::Vec;

#[allow(unused_imports)] // float methods come from std when it is linked
use num_traits::Float;

use super::algebra::{block_decompose, commutant, max_principal_angle, span_dim, OperatorAlgebra};
use crate::channels::{kraus_of_choi, Channel};
use crate::numerics::eig::herm_eig_sym;
use crate::numerics::{CMatrix, Tolerances, C64};
use crate::pf::{eigen_residual, eigenspace_of, max_support, psd_support, zeta};
use crate::random::rng_from_seed;
use crate::{Error, Result};

fn canonical_kraus(ch: &Channel, tol: &Tolerances) -> Vec<CMatrix> {
    match kraus_of_choi(&ch.choi(), tol) {
        Ok(c) => c.kraus().to_vec(),
        Err(_) => ch.kraus().to_vec(),
    }
}

/// `{F_j*}′`.
pub fn algebra_a(ch: &Channel, tol: &Tolerances) -> OperatorAlgebra {
    let gens: Vec<CMatrix> = canonical_kraus(ch, tol).iter().map(CMatrix::adjoint).collect();
    commutant(&gens, Some(&CMatrix::identity(ch.dim())), tol).expect("square generators")
}

/// `{F_j}′`.
pub fn algebra_b(ch: &Channel, tol: &Tolerances) -> OperatorAlgebra {
    commutant(&canonical_kraus(ch, tol), Some(&CMatrix::identity(ch.dim())), tol).expect("square generators")
}

/// `{F_j, F_j*}′`, a *-algebra.
pub fn algebra_c(ch: &Channel, tol: &Tolerances) -> OperatorAlgebra {
    commutant(&with_adjoints(&canonical_kraus(ch, tol)), Some(&CMatrix::identity(ch.dim())), tol).expect("square generators")
}

fn with_adjoints(ks: &[CMatrix]) -> Vec<CMatrix> {
    ks.iter().flat_map(|f| [f.clone(), f.adjoint()]).collect()
}

/// `r`, `p_max` and `ζ` with its square roots on the support.
#[derive(Debug, Clone)]
pub struct ZetaData {
    pub r: f64,
    pub p_max: CMatrix,
    pub zeta: CMatrix,
    pub sqrt: CMatrix,
    /// Inverse square root on the support of `ζ`, zero elsewhere.
    pub inv_sqrt: CMatrix,
}

pub fn zeta_data(ch: &Channel, tol: &Tolerances) -> Result<ZetaData> {
    let ms = max_support(ch, tol)?;
    let r = ms.spectrum.r;
    let p_max = ms.support;
    let z = zeta(ch, &p_max, tol)?;
    if z.fro_norm() == 0.0 {
        return Err(Error::ZeroZeta);
    }
    let z = z.scale_re(1.0 / z.trace().re);
    let support = psd_support(&z, tol)?;
    let e = herm_eig_sym(&z)?;
    let keep: Vec<usize> = (0..e.values.len())
        .filter(|&j| vnorm_sq(&support.mul_vec(&e.vectors.column(j))) > 0.5)
        .collect();
    let build = |f: &dyn Fn(f64) -> f64| {
        let mut m = CMatrix::zeros(z.rows(), z.rows());
        for &j in &keep {
            let v = e.vectors.column(j);
            let s = f(e.values[j].max(0.0));
            for a in 0..v.len() {
                for b in 0..v.len() {
                    m[(a, b)] += v[a] * v[b].conj() * s;
                }
            }
        }
        m
    };
    let sqrt = build(&|x| x.sqrt());
    let inv_sqrt = build(&|x| 1.0 / x.sqrt());
    Ok(ZetaData { r, p_max, zeta: z, sqrt, inv_sqrt })
}

fn vnorm_sq(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// The channel with Kraus operators `ζ^{-1/2} F_j ζ^{1/2}`, inverse taken on
/// the support of `ζ`.
pub fn x_zeta_channel(ch: &Channel, tol: &Tolerances) -> Result<Channel> {
    let zd = zeta_data(ch, tol)?;
    let xz = conjugate_by_zeta(ch, &zd);
    let r2 = crate::pf::spectral_radius(&xz, &Tolerances { residual: f64::INFINITY, ..*tol })?;
    if (r2 - zd.r).abs() > 1e-6 * zd.r {
        return Err(Error::NumericalDegeneracy("x_zeta changed the spectral radius"));
    }
    let fixed = xz.apply_unchecked(&zd.p_max);
    if fixed.dist(&zd.p_max.scale_re(zd.r)) > 1e-6 * zd.r * zd.p_max.fro_norm() {
        return Err(Error::NumericalDegeneracy("x_zeta does not fix p_max"));
    }
    Ok(xz)
}

fn conjugate_by_zeta(ch: &Channel, zd: &ZetaData) -> Channel {
    Channel::new(ch.kraus().iter().map(|f| &(&zd.inv_sqrt * f) * &zd.sqrt).collect()).expect("shape preserved")
}

/// Residuals of `[ζ, c] = 0` and `Φ(ζ c) = r ζ c` over a basis of `𝒞`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZetaCentralReport {
    pub c_dim: usize,
    /// `max ‖[ζ, c]‖ / (‖ζ‖ ‖c‖)`.
    pub commutator: f64,
    /// `max ‖[p_max, c]‖ / ‖c‖`.
    pub p_max_commutator: f64,
    /// `max ‖Φ(ζc) − rζc‖ / (r ‖ζc‖)` over basis elements with `ζc ≠ 0`.
    pub eigen: f64,
}

impl ZetaCentralReport {
    pub fn max_residual(&self) -> f64 {
        self.commutator.max(self.p_max_commutator).max(self.eigen)
    }
}

pub fn verify_zeta_central(ch: &Channel, tol: &Tolerances) -> Result<ZetaCentralReport> {
    let zd = zeta_data(ch, tol)?;
    let c = algebra_c(ch, tol);
    Ok(zeta_central(ch, &zd, &c))
}

fn zeta_central(ch: &Channel, zd: &ZetaData, c: &OperatorAlgebra) -> ZetaCentralReport {
    let zn = zd.zeta.fro_norm();
    let (mut comm, mut pcomm, mut eigen) = (0.0f64, 0.0f64, 0.0f64);
    for b in c.basis() {
        let bn = b.fro_norm();
        comm = comm.max(zd.zeta.commutator(b).fro_norm() / (zn * bn));
        pcomm = pcomm.max(zd.p_max.commutator(b).fro_norm() / bn);
        let zb = &zd.zeta * b;
        if zb.fro_norm() > 1e-9 * zn * bn {
            eigen = eigen.max(eigen_residual(ch, &zb, zd.r));
        }
    }
    ZetaCentralReport { c_dim: c.len(), commutator: comm, p_max_commutator: pcomm, eigen }
}

/// Check of `{ζ}″𝒟 ≅ {p_𝒟 ζ}″ ⊗ 𝒟` for one full-matrix summand `𝒟` of `𝒞`.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    pub k: usize,
    pub multiplicity: usize,
    /// `dim span {ζ}″𝒟`.
    pub product_dim: usize,
    /// `dim {p_𝒟 ζ}″` inside the corner of `p_𝒟`.
    pub zeta_algebra_dim: usize,
    /// `{ζ}″𝒟` and `{p_𝒟 ζ}″𝒟` span the same space.
    pub same_span: bool,
}

impl Factorization {
    pub fn holds(&self) -> bool {
        self.same_span && self.product_dim == self.zeta_algebra_dim * self.k * self.k
    }
}

fn factorizations(zd: &ZetaData, c: &OperatorAlgebra, seed: u64, tol: &Tolerances) -> Result<Vec<Factorization>> {
    let blocks = block_decompose(c, seed, tol)?;
    let n = zd.zeta.rows();
    let zs = zd.zeta.scale_re(1.0 / zd.zeta.op_norm());
    let mut out = Vec::with_capacity(blocks.len());
    for b in &blocks {
        let pd = &b.projection;
        let summand: Vec<CMatrix> = c.basis().iter().map(|x| pd * x).collect();
        let pz = pd * &zs;
        let powers = |m: &CMatrix, unit: &CMatrix| {
            let mut out = Vec::with_capacity(n + 1);
            let mut cur = unit.clone();
            out.push(cur.clone());
            for _ in 0..n {
                cur = &cur * m;
                out.push(cur.clone());
            }
            out
        };
        let zeta_alg = powers(&zs, &CMatrix::identity(n));
        let pzeta_alg = powers(&pz, pd);
        let prod = |alg: &[CMatrix]| -> Vec<CMatrix> {
            let mut out = Vec::new();
            for a in alg {
                for d in &summand {
                    out.push(a * d);
                }
            }
            out
        };
        let lhs = prod(&zeta_alg);
        let rhs = prod(&pzeta_alg);
        out.push(Factorization {
            k: b.k,
            multiplicity: b.multiplicity,
            product_dim: span_dim(&lhs),
            zeta_algebra_dim: span_dim(&pzeta_alg),
            same_span: max_principal_angle(&lhs, &rhs) <= 1e-6,
        });
    }
    Ok(out)
}

/// Two-sided inclusion check between a parametrised family and `ℰ⁺`.
#[derive(Debug, Clone, PartialEq)]
pub struct Inclusion {
    /// Worst residual of "family element lies in `ℰ⁺`".
    pub forward: f64,
    /// Worst residual of "sampled `ℰ⁺` element is reproduced by the family".
    pub backward: f64,
}

impl Inclusion {
    pub fn holds(&self, limit: f64) -> bool {
        self.forward <= limit && self.backward <= limit
    }

    fn new() -> Self {
        Inclusion { forward: 0.0, backward: 0.0 }
    }
}

/// Outcome of the eigenspace structure checks.
#[derive(Debug, Clone)]
pub struct StructureReport {
    pub r: f64,
    pub eigenspace_dim: usize,
    pub p_max_rank: usize,
    pub a_dim: usize,
    pub b_dim: usize,
    pub c_dim: usize,
    pub c_zeta_dim: usize,
    /// `p_max ∧ R(y₁)^⊥ = 0` for the maximal-support eigenvector `y₁` of the
    /// adjoint map.
    pub hypothesis: bool,
    /// The stronger `p_max = R(y₁)`.
    pub hypothesis_strong: bool,
    /// Sine of the largest principal angle between `𝒜` and `ℬ*`.
    pub a_vs_b_star: f64,
    /// Between `𝒞` and `𝒜 ∩ ℬ`.
    pub c_vs_intersection: f64,
    pub zeta_central: ZetaCentralReport,
    pub factorizations: Vec<Factorization>,
    /// `ℰ⁺ = ζ^{1/2} 𝒞_ζ⁺ ζ^{1/2}`.
    pub c_zeta_form: Option<Inclusion>,
    /// `ℰ⁺ = {v ζ v* : v ∈ ℬ_p} = {v* ζ v : v ∈ 𝒜_p}`.
    pub conjugation_form: Option<Inclusion>,
    /// `ℰ⁺ = (ℬ_p ζ)⁺ = (ζ 𝒜_p)⁺`.
    pub product_form: Option<Inclusion>,
    /// `dim span ζ^{1/2} 𝒞_ζ ζ^{1/2} = dim ℰ`.
    pub dims_match: Option<bool>,
    pub samples: usize,
}

/// Residual accepted for the structure inclusions.
pub const STRUCTURE_LIMIT: f64 = 1e-7;

impl StructureReport {
    /// Every check that ran passed.
    pub fn passed(&self) -> bool {
        let inc = [&self.c_zeta_form, &self.conjugation_form, &self.product_form]
            .iter()
            .all(|i| i.as_ref().is_none_or(|i| i.holds(STRUCTURE_LIMIT)));
        inc && self.dims_match.unwrap_or(true)
            && self.a_vs_b_star <= 1e-8
            && self.c_vs_intersection <= 1e-8
            && self.zeta_central.max_residual() <= STRUCTURE_LIMIT
            && self.factorizations.iter().all(Factorization::holds)
    }
}

/// Run the eigenspace structure checks on `samples` random points of each
/// family.
pub fn verify_structure(ch: &Channel, samples: usize, seed: u64, tol: &Tolerances) -> Result<StructureReport> {
    let n = ch.dim();
    let zd = zeta_data(ch, tol)?;
    let ms = max_support(ch, tol)?;
    let r = zd.r;
    let e_basis = hermitian_span(&eigenspace_of(&ms.spectrum, n, tol));

    let a = algebra_a(ch, tol);
    let b = algebra_b(ch, tol);
    let c = algebra_c(ch, tol);
    let a_vs_b_star = max_principal_angle(a.basis(), b.adjoint().basis());
    let ab_intersection = intersection(&a, &b, tol);
    let c_vs_intersection = max_principal_angle(c.basis(), &ab_intersection);

    let zeta_central = zeta_central(ch, &zd, &c);
    let factorizations = factorizations(&zd, &c, seed, tol)?;

    let (hypothesis, hypothesis_strong) = hypothesis_check(ch, &zd.p_max, tol)?;

    let xz = conjugate_by_zeta(ch, &zd);
    let p = &zd.p_max;
    let c_zeta = commutant(&with_adjoints(xz.kraus()), Some(p), tol)?;
    let cut: Vec<CMatrix> = ch.kraus().iter().map(|f| &(p * f) * p).collect();
    let cut_adj: Vec<CMatrix> = cut.iter().map(CMatrix::adjoint).collect();
    let a_p = commutant(&cut_adj, Some(p), tol)?;
    let b_p = commutant(&cut, Some(p), tol)?;

    let mut report = StructureReport {
        r,
        eigenspace_dim: e_basis.len(),
        p_max_rank: zd.p_max.trace().re.round() as usize,
        a_dim: a.len(),
        b_dim: b.len(),
        c_dim: c.len(),
        c_zeta_dim: c_zeta.len(),
        hypothesis,
        hypothesis_strong,
        a_vs_b_star,
        c_vs_intersection,
        zeta_central,
        factorizations,
        c_zeta_form: None,
        conjugation_form: None,
        product_form: None,
        dims_match: None,
        samples,
    };
    if !hypothesis {
        return Ok(report);
    }

    let mut rng = rng_from_seed(seed);
    let in_e_plus = |y: &CMatrix| -> f64 {
        let yn = y.fro_norm();
        if yn == 0.0 {
            return 0.0;
        }
        let eig = eigen_residual(ch, y, r);
        let herm = y.hermitian_deviation() / yn;
        let neg = herm_eig_sym(&y.hermitian_part()).map(|e| (-e.min()).max(0.0) / yn).unwrap_or(f64::INFINITY);
        eig.max(herm).max(neg)
    };
    let (sq, isq) = (&zd.sqrt, &zd.inv_sqrt);

    let mut cz = Inclusion::new();
    let mut conj = Inclusion::new();
    let mut prod = Inclusion::new();
    let e_plus = sample_e_plus(&zd, &e_basis, samples, &mut rng);

    for _ in 0..samples {
        let h = c_zeta.random_hermitian(&mut rng);
        let w = &h * &h;
        cz.forward = cz.forward.max(in_e_plus(&(&(sq * &w) * sq)));
        let v = b_p.random_element(&mut rng);
        conj.forward = conj.forward.max(in_e_plus(&(&(&v * &zd.zeta) * &v.adjoint())));
        let v = a_p.random_element(&mut rng);
        conj.forward = conj.forward.max(in_e_plus(&(&(&v.adjoint() * &zd.zeta) * &v)));
        let v = b_p.random_element(&mut rng);
        prod.forward = prod.forward.max(eigen_residual(ch, &(&v * &zd.zeta), r));
        let v = a_p.random_element(&mut rng);
        prod.forward = prod.forward.max(eigen_residual(ch, &(&zd.zeta * &v), r));
    }

    let zeta_pinv = (isq * isq).hermitian_part();
    for y in &e_plus {
        let yn = y.fro_norm();
        // y = ζ^{1/2} c ζ^{1/2} with c ∈ 𝒞_ζ⁺
        let c_el = (&(isq * y) * isq).hermitian_part();
        let rebuilt = &(sq * &c_el) * sq;
        let c_neg = herm_eig_sym(&c_el).map(|e| (-e.min()).max(0.0) / c_el.fro_norm()).unwrap_or(f64::INFINITY);
        let c_res = c_zeta.distance(&c_el) / c_el.fro_norm();
        cz.backward = cz.backward.max(rebuilt.dist(y) / yn).max(c_neg).max(c_res);

        // v = ζ^{1/2} c^{1/2} ζ^{-1/2} ∈ ℬ_p and its mirror in 𝒜_p
        let Ok(root) = crate::numerics::sqrt_psd(&c_el, &Tolerances { psd_floor: 1e-6, ..*tol }) else {
            conj.backward = f64::INFINITY;
            continue;
        };
        let vb = &(sq * &root) * isq;
        let va = &(isq * &root) * sq;
        let rb = (&(&vb * &zd.zeta) * &vb.adjoint()).dist(y) / yn;
        let ra = (&(&va.adjoint() * &zd.zeta) * &va).dist(y) / yn;
        let mb = b_p.distance(&vb) / vb.fro_norm();
        let ma = a_p.distance(&va) / va.fro_norm();
        conj.backward = conj.backward.max(rb).max(ra).max(mb).max(ma);

        // y = (y ζ⁺) ζ = ζ (ζ⁺ y)
        let left = y * &zeta_pinv;
        let right = &zeta_pinv * y;
        let lb = (&left * &zd.zeta).dist(y) / yn;
        let rr = (&zd.zeta * &right).dist(y) / yn;
        let ml = b_p.distance(&left) / left.fro_norm();
        let mr = a_p.distance(&right) / right.fro_norm();
        prod.backward = prod.backward.max(lb).max(rr).max(ml).max(mr);
    }

    let image: Vec<CMatrix> = c_zeta.basis().iter().map(|w| &(sq * w) * sq).collect();
    report.dims_match = Some(span_dim(&image) == e_basis.len());
    report.c_zeta_form = Some(cz);
    report.conjugation_form = Some(conj);
    report.product_form = Some(prod);
    Ok(report)
}

/// Basis of `A ∩ B` from the null space of `[A | −B]`.
fn intersection(a: &OperatorAlgebra, b: &OperatorAlgebra, tol: &Tolerances) -> Vec<CMatrix> {
    let n = a.dim();
    let cols: Vec<Vec<C64>> = a
        .basis()
        .iter()
        .map(|m| m.vec_col())
        .chain(b.basis().iter().map(|m| m.scale_re(-1.0).vec_col()))
        .collect();
    if cols.is_empty() {
        return Vec::new();
    }
    let l = CMatrix::from_columns(n * n, &cols);
    crate::numerics::decomp::null_space_cut(&l, 10.0 * tol.rank_cut.max(1e-10))
        .iter()
        .map(|c| {
            let mut m = CMatrix::zeros(n, n);
            for (ci, bi) in c.iter().zip(a.basis()) {
                m = &m + &bi.scale(*ci);
            }
            m
        })
        .collect()
}

/// Hermitian basis of a *-closed span.
fn hermitian_span(ms: &[CMatrix]) -> Vec<CMatrix> {
    let Some(first) = ms.first() else { return Vec::new() };
    let n = first.rows();
    let mut vs = Vec::new();
    for m in ms {
        let ms = m.adjoint();
        vs.push((m + &ms).scale_re(0.5).vec_col());
        vs.push((m - &ms).scale(C64::new(0.0, -0.5)).vec_col());
    }
    crate::numerics::orthonormalize(&vs, 1e-8)
        .iter()
        .map(|v| CMatrix::from_vec_col(n, n, v).hermitian_part())
        .collect()
}

fn hypothesis_check(ch: &Channel, p_max: &CMatrix, tol: &Tolerances) -> Result<(bool, bool)> {
    let y1 = max_support(&ch.adjoint(), tol)?;
    let q = crate::numerics::range_basis(p_max, tol);
    let compressed = &(&q.adjoint() * &y1.support) * &q;
    let weak = herm_eig_sym(&compressed.hermitian_part()).map(|e| e.min() > 1e-6).unwrap_or(false);
    let strong = y1.support.dist(p_max) <= 1e-6;
    Ok((weak, strong))
}

/// PSD points of the eigenspace: `ζ` pushed towards the boundary of the cone
/// along random Hermitian directions, plus `ζ` itself.
fn sample_e_plus<R: rand::Rng + ?Sized>(zd: &ZetaData, e_basis: &[CMatrix], samples: usize, rng: &mut R) -> Vec<CMatrix> {
    let n = zd.zeta.rows();
    let mut out = alloc::vec![zd.zeta.clone()];
    for i in 0..samples {
        let mut h = CMatrix::zeros(n, n);
        for b in e_basis {
            let g: f64 = rng.sample(rand_distr::StandardNormal);
            h = &h + &b.scale_re(g);
        }
        // y = ζ + t h ⪰ 0 iff p + t ζ^{-1/2} h ζ^{-1/2} ⪰ 0 on the support
        let k = (&(&zd.inv_sqrt * &h) * &zd.inv_sqrt).hermitian_part();
        let Ok(e) = herm_eig_sym(&k) else { continue };
        let lo = e.min();
        if lo >= 0.0 {
            continue;
        }
        let t_max = 1.0 / -lo;
        // alternate interior and near-boundary points
        let frac = if i % 2 == 0 { 0.5 } else { 0.99 };
        let y = (&zd.zeta + &h.scale_re(frac * t_max)).hermitian_part();
        out.push(y);
    }
    out
}
