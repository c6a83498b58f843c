use alloc::vec::Vec;

#[allow(unused_imports)] // float methods come from std when it is linked
use num_traits::Float;
use rand::Rng;

use crate::numerics::decomp::{null_space_scaled, projector_onto};
use crate::numerics::eig::herm_eig_sym;
use crate::numerics::{orthonormalize, range_basis, svd, vdot, CMatrix, Tolerances, C64, ZERO};
use crate::random::rng_from_seed;
use crate::{Error, Result};

/// A full-matrix summand `M_k ⊗ I_m` of a *-algebra, cut out by a central
/// projection.
#[derive(Debug, Clone)]
pub struct Block {
    pub projection: CMatrix,
    /// Size of the matrix block.
    pub k: usize,
    pub multiplicity: usize,
}

impl Block {
    pub fn rank(&self) -> usize {
        self.k * self.multiplicity
    }
}

/// A unital subalgebra of `p M_n p`, stored as a trace-orthonormal basis.
#[derive(Debug, Clone)]
pub struct OperatorAlgebra {
    dim: usize,
    basis: Vec<CMatrix>,
    unit: CMatrix,
    pub star_closed: bool,
    pub blocks: Option<Vec<Block>>,
}

impl OperatorAlgebra {
    /// Span of `elements` inside the corner with unit `unit`. The unit is
    /// always added.
    pub fn from_span(unit: &CMatrix, elements: &[CMatrix], tol: &Tolerances) -> OperatorAlgebra {
        let n = unit.rows();
        let mut vecs: Vec<Vec<C64>> = Vec::with_capacity(elements.len() + 1);
        vecs.push(unit.vec_col());
        vecs.extend(elements.iter().map(|m| m.vec_col()));
        let basis: Vec<CMatrix> = orthonormalize(&vecs, span_cut(tol)).iter().map(|v| CMatrix::from_vec_col(n, n, v)).collect();
        let mut alg = OperatorAlgebra { dim: n, basis, unit: unit.clone(), star_closed: false, blocks: None };
        alg.star_closed = alg.basis.iter().all(|b| alg.contains(&b.adjoint(), tol));
        alg
    }

    /// Ambient matrix size `n`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the algebra as a vector space.
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    pub fn unit(&self) -> &CMatrix {
        &self.unit
    }

    /// `‖m − π(m)‖` with `π` the orthogonal projection onto the span.
    pub fn distance(&self, m: &CMatrix) -> f64 {
        let mut r = m.clone();
        for b in &self.basis {
            let c = b.inner(m);
            r = &r - &b.scale(c);
        }
        r.fro_norm()
    }

    pub fn contains(&self, m: &CMatrix, tol: &Tolerances) -> bool {
        self.distance(m) <= tol.residual * m.fro_norm().max(f64::MIN_POSITIVE)
    }

    /// Largest relative distance of a product of basis elements from the span.
    pub fn closure_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in &self.basis {
            for b in &self.basis {
                let ab = a * b;
                let s = ab.fro_norm();
                if s > 0.0 {
                    worst = worst.max(self.distance(&ab) / s);
                }
            }
        }
        worst
    }

    /// The algebra `{a* : a ∈ self}`.
    pub fn adjoint(&self) -> OperatorAlgebra {
        OperatorAlgebra {
            dim: self.dim,
            basis: self.basis.iter().map(CMatrix::adjoint).collect(),
            unit: self.unit.clone(),
            star_closed: self.star_closed,
            blocks: None,
        }
    }

    /// Hermitian spanning set (real span equals the self-adjoint part).
    pub fn hermitian_basis(&self) -> Vec<CMatrix> {
        let mut out: Vec<Vec<C64>> = Vec::new();
        for b in &self.basis {
            let bs = b.adjoint();
            out.push((b + &bs).scale_re(0.5).vec_col());
            out.push((b - &bs).scale(C64::new(0.0, -0.5)).vec_col());
        }
        let n = self.dim;
        orthonormalize(&out, 1e-8).iter().map(|v| CMatrix::from_vec_col(n, n, v).hermitian_part()).collect()
    }

    /// A random Hermitian element: a Gaussian real combination of the
    /// Hermitian basis.
    pub fn random_hermitian<R: Rng + ?Sized>(&self, rng: &mut R) -> CMatrix {
        let mut h = CMatrix::zeros(self.dim, self.dim);
        for b in self.hermitian_basis() {
            let g: f64 = rng.sample(rand_distr::StandardNormal);
            h = &h + &b.scale_re(g);
        }
        h
    }

    /// A random element with complex Gaussian coefficients.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> CMatrix {
        let mut h = CMatrix::zeros(self.dim, self.dim);
        for b in &self.basis {
            h = &h + &b.scale(crate::random::gaussian_c64(rng));
        }
        h
    }

    /// Fill in [`OperatorAlgebra::blocks`].
    pub fn decompose(&mut self, seed: u64, tol: &Tolerances) -> Result<&[Block]> {
        let blocks = block_decompose(self, seed, tol)?;
        Ok(self.blocks.insert(blocks))
    }
}

fn span_cut(tol: &Tolerances) -> f64 {
    (tol.rank_cut * 1e2).max(1e-9)
}

/// Sine of the largest principal angle between two subspaces of matrices,
/// given by spanning sets. `1` when the dimensions differ.
pub fn max_principal_angle(a: &[CMatrix], b: &[CMatrix]) -> f64 {
    let ba = orthonormal_vecs(a);
    let bb = orthonormal_vecs(b);
    if ba.len() != bb.len() {
        return 1.0;
    }
    if ba.is_empty() {
        return 0.0;
    }
    // ‖(I − P_a) P_b‖ as the top singular value of the residuals of bb
    let len = ba[0].len();
    let cols: Vec<Vec<C64>> = bb
        .iter()
        .map(|v| {
            let mut w = v.clone();
            for u in &ba {
                let d = vdot(u, &w);
                for (wi, ui) in w.iter_mut().zip(u) {
                    *wi -= d * ui;
                }
            }
            w
        })
        .collect();
    let m = CMatrix::from_columns(len, &cols);
    svd(&m).map(|s| s.sigma[0].min(1.0)).unwrap_or(1.0)
}

fn orthonormal_vecs(ms: &[CMatrix]) -> Vec<Vec<C64>> {
    let vs: Vec<Vec<C64>> = ms.iter().map(|m| m.vec_col()).collect();
    orthonormalize(&vs, 1e-9)
}

/// `{X ∈ p M_n p : XG = GX for every generator G}`, with `p = I` when no
/// corner is given.
pub fn commutant(generators: &[CMatrix], corner: Option<&CMatrix>, tol: &Tolerances) -> Result<OperatorAlgebra> {
    let n = match (generators.first(), corner) {
        (_, Some(p)) => p.rows(),
        (Some(g), None) => g.rows(),
        (None, None) => return Err(Error::InvalidMatrix("commutant needs a generator or a corner")),
    };
    for g in generators {
        if g.rows() != n || g.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: g.rows() });
        }
    }
    let unit = corner.cloned().unwrap_or_else(|| CMatrix::identity(n));
    let q = range_basis(&unit, tol);
    let k = q.cols();
    if k == 0 {
        return Ok(OperatorAlgebra { dim: n, basis: Vec::new(), unit, star_closed: true, blocks: None });
    }
    // generators at rounding level relative to the largest one are zero;
    // rescaling them would turn noise into constraints
    let largest = generators.iter().map(CMatrix::fro_norm).fold(0.0, f64::max);
    let gens: Vec<CMatrix> = generators
        .iter()
        .filter(|g| g.fro_norm() > tol.rank_cut * largest)
        .map(|g| g.scale_re(1.0 / g.fro_norm()))
        .collect();
    let basis_vecs = if gens.is_empty() {
        (0..k * k)
            .map(|i| {
                let mut v = alloc::vec![ZERO; k * k];
                v[i] = C64::new(1.0, 0.0);
                v
            })
            .collect()
    } else {
        let rows = gens.len() * n * n;
        let mut l = CMatrix::zeros(rows, k * k);
        for b in 0..k {
            for a in 0..k {
                let qa = q.column(a);
                let qb = q.column(b);
                let x = CMatrix::from_fn(n, n, |i, j| qa[i] * qb[j].conj());
                let col = b * k + a;
                for (gi, g) in gens.iter().enumerate() {
                    let c = &(&x * g) - &(g * &x);
                    let v = c.vec_col();
                    for (t, z) in v.into_iter().enumerate() {
                        l[(gi * n * n + t, col)] = z;
                    }
                }
            }
        }
        null_space_scaled(&l, 10.0 * tol.rank_cut.max(1e-10), 1.0)
    };
    let qs = q.adjoint();
    let basis: Vec<CMatrix> = basis_vecs
        .iter()
        .map(|v| &(&q * &CMatrix::from_vec_col(k, k, v)) * &qs)
        .collect();
    let mut alg = OperatorAlgebra { dim: n, basis, unit, star_closed: false, blocks: None };
    alg.star_closed = alg.basis.iter().all(|b| alg.distance(&b.adjoint()) <= 1e-7 * b.fro_norm());
    Ok(alg)
}

/// `alg ∩ alg′`.
pub fn center(alg: &OperatorAlgebra, tol: &Tolerances) -> OperatorAlgebra {
    let n = alg.dim;
    let d = alg.basis.len();
    if d == 0 {
        return alg.clone();
    }
    let mut l = CMatrix::zeros(d * n * n, d);
    for (i, bi) in alg.basis.iter().enumerate() {
        for (j, bj) in alg.basis.iter().enumerate() {
            let v = bi.commutator(bj).vec_col();
            for (t, z) in v.into_iter().enumerate() {
                l[(j * n * n + t, i)] = z;
            }
        }
    }
    let coeffs = null_space_scaled(&l, 10.0 * tol.rank_cut.max(1e-10), 1.0);
    let basis: Vec<CMatrix> = coeffs
        .iter()
        .map(|c| {
            let mut m = CMatrix::zeros(n, n);
            for (ci, bi) in c.iter().zip(&alg.basis) {
                m = &m + &bi.scale(*ci);
            }
            m
        })
        .collect();
    OperatorAlgebra { dim: n, basis, unit: alg.unit.clone(), star_closed: true, blocks: None }
}

const REDRAWS: usize = 5;

/// Central decomposition of a *-algebra into `M_k ⊗ I_m` summands.
///
/// Central projections are the spectral projections of a generic Hermitian
/// element of the center; inside each, `k` distinct eigenvalues of multiplicity
/// `m` of a generic Hermitian element of the algebra give the block shape.
/// Blocks are ordered by decreasing rank, then by the first basis index in
/// their range.
pub fn block_decompose(alg: &OperatorAlgebra, seed: u64, tol: &Tolerances) -> Result<Vec<Block>> {
    if !alg.star_closed {
        return Err(Error::NotStarClosed);
    }
    let n = alg.dim;
    let q = range_basis(&alg.unit, tol);
    let corner_rank = q.cols();
    if corner_rank == 0 {
        return Ok(Vec::new());
    }
    let z = center(alg, tol);
    let mut rng = rng_from_seed(seed);
    for _ in 0..REDRAWS {
        let h = z.random_hermitian(&mut rng);
        let groups = eigen_groups(&(&(&q.adjoint() * &h) * &q));
        if groups.len() != z.len() {
            continue;
        }
        let a = alg.random_hermitian(&mut rng);
        let mut blocks = Vec::with_capacity(groups.len());
        let mut ok = true;
        for g in &groups {
            let vs: Vec<Vec<C64>> = g.iter().map(|v| q.mul_vec(v)).collect();
            let p = projector_onto(n, &vs);
            let iso = CMatrix::from_columns(n, &vs);
            let local = &(&iso.adjoint() * &a) * &iso;
            let pattern = eigen_groups(&local);
            let k = pattern.len();
            let m = vs.len() / k.max(1);
            let dim_here = OperatorAlgebra::from_span(&p, &alg.basis.iter().map(|b| &p * b).collect::<Vec<_>>(), tol).len();
            if k == 0 || pattern.iter().any(|c| c.len() != m) || dim_here != k * k {
                ok = false;
                break;
            }
            blocks.push(Block { projection: p, k, multiplicity: m });
        }
        if !ok {
            continue;
        }
        let total: usize = blocks.iter().map(Block::rank).sum();
        if total != corner_rank {
            continue;
        }
        blocks.sort_by(|x, y| y.rank().cmp(&x.rank()).then(first_support(&x.projection).cmp(&first_support(&y.projection))));
        return Ok(blocks);
    }
    Err(Error::NumericalDegeneracy("block decomposition: eigenvalue collisions in every draw"))
}

fn first_support(p: &CMatrix) -> usize {
    let top = p.max_abs();
    (0..p.rows()).find(|&i| p[(i, i)].re > 1e-6 * top).unwrap_or(p.rows())
}

/// Eigenvectors of a Hermitian matrix grouped by (numerically) equal
/// eigenvalue.
pub(crate) fn eigen_groups(h: &CMatrix) -> Vec<Vec<Vec<C64>>> {
    let Ok(e) = herm_eig_sym(h) else { return Vec::new() };
    let d = e.values.len();
    if d == 0 {
        return Vec::new();
    }
    let scale = e.values.iter().fold(0.0f64, |a, &b| a.max(b.abs())).max(f64::MIN_POSITIVE);
    let mut groups: Vec<Vec<Vec<C64>>> = Vec::new();
    let mut last = f64::NAN;
    for j in 0..d {
        let v = e.values[j];
        if groups.is_empty() || (last - v).abs() > 1e-6 * scale {
            groups.push(Vec::new());
        }
        groups.last_mut().unwrap().push(e.vectors.column(j));
        last = v;
    }
    groups
}

/// Dimension of a span of matrices (relative cut `1e-8`).
pub fn span_dim(ms: &[CMatrix]) -> usize {
    let vs: Vec<Vec<C64>> = ms.iter().map(|m| m.vec_col()).collect();
    orthonormalize(&vs, 1e-8).len()
}

/// `‖XG − GX‖ / (‖X‖ ‖G‖)`, maximised over basis and generators.
pub fn commutation_defect(alg: &OperatorAlgebra, generators: &[CMatrix]) -> f64 {
    let mut worst = 0.0f64;
    for b in &alg.basis {
        for g in generators {
            let s = b.fro_norm() * g.fro_norm();
            if s > 0.0 {
                worst = worst.max(b.commutator(g).fro_norm() / s);
            }
        }
    }
    worst
}
