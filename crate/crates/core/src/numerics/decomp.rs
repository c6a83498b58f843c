use alloc::vec::Vec;

#[allow(unused_imports)] // float methods come from std when it is linked
use num_traits::Float;

use super::eig::herm_eig;
use super::svd::svd;
use super::{vdot, vnorm, CMatrix, Tolerances, C64, ZERO};
use crate::{Error, Result};

/// Polar decomposition `M = u P` with `P = |M|` and `u` a partial isometry
/// that vanishes on the kernel of `P`.
#[derive(Debug, Clone)]
pub struct Polar {
    pub u: CMatrix,
    pub p: CMatrix,
}

pub fn polar(m: &CMatrix, tol: &Tolerances) -> Result<Polar> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.rows(), found: m.cols() });
    }
    let s = svd(m)?;
    let n = m.rows();
    let k = s.rank(tol.rank_cut);
    let mut u = CMatrix::zeros(n, n);
    let mut p = CMatrix::zeros(n, n);
    for l in 0..s.sigma.len() {
        let vl = s.v.column(l);
        for i in 0..n {
            for j in 0..n {
                p[(i, j)] += vl[i] * vl[j].conj() * s.sigma[l];
            }
        }
        if l < k {
            let ul = s.u.column(l);
            for i in 0..n {
                for j in 0..n {
                    u[(i, j)] += ul[i] * vl[j].conj();
                }
            }
        }
    }
    Ok(Polar { u, p: p.hermitian_part() })
}

/// Orthogonal projection onto the column space, rank cut relative to the
/// largest singular value.
pub fn range_projection(m: &CMatrix, tol: &Tolerances) -> CMatrix {
    let s = match svd(m) {
        Ok(s) => s,
        Err(_) => return CMatrix::zeros(m.rows(), m.rows()),
    };
    let k = s.rank(tol.rank_cut);
    let cols: Vec<Vec<C64>> = (0..k).map(|j| s.u.column(j)).collect();
    projector_onto(m.rows(), &cols)
}

/// Isometry (`n x k`) whose columns span the column space.
pub fn range_basis(m: &CMatrix, tol: &Tolerances) -> CMatrix {
    let s = match svd(m) {
        Ok(s) => s,
        Err(_) => return CMatrix::zeros(m.rows(), 0),
    };
    let k = s.rank(tol.rank_cut);
    CMatrix::from_fn(m.rows(), k, |i, j| s.u[(i, j)])
}

/// `Σ v v*` for orthonormal `vs`.
pub(crate) fn projector_onto(n: usize, vs: &[Vec<C64>]) -> CMatrix {
    let mut p = CMatrix::zeros(n, n);
    for v in vs {
        for i in 0..n {
            for j in 0..n {
                p[(i, j)] += v[i] * v[j].conj();
            }
        }
    }
    p
}

pub fn rank(m: &CMatrix, tol: &Tolerances) -> usize {
    svd(m).map(|s| s.rank(tol.rank_cut)).unwrap_or(0)
}

fn psd_eig(m: &CMatrix, tol: &Tolerances) -> Result<super::HermEig> {
    let e = herm_eig(m, tol)?;
    let top = e.values.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    if e.min() < -tol.psd_floor * top.max(f64::MIN_POSITIVE) {
        return Err(Error::NotPsd { min_eigenvalue: e.min() });
    }
    Ok(e)
}

pub fn sqrt_psd(m: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let e = psd_eig(m, tol)?;
    Ok(e.apply(|x| x.max(0.0).sqrt()))
}

/// Moore-Penrose inverse square root: `λ^{-1/2}` on eigenvalues above
/// `rank_cut · λ_max`, zero elsewhere.
pub fn inv_sqrt_on_support(m: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let e = psd_eig(m, tol)?;
    let cut = tol.rank_cut * e.max();
    Ok(e.apply(|x| if x > cut && x > 0.0 { 1.0 / x.sqrt() } else { 0.0 }))
}

/// Orthonormal basis of `{v : Lv = 0}`, singular values at or below
/// `rank_cut · σ_max` treated as zero.
pub fn null_space(l: &CMatrix, tol: &Tolerances) -> Vec<Vec<C64>> {
    null_space_cut(l, tol.rank_cut)
}

pub(crate) fn null_space_cut(l: &CMatrix, cut: f64) -> Vec<Vec<C64>> {
    null_space_scaled(l, cut, 0.0)
}

/// Null space with cutoff `cut · max(σ_max, scale)`; `scale` is the size the
/// system would have if it were not numerically zero.
pub(crate) fn null_space_scaled(l: &CMatrix, cut: f64, scale: f64) -> Vec<Vec<C64>> {
    let n = l.cols();
    let square = if l.rows() > n {
        householder_r(l)
    } else if l.rows() < n {
        let mut padded = CMatrix::zeros(n, n);
        padded.set_block(0, 0, l);
        padded
    } else {
        l.clone()
    };
    let s = match svd(&square) {
        Ok(s) => s,
        Err(_) => return Vec::new(),
    };
    let top = s.sigma[0].max(scale);
    (0..n)
        .filter(|&j| top == 0.0 || s.sigma[j] <= cut * top)
        .map(|j| s.v.column(j))
        .collect()
}

/// Null space with an absolute singular-value cutoff.
pub(crate) fn null_space_abs(l: &CMatrix, cut: f64) -> Vec<Vec<C64>> {
    let n = l.cols();
    if n == 0 {
        return Vec::new();
    }
    let square = if l.rows() > n {
        householder_r(l)
    } else if l.rows() < n {
        let mut padded = CMatrix::zeros(n, n);
        padded.set_block(0, 0, l);
        padded
    } else {
        l.clone()
    };
    let s = match svd(&square) {
        Ok(s) => s,
        Err(_) => return Vec::new(),
    };
    (0..n).filter(|&j| s.sigma[j] <= cut).map(|j| s.v.column(j)).collect()
}

/// Upper-triangular `R` (cols x cols) of a Householder QR of a tall matrix.
fn householder_r(m: &CMatrix) -> CMatrix {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    for k in 0..cols {
        let x: Vec<C64> = (k..rows).map(|i| a[(i, k)]).collect();
        let Some(v) = householder_vector(&x) else { continue };
        for j in k..cols {
            let mut d = ZERO;
            for (t, vi) in v.iter().enumerate() {
                d += vi.conj() * a[(k + t, j)];
            }
            for (t, vi) in v.iter().enumerate() {
                a[(k + t, j)] -= vi * d * 2.0;
            }
        }
    }
    CMatrix::from_fn(cols, cols, |i, j| if i <= j { a[(i, j)] } else { ZERO })
}

/// Unit `v` with `(I − 2vv*) x = α e₁`, or `None` if `x` is already there.
pub(crate) fn householder_vector(x: &[C64]) -> Option<Vec<C64>> {
    let nx = vnorm(x);
    let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
    if nx == 0.0 || tail <= (f64::EPSILON * nx).powi(2) * 1e-4 {
        return None;
    }
    let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { C64::new(1.0, 0.0) };
    let mut v = x.to_vec();
    v[0] += phase * nx;
    let nv = vnorm(&v);
    for z in v.iter_mut() {
        *z /= nv;
    }
    Some(v)
}

/// Gram-Schmidt (with re-orthogonalisation) dropping vectors whose residual
/// falls to `cut` times the largest input norm.
pub fn orthonormalize(vectors: &[Vec<C64>], cut: f64) -> Vec<Vec<C64>> {
    let scale = vectors.iter().map(|v| vnorm(v)).fold(0.0, f64::max);
    let mut basis: Vec<Vec<C64>> = Vec::new();
    if scale == 0.0 {
        return basis;
    }
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let d = vdot(b, &w);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= d * bi;
                }
            }
        }
        let nw = vnorm(&w);
        if nw > cut * scale {
            basis.push(w.iter().map(|z| z / nw).collect());
        }
    }
    basis
}
