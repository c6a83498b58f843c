use alloc::vec::Vec;

#[allow(unused_imports)] // float methods come from std when it is linked
use num_traits::Float;

use super::eig::{apply_right, rot2};
use super::{vdot, vnorm, CMatrix, C64, ZERO};
use crate::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// Thin singular value decomposition `M = U diag(sigma) V*`.
///
/// For an `m x n` input, `U` is `m x k`, `V` is `n x k` with `k = min(m, n)`;
/// both have orthonormal columns and `sigma` is sorted descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> CMatrix {
        let mut us = self.u.clone();
        for j in 0..self.sigma.len() {
            for i in 0..us.rows() {
                us[(i, j)] *= self.sigma[j];
            }
        }
        &us * &self.v.adjoint()
    }

    /// Number of singular values above `cut · sigma_max`. Zero for a zero matrix.
    pub fn rank(&self, cut: f64) -> usize {
        let top = self.sigma.first().copied().unwrap_or(0.0);
        if top == 0.0 {
            return 0;
        }
        self.sigma.iter().filter(|&&s| s > cut * top).count()
    }
}

/// One-sided (Hestenes) Jacobi SVD.
pub fn svd(m: &CMatrix) -> Result<Svd> {
    if m.rows() < m.cols() {
        let t = hestenes(&m.adjoint())?;
        return Ok(Svd { u: t.v, sigma: t.sigma, v: t.u });
    }
    hestenes(m)
}

fn hestenes(m: &CMatrix) -> Result<Svd> {
    let (rows, n) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut v = CMatrix::identity(n);
    let mut converged = n < 2;
    let floor = (f64::EPSILON * m.fro_norm()).powi(2) * 1e-2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, ZERO);
                for i in 0..rows {
                    let (x, y) = (a[(i, p)], a[(i, q)]);
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                let g = gamma.norm();
                if g == 0.0 || alpha <= floor || beta <= floor || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta == 0.0 { 1.0 } else { zeta.signum() / (zeta.abs() + (zeta * zeta + 1.0).sqrt()) };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let rot = rot2(c, t * c, phase.conj());
                apply_right(&mut a, p, q, &rot);
                apply_right(&mut v, p, q, &rot);
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { routine: "one-sided jacobi svd" });
    }

    let norms: Vec<f64> = (0..n).map(|j| vnorm(&a.column(j))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(core::cmp::Ordering::Equal));
    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let top = sigma.first().copied().unwrap_or(0.0);

    let mut ucols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        if sigma[k] > f64::MIN_POSITIVE && sigma[k] > top * f64::EPSILON * 1e-3 {
            let inv = 1.0 / sigma[k];
            ucols.push(a.column(j).iter().map(|z| z * inv).collect());
        } else {
            ucols.push(Vec::new());
        }
    }
    complete_orthonormal(rows, &mut ucols);
    let u = CMatrix::from_columns(rows, &ucols);
    let v = CMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(Svd { u, sigma, v })
}

/// Fill empty slots with unit vectors orthogonal to the filled ones.
fn complete_orthonormal(rows: usize, cols: &mut [Vec<C64>]) {
    let mut candidate = 0;
    for k in 0..cols.len() {
        if !cols[k].is_empty() {
            continue;
        }
        while candidate < rows {
            let mut w = alloc::vec![ZERO; rows];
            w[candidate] = C64::new(1.0, 0.0);
            candidate += 1;
            for _ in 0..2 {
                for c in cols.iter().filter(|c| !c.is_empty()) {
                    let d = vdot(c, &w);
                    for (wi, ci) in w.iter_mut().zip(c) {
                        *wi -= d * ci;
                    }
                }
            }
            let nw = vnorm(&w);
            if nw > 0.5 {
                cols[k] = w.iter().map(|z| z / nw).collect();
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{ginibre, rng_from_seed};

    #[test]
    fn identity_and_rank_one() {
        let s = svd(&CMatrix::identity(3)).unwrap();
        assert!(s.sigma.iter().all(|&x| (x - 1.0).abs() < 1e-15));

        let u = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let v = [C64::new(0.0, 1.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
        let m = CMatrix::from_fn(2, 3, |i, j| u[i] * v[j].conj());
        let s = svd(&m).unwrap();
        assert!((s.sigma[0] - 1.0).abs() < 1e-14 && s.sigma[1].abs() < 1e-14);
        assert_eq!(s.rank(1e-10), 1);
    }

    #[test]
    fn random_shapes_reconstruct() {
        let mut rng = rng_from_seed(3);
        for &(r, c) in &[(5, 3), (3, 5), (4, 4), (1, 4), (6, 1)] {
            let m = ginibre(&mut rng, r, c);
            let s = svd(&m).unwrap();
            assert!(s.reconstruct().dist(&m) <= 1e-12 * m.fro_norm());
            let k = r.min(c);
            assert!((&s.u.adjoint() * &s.u).dist(&CMatrix::identity(k)) < 1e-12);
            assert!((&s.v.adjoint() * &s.v).dist(&CMatrix::identity(k)) < 1e-12);
        }
    }

    #[test]
    fn zero_matrix_has_orthonormal_factors() {
        let s = svd(&CMatrix::zeros(3, 2)).unwrap();
        assert_eq!(s.rank(1e-10), 0);
        assert!((&s.u.adjoint() * &s.u).dist(&CMatrix::identity(2)) < 1e-14);
    }
}
