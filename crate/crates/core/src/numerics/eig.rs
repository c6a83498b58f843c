use alloc::vec::Vec;

#[allow(unused_imports)] // float methods come from std when it is linked
use num_traits::Float;

use super::{CMatrix, Tolerances, C64, ZERO};
use crate::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// Spectral decomposition `M = V diag(values) V*` of a Hermitian matrix,
/// eigenvalues sorted in descending order.
#[derive(Debug, Clone)]
pub struct HermEig {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermEig {
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            for i in 0..n {
                scaled[(i, j)] *= self.values[j];
            }
        }
        &scaled * &self.vectors.adjoint()
    }

    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// Rebuild `V f(Λ) V*`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            let fj = f(self.values[j]);
            for i in 0..n {
                scaled[(i, j)] *= fj;
            }
        }
        &scaled * &self.vectors.adjoint()
    }
}

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// Fails with [`Error::NotHermitian`] when `‖M − M*‖ > residual·‖M‖`; the
/// input is symmetrised before iterating.
pub fn herm_eig(m: &CMatrix, tol: &Tolerances) -> Result<HermEig> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.rows(), found: m.cols() });
    }
    let dev = m.hermitian_deviation();
    if dev > tol.residual {
        return Err(Error::NotHermitian { deviation: dev });
    }
    jacobi(m.hermitian_part())
}

/// Same as [`herm_eig`] for matrices that are Hermitian by construction.
pub(crate) fn herm_eig_sym(m: &CMatrix) -> Result<HermEig> {
    jacobi(m.hermitian_part())
}

fn jacobi(mut a: CMatrix) -> Result<HermEig> {
    let n = a.rows();
    let mut v = CMatrix::identity(n);
    let scale = a.fro_norm();
    if scale > 0.0 {
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            let mut off = 0.0;
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        off += a[(i, j)].norm_sqr();
                    }
                }
            }
            if off.sqrt() <= f64::EPSILON * 0.5 * scale {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    rotate(&mut a, &mut v, p, q, scale);
                }
            }
        }
        if !converged {
            return Err(Error::NoConvergence { routine: "hermitian jacobi" });
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap_or(core::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermEig { values, vectors })
}

/// One Jacobi rotation annihilating `a[p][q]`: `A ← G* A G`, `V ← V G`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize, scale: f64) {
    let b = a[(p, q)];
    let absb = b.norm();
    if absb <= f64::MIN_POSITIVE || absb <= 1e-3 * f64::EPSILON * scale {
        a[(p, q)] = ZERO;
        a[(q, p)] = ZERO;
        return;
    }
    let phase = b / absb;
    let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
    let theta = (aqq - app) / (2.0 * absb);
    let t = if theta == 0.0 { 1.0 } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let g = rot2(c, s, phase.conj());
    apply_right(a, p, q, &g);
    apply_left_adjoint(a, p, q, &g);
    apply_right(v, p, q, &g);
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
}

/// `diag(1, w) · [[c, s], [−s, c]]`, a 2x2 unitary.
#[inline]
pub(crate) fn rot2(c: f64, s: f64, w: C64) -> [[C64; 2]; 2] {
    [[C64::new(c, 0.0), C64::new(s, 0.0)], [w * (-s), w * c]]
}

/// Columns `p, q` of `m` ← `[m_p, m_q] · G`.
#[inline]
pub(crate) fn apply_right(m: &mut CMatrix, p: usize, q: usize, g: &[[C64; 2]; 2]) {
    for i in 0..m.rows() {
        let (x, y) = (m[(i, p)], m[(i, q)]);
        m[(i, p)] = x * g[0][0] + y * g[1][0];
        m[(i, q)] = x * g[0][1] + y * g[1][1];
    }
}

/// Rows `p, q` of `m` ← `G* · [m_p; m_q]`.
#[inline]
fn apply_left_adjoint(m: &mut CMatrix, p: usize, q: usize, g: &[[C64; 2]; 2]) {
    for j in 0..m.cols() {
        let (x, y) = (m[(p, j)], m[(q, j)]);
        m[(p, j)] = g[0][0].conj() * x + g[1][0].conj() * y;
        m[(q, j)] = g[0][1].conj() * x + g[1][1].conj() * y;
    }
}
