use alloc::vec::Vec;

#[allow(unused_imports)] // float methods come from std when it is linked
use num_traits::Float;

use super::decomp::householder_vector;
use super::{CMatrix, C64, ONE, ZERO};
use crate::{Error, Result};

/// Complex Schur form `M = Q T Q*` with `T` upper triangular.
#[derive(Debug, Clone)]
pub struct Schur {
    pub t: CMatrix,
    pub q: CMatrix,
}

impl Schur {
    pub fn eigenvalues(&self) -> Vec<C64> {
        self.t.diagonal()
    }

    /// Move the diagonal entries whose indices are in `selected` to the
    /// leading block, keeping their relative order.
    pub fn reorder(&mut self, selected: &[usize]) {
        let n = self.t.rows();
        let mut flags: Vec<bool> = (0..n).map(|i| selected.contains(&i)).collect();
        let mut front = 0;
        for i in 0..n {
            if !flags[i] {
                continue;
            }
            let mut k = i;
            while k > front {
                self.swap(k - 1);
                flags.swap(k - 1, k);
                k -= 1;
            }
            front += 1;
        }
    }

    /// Exchange the diagonal entries at `k` and `k+1`.
    fn swap(&mut self, k: usize) {
        let n = self.t.rows();
        let t11 = self.t[(k, k)];
        let t22 = self.t[(k + 1, k + 1)];
        let (c, s) = givens(self.t[(k, k + 1)], t22 - t11);
        rotate_rows(&mut self.t, k, c, s, k, n);
        rotate_cols(&mut self.t, k, c, s, 0, k + 2);
        rotate_cols(&mut self.q, k, c, s, 0, n);
        self.t[(k + 1, k)] = ZERO;
        self.t[(k, k)] = t22;
        self.t[(k + 1, k + 1)] = t11;
    }

    /// Riesz projector onto the invariant subspace of the eigenvalues in
    /// `selected`, along the complementary invariant subspace.
    pub fn projector(&self, selected: &[usize]) -> CMatrix {
        let n = self.t.rows();
        let k = selected.len();
        if k == 0 {
            return CMatrix::zeros(n, n);
        }
        if k == n {
            return CMatrix::identity(n);
        }
        let mut s = self.clone();
        s.reorder(selected);
        let t = &s.t;
        // T11 X − X T22 = T12, column by column.
        let m = n - k;
        let mut x = CMatrix::zeros(k, m);
        for j in 0..m {
            let mut rhs: Vec<C64> = (0..k).map(|i| t[(i, k + j)]).collect();
            for l in 0..j {
                let coef = t[(k + l, k + j)];
                for i in 0..k {
                    rhs[i] += x[(i, l)] * coef;
                }
            }
            let shift = t[(k + j, k + j)];
            for i in (0..k).rev() {
                let mut acc = rhs[i];
                for l in i + 1..k {
                    acc -= t[(i, l)] * x[(l, j)];
                }
                let d = t[(i, i)] - shift;
                x[(i, j)] = if d.norm() > 0.0 { acc / d } else { ZERO };
            }
        }
        let mut core = CMatrix::zeros(n, n);
        for i in 0..k {
            core[(i, i)] = ONE;
        }
        core.set_block(0, k, &x);
        &(&s.q * &core) * &s.q.adjoint()
    }
}

/// `(c, s)` with `[[c, s], [−s̄, c]] (a, b)ᵀ = (ρ, 0)ᵀ`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    let (na, nb) = (a.norm(), b.norm());
    if nb == 0.0 {
        return (1.0, ZERO);
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let rho = na.hypot(nb);
    (na / rho, (a / na) * b.conj() / rho)
}

fn rotate_rows(m: &mut CMatrix, k: usize, c: f64, s: C64, from: usize, to: usize) {
    for j in from..to {
        let (x, y) = (m[(k, j)], m[(k + 1, j)]);
        m[(k, j)] = x * c + s * y;
        m[(k + 1, j)] = -s.conj() * x + y * c;
    }
}

fn rotate_cols(m: &mut CMatrix, k: usize, c: f64, s: C64, from: usize, to: usize) {
    for i in from..to.min(m.rows()) {
        let (x, y) = (m[(i, k)], m[(i, k + 1)]);
        m[(i, k)] = x * c + s.conj() * y;
        m[(i, k + 1)] = -s * x + y * c;
    }
}

/// Complex Schur decomposition: Householder reduction to Hessenberg form,
/// then single-shift QR with Wilkinson shifts and deflation.
pub fn schur(m: &CMatrix) -> Result<Schur> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.rows(), found: m.cols() });
    }
    let n = m.rows();
    let mut h = m.clone();
    let mut q = CMatrix::identity(n);
    hessenberg(&mut h, &mut q);

    let scale = h.fro_norm();
    if scale == 0.0 || n == 1 {
        return Ok(Schur { t: h, q });
    }
    let mut hi = n - 1;
    let mut iter = 0usize;
    let budget = 60 * n;
    let mut total = 0usize;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let diag = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            let reference = if diag > 0.0 { diag } else { scale };
            if sub <= f64::EPSILON * reference {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > budget {
            return Err(Error::NoConvergence { routine: "schur qr" });
        }
        let mu = if iter % 11 == 0 {
            h[(hi, hi)] + C64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson(&h, hi)
        };
        qr_step(&mut h, &mut q, l, hi, mu);
    }
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = ZERO;
        }
    }
    Ok(Schur { t: h, q })
}

fn wilkinson(h: &CMatrix, hi: usize) -> C64 {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let (l1, l2) = (mid + disc, mid - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Explicitly shifted QR sweep on the active window `[l, hi]`.
fn qr_step(h: &mut CMatrix, q: &mut CMatrix, l: usize, hi: usize, mu: C64) {
    let n = h.rows();
    for i in l..=hi {
        h[(i, i)] -= mu;
    }
    let mut rots: Vec<(f64, C64)> = Vec::with_capacity(hi - l);
    for k in l..hi {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        rotate_rows(h, k, c, s, k, n);
        h[(k + 1, k)] = ZERO;
        rots.push((c, s));
    }
    for (idx, k) in (l..hi).enumerate() {
        let (c, s) = rots[idx];
        rotate_cols(h, k, c, s, 0, k + 2);
        rotate_cols(q, k, c, s, 0, n);
    }
    for i in l..=hi {
        h[(i, i)] += mu;
    }
}

fn hessenberg(h: &mut CMatrix, q: &mut CMatrix) {
    let n = h.rows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let Some(v) = householder_vector(&x) else { continue };
        let off = k + 1;
        // rows: H ← (I − 2vv*) H
        for j in 0..n {
            let mut d = ZERO;
            for (t, vi) in v.iter().enumerate() {
                d += vi.conj() * h[(off + t, j)];
            }
            for (t, vi) in v.iter().enumerate() {
                h[(off + t, j)] -= vi * d * 2.0;
            }
        }
        // columns: H ← H (I − 2vv*), Q ← Q (I − 2vv*)
        for mat in [&mut *h, &mut *q] {
            for i in 0..n {
                let mut d = ZERO;
                for (t, vi) in v.iter().enumerate() {
                    d += mat[(i, off + t)] * vi;
                }
                for (t, vi) in v.iter().enumerate() {
                    mat[(i, off + t)] -= d * vi.conj() * 2.0;
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
}

/// Riesz projector of `m` for the eigenvalues accepted by `select`.
pub fn spectral_projector(m: &CMatrix, select: impl Fn(C64) -> bool) -> Result<CMatrix> {
    let s = schur(m)?;
    let idx: Vec<usize> = s.eigenvalues().iter().enumerate().filter(|(_, &l)| select(l)).map(|(i, _)| i).collect();
    Ok(s.projector(&idx))
}
