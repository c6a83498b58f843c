//! Completely positive maps in Kraus form, their Choi matrices, and the
//! embedding of nonnegative matrices as diagonal-preserving channels.
//!
//! Conventions: the Choi matrix is `Σ E_ij ⊗ Φ(E_ij)`, so block `(i, j)` is
//! `Φ(E_ij)`. Composition applies the right operand first.

use alloc::vec::Vec;

#[allow(unused_imports)] // float methods come from std when it is linked
use num_traits::Float;

use crate::numerics::{herm_eig, CMatrix, Tolerances, C64, ZERO};
use crate::{Error, Result};

/// `D ↦ Σ_j F_j D F_j*` on `n x n` matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    dim: usize,
    kraus: Vec<CMatrix>,
}

impl Channel {
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or(Error::InvalidMatrix("channel needs at least one Kraus operator"))?;
        let dim = first.rows();
        if dim == 0 {
            return Err(Error::InvalidMatrix("Kraus operators must be nonempty"));
        }
        for k in &kraus {
            if !k.is_square() {
                return Err(Error::InvalidMatrix("Kraus operators must be square"));
            }
            if k.rows() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: k.rows() });
            }
            if !k.is_finite() {
                return Err(Error::InvalidMatrix("non-finite entry"));
            }
        }
        Ok(Channel { dim, kraus })
    }

    pub fn identity(n: usize) -> Self {
        Channel { dim: n, kraus: alloc::vec![CMatrix::identity(n)] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn apply(&self, d: &CMatrix) -> Result<CMatrix> {
        if d.rows() != self.dim || d.cols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: d.rows() });
        }
        Ok(self.apply_unchecked(d))
    }

    pub(crate) fn apply_unchecked(&self, d: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for f in &self.kraus {
            out = &out + &(&(f * d) * &f.adjoint());
        }
        out
    }

    /// The Hilbert-Schmidt adjoint `X ↦ Σ F_j* X F_j`.
    pub fn adjoint(&self) -> Channel {
        Channel { dim: self.dim, kraus: self.kraus.iter().map(CMatrix::adjoint).collect() }
    }

    /// `Σ F_j* F_j`.
    pub fn kraus_sum(&self) -> CMatrix {
        let mut s = CMatrix::zeros(self.dim, self.dim);
        for f in &self.kraus {
            s = &s + &(&f.adjoint() * f);
        }
        s.hermitian_part()
    }

    pub fn is_tp(&self, tol: &Tolerances) -> bool {
        (&self.kraus_sum() - &CMatrix::identity(self.dim)).op_norm() <= tol.residual
    }

    /// `Σ F_j* F_j ≤ I` up to `psd_floor`.
    pub fn is_trace_nonincreasing(&self, tol: &Tolerances) -> bool {
        match herm_eig(&self.kraus_sum(), tol) {
            Ok(e) => e.max() <= 1.0 + tol.psd_floor,
            Err(_) => false,
        }
    }

    /// Kraus operators `p F_j p`: the map `D ↦ p Φ(p D p) p`.
    pub fn cut_down(&self, p: &CMatrix) -> Channel {
        Channel { dim: self.dim, kraus: self.kraus.iter().map(|f| &(p * f) * p).collect() }
    }

    /// Conjugate every Kraus operator: `F_j ↦ a F_j b`.
    pub fn sandwich(&self, a: &CMatrix, b: &CMatrix) -> Channel {
        Channel { dim: self.dim, kraus: self.kraus.iter().map(|f| &(a * f) * b).collect() }
    }

    pub fn choi(&self) -> Choi {
        let n = self.dim;
        let mut m = CMatrix::zeros(n * n, n * n);
        for f in &self.kraus {
            let w = f.vec_col();
            for (r, wr) in w.iter().enumerate() {
                if *wr == ZERO {
                    continue;
                }
                for (c, wc) in w.iter().enumerate() {
                    m[(r, c)] += wr * wc.conj();
                }
            }
        }
        Choi { dim: n, matrix: m }
    }
}

/// Composite channel with Kraus set `{F_i G_j}`: `ch2` acts first.
pub fn compose(ch1: &Channel, ch2: &Channel) -> Result<Channel> {
    if ch1.dim != ch2.dim {
        return Err(Error::DimensionMismatch { expected: ch1.dim, found: ch2.dim });
    }
    let mut kraus = Vec::with_capacity(ch1.kraus.len() * ch2.kraus.len());
    for f in &ch1.kraus {
        for g in &ch2.kraus {
            kraus.push(f * g);
        }
    }
    Ok(Channel { dim: ch1.dim, kraus })
}

/// `Φ_a ⊕ Φ_b` on block-diagonal inputs: Kraus set `{F ⊕ 0} ∪ {0 ⊕ G}`.
/// Off-diagonal blocks are sent to zero.
pub fn direct_sum(a: &Channel, b: &Channel) -> Channel {
    let n = a.dim + b.dim;
    let mut kraus = Vec::with_capacity(a.kraus.len() + b.kraus.len());
    for f in &a.kraus {
        let mut m = CMatrix::zeros(n, n);
        m.set_block(0, 0, f);
        kraus.push(m);
    }
    for g in &b.kraus {
        let mut m = CMatrix::zeros(n, n);
        m.set_block(a.dim, a.dim, g);
        kraus.push(m);
    }
    Channel { dim: n, kraus }
}

/// `Φ_a ⊗ Φ_b` with Kraus set `{F_i ⊗ G_j}`.
pub fn tensor(a: &Channel, b: &Channel) -> Channel {
    let kraus = a.kraus.iter().flat_map(|f| b.kraus.iter().map(move |g| f.kron(g))).collect();
    Channel { dim: a.dim * b.dim, kraus }
}

/// Choi matrix `Σ E_ij ⊗ Φ(E_ij)` of an arbitrary linear map on `M_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Choi {
    dim: usize,
    matrix: CMatrix,
}

impl Choi {
    pub fn new(dim: usize, matrix: CMatrix) -> Result<Self> {
        if matrix.rows() != dim * dim || matrix.cols() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: matrix.rows() });
        }
        Ok(Choi { dim, matrix })
    }

    /// Choi matrix of a linear map given by its action on matrix units.
    pub fn from_map(dim: usize, f: impl Fn(&CMatrix) -> CMatrix) -> Self {
        let mut m = CMatrix::zeros(dim * dim, dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set_block(i * dim, j * dim, &f(&CMatrix::unit(dim, i, j)));
            }
        }
        Choi { dim, matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn block(&self, i: usize, j: usize) -> CMatrix {
        self.matrix.block(i * self.dim, j * self.dim, self.dim, self.dim)
    }

    /// Spectral test for complete positivity.
    pub fn is_cp(&self, tol: &Tolerances) -> bool {
        let e = match herm_eig(&self.matrix, tol) {
            Ok(e) => e,
            Err(_) => return false,
        };
        let top = e.values.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        e.min() >= -tol.psd_floor * top
    }

    /// Trace-orthogonal Kraus set from the spectral decomposition.
    pub fn kraus(&self, tol: &Tolerances) -> Result<Channel> {
        let n = self.dim;
        let e = herm_eig(&self.matrix, tol)?;
        let top = e.values.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        if e.min() < -tol.psd_floor * top {
            return Err(Error::NotCp { min_eigenvalue: e.min() });
        }
        let mut kraus = Vec::new();
        for (k, &lam) in e.values.iter().enumerate() {
            if lam <= tol.rank_cut * top || lam <= 0.0 {
                continue;
            }
            let w: Vec<C64> = e.vectors.column(k).iter().map(|z| z * lam.sqrt()).collect();
            kraus.push(CMatrix::from_vec_col(n, n, &w));
        }
        if kraus.is_empty() {
            kraus.push(CMatrix::zeros(n, n));
        }
        Channel::new(kraus)
    }
}

pub fn choi(ch: &Channel) -> Choi {
    ch.choi()
}

pub fn kraus_of_choi(c: &Choi, tol: &Tolerances) -> Result<Channel> {
    c.kraus(tol)
}

/// `Σ_ij D_ij · block(i, j)`.
pub fn map_of_choi(c: &Choi, d: &CMatrix) -> Result<CMatrix> {
    let n = c.dim;
    if d.rows() != n || d.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: d.rows() });
    }
    let mut out = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let dij = d[(i, j)];
            if dij == ZERO {
                continue;
            }
            for a in 0..n {
                for b in 0..n {
                    out[(a, b)] += dij * c.matrix[(i * n + a, j * n + b)];
                }
            }
        }
    }
    Ok(out)
}

/// `Tr₁[(Dᵀ ⊗ I) C]`; agrees with [`map_of_choi`].
pub fn map_by_partial_trace(c: &Choi, d: &CMatrix) -> Result<CMatrix> {
    let n = c.dim;
    if d.rows() != n || d.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: d.rows() });
    }
    let prod = &d.transpose().kron(&CMatrix::identity(n)) * &c.matrix;
    let mut out = CMatrix::zeros(n, n);
    for k in 0..n {
        out = &out + &prod.block(k * n, k * n, n, n);
    }
    Ok(out)
}

/// Choi matrix of `D ↦ Φ₂(Φ₁(D))`, where `Φᵢ` has Choi matrix `Cᵢ`.
pub fn convolve(c1: &Choi, c2: &Choi) -> Result<Choi> {
    if c1.dim != c2.dim {
        return Err(Error::DimensionMismatch { expected: c1.dim, found: c2.dim });
    }
    let n = c1.dim;
    let mut m = CMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let inner = c1.block(i, j);
            m.set_block(i * n, j * n, &map_of_choi(c2, &inner)?);
        }
    }
    Ok(Choi { dim: n, matrix: m })
}

/// Real `n x n` matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl ClassicalMatrix {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::InvalidMatrix("classical matrix must be n x n with n >= 1"));
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry"));
        }
        Ok(ClassicalMatrix { n, entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix("classical matrix must be square"));
        }
        Self::new(n, rows.iter().flatten().copied().collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// First negative entry, if any.
    pub fn negative_entry(&self) -> Option<(usize, usize)> {
        self.entries.iter().position(|&x| x < 0.0).map(|k| (k / self.n, k % self.n))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.negative_entry().is_none()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }

    pub fn to_cmatrix(&self) -> CMatrix {
        CMatrix::from_real(self.n, self.n, &self.entries)
    }
}

/// Kraus set `{√A_ij E_ij}` over the nonzero entries, so that
/// `Φ_A(diag v) = diag(A v)`.
pub fn embed_classical(a: &ClassicalMatrix) -> Result<Channel> {
    if let Some((row, col)) = a.negative_entry() {
        return Err(Error::NegativeEntry { row, col });
    }
    let n = a.n;
    let mut kraus = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let x = a.get(i, j);
            if x > 0.0 {
                kraus.push(CMatrix::unit(n, i, j).scale_re(x.sqrt()));
            }
        }
    }
    if kraus.is_empty() {
        kraus.push(CMatrix::zeros(n, n));
    }
    Channel::new(kraus)
}
