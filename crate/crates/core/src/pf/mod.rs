//! Perron-Frobenius analysis of completely positive maps.
//!
//! The superoperator of `Φ(D) = Σ F_j D F_j*` in the column-stacking basis is
//! `S = Σ conj(F_j) ⊗ F_j`. Its spectral radius `r` is an eigenvalue with a
//! PSD eigenvector; the join of the supports of all such eigenvectors is
//! `p_max`, realised by the maximal-support eigenvector `zeta`.

mod cw;
mod irreducible;
mod spectral;

use alloc::vec::Vec;

#[allow(unused_imports)] // float methods come from std when it is linked
use num_traits::Float;

pub use cw::{classical_pf, cw_bounds, cw_certify, CwCertificate};
pub use irreducible::{irreducibility_certificates, is_irreducible, IrreducibilityCertificates};
pub use spectral::{
    eigenspace, extreme_support_check, max_support, p_max, pf_left, pf_right, spectral_radius,
    spectrum, support_of, zeta, zeta_cesaro, MaxSupport, Spectrum,
};

pub(crate) use spectral::{eigenspace_of, psd_support};

use crate::channels::Channel;
use crate::numerics::{CMatrix, Tolerances};
use crate::{Error, Result};

/// Matrix of `D ↦ Φ(D)` acting on column-stacked `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    pub dim: usize,
    pub matrix: CMatrix,
}

impl Superoperator {
    pub fn apply(&self, d: &CMatrix) -> CMatrix {
        CMatrix::from_vec_col(self.dim, self.dim, &self.matrix.mul_vec(&d.vec_col()))
    }
}

pub fn superop(ch: &Channel) -> Superoperator {
    let n = ch.dim();
    let mut m = CMatrix::zeros(n * n, n * n);
    for f in ch.kraus() {
        m = &m + &f.conj().kron(f);
    }
    Superoperator { dim: n, matrix: m }
}

/// Relative eigen-equation residual `‖Φ(y) − r y‖ / (r ‖y‖)`.
pub fn eigen_residual(ch: &Channel, y: &CMatrix, r: f64) -> f64 {
    let d = &ch.apply_unchecked(y) - &y.scale_re(r);
    d.fro_norm() / (r * y.fro_norm()).max(f64::MIN_POSITIVE)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PfResiduals {
    pub right: f64,
    pub left: f64,
    pub zeta: f64,
    /// `Φ(ζ)` against `r ζ` for the Cesàro estimate of `ζ`, when it converged.
    pub cesaro_gap: Option<f64>,
}

/// Aggregate Perron-Frobenius data of a channel.
#[derive(Debug, Clone)]
pub struct PFAnalysis {
    pub r: f64,
    pub right_eig: CMatrix,
    pub left_eig: CMatrix,
    pub p_max: CMatrix,
    pub zeta: CMatrix,
    pub eig_space_basis: Vec<CMatrix>,
    pub pole_order: usize,
    pub p_max_rank: usize,
    pub zeta_rank: usize,
    pub residuals: PfResiduals,
}

pub fn analyze(ch: &Channel, tol: &Tolerances) -> Result<PFAnalysis> {
    let ms = max_support(ch, tol)?;
    let r = ms.spectrum.r;
    let n = ch.dim();
    let eig_space_basis = eigenspace_of(&ms.spectrum, n, tol);
    let right_eig = pf_right(ch, tol)?;
    let left_eig = pf_left(ch, tol)?;
    let p_max = ms.support;
    let zeta = zeta(ch, &p_max, tol)?;
    let zeta_support = psd_support(&zeta, tol)?;
    let rank_of = |p: &CMatrix| p.trace().re.round() as usize;
    let left_r = spectrum(&ch.adjoint(), tol)?.r;
    let cesaro_gap = zeta_cesaro(ch, &p_max, tol).ok().map(|c| {
        let scale = zeta.fro_norm().max(f64::MIN_POSITIVE);
        let k = c.inner(&zeta).re / zeta.inner(&zeta).re;
        (&c - &zeta.scale_re(k)).fro_norm() / scale / k.abs().max(f64::MIN_POSITIVE)
    });
    let residuals = PfResiduals {
        right: eigen_residual(ch, &right_eig, r),
        left: eigen_residual(&ch.adjoint(), &left_eig, left_r),
        zeta: eigen_residual(ch, &zeta, r),
        cesaro_gap,
    };
    if zeta_support.dist(&p_max) > 1e-6 * p_max.fro_norm().max(1.0) && rank_of(&zeta_support) != rank_of(&p_max) {
        return Err(Error::NumericalDegeneracy("support of zeta differs from p_max"));
    }
    Ok(PFAnalysis {
        r,
        right_eig,
        left_eig,
        p_max_rank: rank_of(&p_max),
        zeta_rank: rank_of(&zeta_support),
        p_max,
        zeta,
        eig_space_basis,
        pole_order: ms.spectrum.pole_order,
        residuals,
    })
}

#[cfg(test)]
mod tests;
