use alloc::vec::Vec;

#[allow(unused_imports)] // float methods come from std when it is linked
use num_traits::Float;

use super::spectral::{p_max, pf_right, spectrum};
use crate::channels::{embed_classical, Channel, ClassicalMatrix};
use crate::numerics::{herm_eig, CMatrix, Tolerances};
use crate::{Error, Result};

/// Collatz-Wielandt bracket `(min_i (Az)_i / z_i, max_i (Az)_i / z_i)`.
pub fn cw_bounds(a: &ClassicalMatrix, z: &[f64]) -> Result<(f64, f64)> {
    if let Some((row, col)) = a.negative_entry() {
        return Err(Error::NegativeEntry { row, col });
    }
    if z.len() != a.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), found: z.len() });
    }
    if let Some(index) = z.iter().position(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(Error::NonPositiveTestVector { index });
    }
    let az = a.mul_vec(z);
    let ratios = az.iter().zip(z).map(|(p, q)| p / q);
    let lo = ratios.clone().fold(f64::INFINITY, f64::min);
    let hi = ratios.fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}

/// Spectral radius and unit-norm Perron-Frobenius vector of a nonnegative
/// matrix, computed through its diagonal channel embedding.
pub fn classical_pf(a: &ClassicalMatrix, tol: &Tolerances) -> Result<(f64, Vec<f64>)> {
    let ch = embed_classical(a)?;
    let sp = spectrum(&ch, tol)?;
    if sp.r == 0.0 {
        return Err(Error::ZeroSpectralRadius);
    }
    let y = pf_right(&ch, tol)?;
    let v: Vec<f64> = (0..a.n()).map(|i| y[(i, i)].re.max(0.0)).collect();
    let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok((sp.r, v.iter().map(|x| x / nv).collect()))
}

/// Which hypotheses of the three Collatz-Wielandt clauses a test element
/// satisfies, and whether the matching conclusions hold.
#[derive(Debug, Clone, PartialEq)]
pub struct CwCertificate {
    pub r: f64,
    /// Clause numbers (1, 2, 3) whose hypotheses hold.
    pub clauses: Vec<u8>,
    /// `‖Φ*(z) − r z‖ / (r ‖z‖)`.
    pub conclusion_residual: f64,
    /// Rayleigh quotient `⟨z, Φ*(z)⟩ / ⟨z, z⟩` when `z` is an eigenvector.
    pub r_tilde: Option<f64>,
    pub support_in_p_max: bool,
    /// Every fired clause reached its conclusion.
    pub conclusions_hold: bool,
}

impl CwCertificate {
    pub fn describe(&self) -> &'static str {
        if self.clauses.is_empty() {
            "no clause applies"
        } else if self.conclusions_hold {
            "conclusion verified"
        } else {
            "conclusion violated"
        }
    }
}

/// Test `z` against the Collatz-Wielandt clauses, with the right action
/// realised as the adjoint map `z ↦ Σ F_j* z F_j`.
pub fn cw_certify(ch: &Channel, z: &CMatrix, tol: &Tolerances) -> Result<CwCertificate> {
    let n = ch.dim();
    if z.rows() != n || z.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: z.rows() });
    }
    let ez = herm_eig(z, tol)?;
    if ez.min() < -tol.psd_floor * ez.max().abs() {
        return Err(Error::NotPsd { min_eigenvalue: ez.min() });
    }
    if ez.max() <= 0.0 {
        return Err(Error::InvalidMatrix("test element must be nonzero"));
    }
    let z = z.hermitian_part();
    let r = spectrum(ch, tol)?.r;
    if r == 0.0 {
        return Err(Error::ZeroSpectralRadius);
    }
    let pm = p_max(ch, tol)?;
    let comp = &CMatrix::identity(n) - &pm;
    let zn = z.fro_norm();
    let phi = ch.adjoint().apply_unchecked(&z).hermitian_part();
    let diff = &z.scale_re(r) - &phi;
    let slack = 10.0 * tol.residual * r * zn;

    let min_eig = |m: &CMatrix| crate::numerics::eig::herm_eig_sym(m).map(|e| e.min()).unwrap_or(f64::NEG_INFINITY);
    let inside = |m: &CMatrix| (&comp * m).fro_norm() <= 100.0 * tol.residual * m.fro_norm().max(f64::MIN_POSITIVE);

    let support_in_p_max = inside(&z);
    let mut clauses = Vec::new();
    if min_eig(&diff) >= -slack && support_in_p_max {
        clauses.push(1);
    }
    if min_eig(&diff.scale_re(-1.0)) >= -slack && inside(&phi) {
        clauses.push(2);
    }
    let rq = z.inner(&phi).re / z.inner(&z).re;
    let eig_resid = (&phi - &z.scale_re(rq)).fro_norm();
    let r_tilde = if eig_resid <= 10.0 * tol.residual * rq.abs().max(r) * zn { Some(rq) } else { None };
    if r_tilde.is_some() && support_in_p_max {
        clauses.push(3);
    }
    let conclusion_residual = diff.fro_norm() / (r * zn);
    let limit = 1e3 * tol.residual;
    let conclusions_hold = clauses.iter().all(|&c| match c {
        3 => (rq - r).abs() <= limit * r,
        _ => conclusion_residual <= limit,
    });
    Ok(CwCertificate { r, clauses, conclusion_residual, r_tilde, support_in_p_max, conclusions_hold })
}
