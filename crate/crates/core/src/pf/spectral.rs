use alloc::vec::Vec;

#[allow(unused_imports)] // float methods come from std when it is linked
use num_traits::Float;

use super::{superop, Superoperator};
use crate::channels::Channel;
use crate::numerics::{herm_eig, range_projection, schur, CMatrix, Schur, Tolerances, C64};
use crate::{Error, Result};

/// Peripheral spectral data of a superoperator at its spectral radius.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub superop: Superoperator,
    /// All eigenvalues, in Schur order.
    pub eigenvalues: Vec<C64>,
    pub r: f64,
    /// Indices of the eigenvalues grouped with `r`.
    pub cluster: Vec<usize>,
    /// Riesz projector onto the generalised eigenspace at `r`.
    pub projector: CMatrix,
    /// Order of the pole of the resolvent at `r` (size of the largest
    /// Jordan block).
    pub pole_order: usize,
    schur: Schur,
}

impl Spectrum {
    pub fn schur(&self) -> &Schur {
        &self.schur
    }

    /// Eigenvalues of modulus within `eig_cluster · r` of `r`.
    pub fn peripheral(&self, tol: &Tolerances) -> Vec<C64> {
        self.eigenvalues.iter().copied().filter(|l| (l.norm() - self.r).abs() <= tol.eig_cluster.max(1e-9) * self.r).collect()
    }

    /// `(S − r)^k P`.
    pub fn nilpotent_power(&self, k: usize) -> CMatrix {
        let shifted = self.shifted();
        let mut m = self.projector.clone();
        for _ in 0..k {
            m = &shifted * &m;
        }
        m
    }

    fn shifted(&self) -> CMatrix {
        let n = self.superop.matrix.rows();
        &self.superop.matrix - &CMatrix::identity(n).scale_re(self.r)
    }
}

/// Eigenvalues of `S`, the spectral radius and the generalised eigenspace at
/// the (real, positive) peripheral eigenvalue.
pub fn spectrum(ch: &Channel, tol: &Tolerances) -> Result<Spectrum> {
    let s = superop(ch);
    let sch = schur(&s.matrix)?;
    let eigenvalues = sch.eigenvalues();
    let scale = s.matrix.fro_norm();
    let rmax = eigenvalues.iter().map(|l| l.norm()).fold(0.0, f64::max);
    if scale == 0.0 || rmax <= 1e-12 * scale {
        return Ok(Spectrum {
            superop: s,
            eigenvalues,
            r: 0.0,
            cluster: Vec::new(),
            projector: CMatrix::zeros(1, 1),
            pole_order: 0,
            schur: sch,
        });
    }
    let (cluster, r) = cluster_at_radius(&eigenvalues, rmax, tol);
    let projector = sch.projector(&cluster);
    let mut sp = Spectrum { superop: s, eigenvalues, r, cluster, projector, pole_order: 1, schur: sch };
    sp.pole_order = pole_order(&sp);
    Ok(sp)
}

/// Group eigenvalues around the peripheral point `rmax`. A Jordan block of
/// size `k` splits under rounding into a ring of radius about `ε^{1/k}`, so
/// the admission radius widens with the cluster size.
fn cluster_at_radius(ev: &[C64], rmax: f64, tol: &Tolerances) -> (Vec<usize>, f64) {
    let target = C64::new(rmax, 0.0);
    let mut order: Vec<usize> = (0..ev.len()).collect();
    order.sort_by(|&a, &b| (ev[a] - target).norm().partial_cmp(&(ev[b] - target).norm()).unwrap_or(core::cmp::Ordering::Equal));
    let mut cluster: Vec<usize> = Vec::new();
    for &i in &order {
        if cluster.is_empty() || (ev[i] - target).norm() <= tol.eig_cluster * rmax {
            cluster.push(i);
        }
    }
    loop {
        let centroid: C64 = cluster.iter().map(|&i| ev[i]).sum::<C64>() / cluster.len() as f64;
        let next = order
            .iter()
            .copied()
            .filter(|i| !cluster.contains(i))
            .min_by(|&a, &b| (ev[a] - centroid).norm().partial_cmp(&(ev[b] - centroid).norm()).unwrap_or(core::cmp::Ordering::Equal));
        let Some(next) = next else { break };
        let k = cluster.len() + 1;
        let radius = rmax * tol.eig_cluster.max((64.0 * f64::EPSILON).powf(1.0 / k as f64));
        if (ev[next] - centroid).norm() <= radius {
            cluster.push(next);
        } else {
            break;
        }
    }
    let centroid: C64 = cluster.iter().map(|&i| ev[i]).sum::<C64>() / cluster.len() as f64;
    cluster.sort_unstable();
    (cluster, centroid.re.max(0.0))
}

fn pole_order(sp: &Spectrum) -> usize {
    let shifted = sp.shifted();
    let pn = sp.projector.fro_norm();
    let mut m = sp.projector.clone();
    for k in 1..=sp.cluster.len() {
        m = &shifted * &m;
        if m.fro_norm() <= 1e-6 * sp.r.powi(k as i32) * pn {
            return k;
        }
    }
    sp.cluster.len()
}

pub fn spectral_radius(ch: &Channel, tol: &Tolerances) -> Result<f64> {
    let sp = spectrum(ch, tol)?;
    if ch.is_tp(tol) && (sp.r - 1.0).abs() > tol.residual.max(1e-9) {
        return Err(Error::NumericalDegeneracy("trace-preserving channel with spectral radius away from 1"));
    }
    Ok(sp.r)
}

/// Orthonormal (trace inner product) basis of `ker(Φ − r)`.
pub fn eigenspace(ch: &Channel, tol: &Tolerances) -> Result<Vec<CMatrix>> {
    let sp = spectrum(ch, tol)?;
    Ok(eigenspace_of(&sp, ch.dim(), tol))
}

pub(crate) fn eigenspace_of(sp: &Spectrum, n: usize, tol: &Tolerances) -> Vec<CMatrix> {
    if sp.r == 0.0 {
        return Vec::new();
    }
    let svd = match crate::numerics::svd(&sp.projector) {
        Ok(s) => s,
        Err(_) => return Vec::new(),
    };
    let k = sp.cluster.len();
    let basis = CMatrix::from_fn(n * n, k, |i, j| svd.u[(i, j)]);
    if sp.pole_order <= 1 {
        return (0..k).map(|j| CMatrix::from_vec_col(n, n, &basis.column(j))).collect();
    }
    let image = &sp.shifted() * &basis;
    let coeffs = crate::numerics::decomp::null_space_abs(&image, 10.0 * tol.eig_cluster * sp.r);
    coeffs
        .iter()
        .map(|c| CMatrix::from_vec_col(n, n, &basis.mul_vec(c)))
        .collect()
}

/// Result of the maximal-support search.
#[derive(Debug, Clone)]
pub struct MaxSupport {
    pub spectrum: Spectrum,
    /// PSD eigenvector whose range is the join of all PSD eigenvector ranges.
    pub vector: CMatrix,
    pub support: CMatrix,
}

/// PSD eigenvector at `r` of maximal support.
///
/// With a simple pole the Riesz projector applied to `I` is such a vector.
/// Otherwise the positive leading Laurent coefficients `(S − r)^{k−1} P`
/// are peeled off: every PSD eigenvector is supported in the kernel of
/// `N_k*(I)`, and on the surviving corner the pole becomes simple.
pub fn max_support(ch: &Channel, tol: &Tolerances) -> Result<MaxSupport> {
    let n = ch.dim();
    let sp = spectrum(ch, tol)?;
    if sp.r == 0.0 {
        return Err(Error::ZeroSpectralRadius);
    }
    let mut g = CMatrix::identity(n);
    for k in (2..=sp.pole_order).rev() {
        let nk = sp.nilpotent_power(k - 1);
        let w = CMatrix::from_vec_col(n, n, &nk.adjoint().mul_vec(&CMatrix::identity(n).vec_col())).hermitian_part();
        let q = crate::numerics::range_basis(&g, tol);
        if q.cols() == 0 {
            break;
        }
        let restricted = &(&q.adjoint() * &w) * &q;
        let e = crate::numerics::eig::herm_eig_sym(&restricted)?;
        let top = e.values.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        let keep: Vec<Vec<C64>> = (0..e.values.len())
            .filter(|&j| top == 0.0 || e.values[j].abs() <= 10.0 * tol.eig_cluster * top)
            .map(|j| q.mul_vec(&e.vectors.column(j)))
            .collect();
        g = crate::numerics::decomp::projector_onto(n, &keep);
    }
    let z = CMatrix::from_vec_col(n, n, &sp.projector.mul_vec(&g.vec_col())).hermitian_part();
    if z.fro_norm() <= 1e-12 * g.fro_norm() {
        return Err(Error::ZeroEigenprojection);
    }
    let support = psd_support(&z, tol)?;
    Ok(MaxSupport { spectrum: sp, vector: z, support })
}

/// Range projection of a numerically PSD matrix, discarding eigenvalues at
/// the level of its negative noise.
pub(crate) fn psd_support(z: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let e = crate::numerics::eig::herm_eig_sym(z)?;
    let top = e.max();
    if top <= 0.0 {
        return Err(Error::NumericalDegeneracy("eigenvector has no positive part"));
    }
    if e.min() < -tol.eig_cluster * top {
        return Err(Error::NumericalDegeneracy("eigenvector is not positive-semidefinite"));
    }
    let noise = (-e.min()).max(0.0);
    let cut = (tol.rank_cut * top).max(10.0 * noise);
    let keep: Vec<Vec<C64>> = (0..e.values.len()).filter(|&j| e.values[j] > cut).map(|j| e.vectors.column(j)).collect();
    Ok(crate::numerics::decomp::projector_onto(z.rows(), &keep))
}

/// Join of the ranges of all PSD eigenvectors at `r`.
pub fn p_max(ch: &Channel, tol: &Tolerances) -> Result<CMatrix> {
    Ok(max_support(ch, tol)?.support)
}

/// Maximal-support PSD eigenvector of the cut-down map `D ↦ p Φ(p D p) p`.
///
/// When the cut-down has a simple pole at its spectral radius (always the
/// case for `p = p_max`) this is the Riesz projector applied to `p`.
pub fn zeta(ch: &Channel, p: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    if p.rows() != ch.dim() || p.cols() != ch.dim() {
        return Err(Error::DimensionMismatch { expected: ch.dim(), found: p.rows() });
    }
    let cut = ch.cut_down(p);
    Ok(max_support(&cut, tol)?.vector)
}

/// Cesàro cross-check `lim (1/N) Σ_{k<N} r^{−k} Φ_p^k (p)`, with `N`
/// doubling until successive averages agree to `residual`.
pub fn zeta_cesaro(ch: &Channel, p: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let n = ch.dim();
    let cut = ch.cut_down(p);
    let sp = spectrum(&cut, tol)?;
    if sp.r == 0.0 {
        return Err(Error::ZeroSpectralRadius);
    }
    let t = sp.superop.matrix.scale_re(1.0 / sp.r);
    let mut power = t.clone();
    let mut avg = (&CMatrix::identity(n * n) + &t).scale_re(0.5);
    power = &power * &power;
    let target = p.vec_col();
    // avg_N = P + C/N + o(1/N); 2 avg_2N - avg_N cancels the 1/N term
    let mut last_avg = avg.mul_vec(&target);
    let mut prev: Option<Vec<C64>> = None;
    for _ in 0..40 {
        avg = (&avg + &(&power * &avg)).scale_re(0.5);
        power = &power * &power;
        let cur_avg = avg.mul_vec(&target);
        let cur: Vec<C64> = cur_avg.iter().zip(&last_avg).map(|(a, b)| a * 2.0 - b).collect();
        last_avg = cur_avg;
        if let Some(prev) = prev.as_ref() {
            let diff: f64 = cur.iter().zip(prev).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
            let size: f64 = cur.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if diff <= tol.residual * size.max(f64::MIN_POSITIVE) {
                return Ok(CMatrix::from_vec_col(n, n, &cur).hermitian_part());
            }
        }
        prev = Some(cur);
    }
    Err(Error::NoConvergence { routine: "cesaro average" })
}

/// Trace-one PSD eigenvector at `r`.
pub fn pf_right(ch: &Channel, tol: &Tolerances) -> Result<CMatrix> {
    let sp = spectrum(ch, tol)?;
    if sp.r == 0.0 {
        return Err(Error::ZeroSpectralRadius);
    }
    let basis = eigenspace_of(&sp, ch.dim(), tol);
    if basis.len() == 1 {
        let b = &basis[0];
        let tr = b.trace();
        if tr.norm() > tol.residual * b.fro_norm() {
            let y = b.scale(tr.inv()).hermitian_part();
            if let Ok(e) = herm_eig(&y, tol) {
                if e.min() >= -tol.eig_cluster * e.max() {
                    return Ok(y);
                }
            }
        }
    }
    let z = max_support(ch, tol)?.vector;
    let tr = z.trace().re;
    if tr <= 0.0 {
        return Err(Error::NumericalDegeneracy("no PSD representative of the eigenspace"));
    }
    Ok(z.scale_re(1.0 / tr))
}

/// Trace-one PSD eigenvector of the adjoint `X ↦ Σ F_j* X F_j`.
pub fn pf_left(ch: &Channel, tol: &Tolerances) -> Result<CMatrix> {
    pf_right(&ch.adjoint(), tol)
}

/// Dimension of `{y ∈ ℰ : y = q y q}` for a projection `q` that is the range
/// of some PSD eigenvector.
pub fn extreme_support_check(ch: &Channel, q: &CMatrix, tol: &Tolerances) -> Result<usize> {
    let n = ch.dim();
    if q.rows() != n || q.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: q.rows() });
    }
    let sp = spectrum(ch, tol)?;
    if sp.r == 0.0 {
        return Err(Error::ZeroSpectralRadius);
    }
    let z = match zeta(ch, q, tol) {
        Ok(z) => z,
        Err(Error::ZeroSpectralRadius) | Err(Error::ZeroEigenprojection) => return Err(Error::NotInQ),
        Err(e) => return Err(e),
    };
    let resid = (&ch.apply_unchecked(&z) - &z.scale_re(sp.r)).fro_norm();
    let support = psd_support(&z, tol).map_err(|_| Error::NotInQ)?;
    if resid > 1e3 * tol.residual * sp.r * z.fro_norm() || support.dist(q) > 1e-6 * q.fro_norm().max(1.0) {
        return Err(Error::NotInQ);
    }
    let basis = eigenspace_of(&sp, n, tol);
    if basis.is_empty() {
        return Ok(0);
    }
    let cols: Vec<Vec<C64>> = basis.iter().map(|e| (e - &(&(q * e) * q)).vec_col()).collect();
    let m = CMatrix::from_columns(n * n, &cols);
    Ok(crate::numerics::decomp::null_space_abs(&m, 1e-6).len())
}

/// Range projection helper re-exported for reports.
pub fn support_of(y: &CMatrix, tol: &Tolerances) -> CMatrix {
    psd_support(y, tol).unwrap_or_else(|_| range_projection(y, tol))
}
