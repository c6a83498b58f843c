use alloc::vec::Vec;

#[allow(unused_imports)] // float methods come from std when it is linked
use num_traits::Float;
use rand::Rng;

use crate::channels::{convolve, Channel, Choi};
use crate::numerics::{range_projection, schur, vdot, vnorm, CMatrix, Tolerances, C64, ZERO};
use crate::random::{gaussian_c64, haar_vector, rng_from_seed};

/// Burnside test: the unital algebra generated by the Kraus operators is
/// all of `M_n`.
pub fn is_irreducible(ch: &Channel) -> bool {
    generated_algebra_dim(ch.kraus(), ch.dim()) == ch.dim() * ch.dim()
}

/// Dimension of the unital algebra generated by `gens`.
pub(crate) fn generated_algebra_dim(gens: &[CMatrix], n: usize) -> usize {
    let full = n * n;
    let mut basis: Vec<Vec<C64>> = Vec::new();
    let mut frontier: Vec<CMatrix> = Vec::new();
    // `scale` bounds the norm of the exact product, so cancellation noise in
    // products that vanish exactly is measured against it
    let push = |basis: &mut Vec<Vec<C64>>, m: &CMatrix, scale: f64| -> bool {
        let mut w = m.vec_col();
        let nm = vnorm(&w);
        if nm <= 1e-12 * scale {
            return false;
        }
        for _ in 0..2 {
            for b in basis.iter() {
                let d = vdot(b, &w);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= d * bi;
                }
            }
        }
        let nw = vnorm(&w);
        if nw > 1e-9 * scale {
            basis.push(w.iter().map(|z| z / nw).collect());
            true
        } else {
            false
        }
    };
    let id = CMatrix::identity(n);
    push(&mut basis, &id, id.fro_norm());
    frontier.push(id);
    while let Some(m) = frontier.pop() {
        if basis.len() == full {
            break;
        }
        for g in gens {
            let prod = g * &m;
            if push(&mut basis, &prod, g.fro_norm() * m.fro_norm()) {
                frontier.push(prod.scale_re(1.0 / prod.fro_norm()));
            }
        }
    }
    basis.len()
}

/// Verdicts of the sampled irreducibility certificates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrreducibilityCertificates {
    pub burnside: bool,
    /// The join of the Choi ranges of the convolution powers is `I`.
    pub b_join: bool,
    /// `(Id + Φ)^{n²−1}(p)` is positive definite for every tested `p`.
    pub cond7: bool,
    /// Every tested orthogonal pair is connected by some `Φ^k`, `k < n²`.
    pub cond8: bool,
    pub test_projections: usize,
    pub test_pairs: usize,
}

impl IrreducibilityCertificates {
    pub fn concordant(&self) -> bool {
        self.b_join == self.burnside && self.cond7 == self.burnside && self.cond8 == self.burnside
    }
}

pub fn irreducibility_certificates(ch: &Channel, samples: usize, seed: u64, tol: &Tolerances) -> IrreducibilityCertificates {
    let n = ch.dim();
    let mut rng = rng_from_seed(seed);
    let burnside = is_irreducible(ch);
    let b_join = b_join_is_identity(ch, tol);

    let generic = generic_combination(ch, &mut rng);
    let mut forward: Vec<Vec<C64>> = basis_vectors(n);
    let mut backward: Vec<Vec<C64>> = basis_vectors(n);
    for _ in 0..samples {
        forward.push(haar_vector(&mut rng, n));
        backward.push(haar_vector(&mut rng, n));
    }
    forward.extend(eigenvectors(&generic));
    backward.extend(eigenvectors(&generic.adjoint()));

    let steps = (n * n).saturating_sub(1).max(1);
    let mut cond7 = true;
    let mut cond8 = true;
    let mut pairs = 0;
    for v in &forward {
        let start = CMatrix::outer(v);
        if cond7 && !support_growth_reaches_identity(ch, &start, steps, tol) {
            cond7 = false;
        }
        let orbit = support_orbit(ch, &start, steps, tol);
        for w0 in &backward {
            let d = vdot(v, w0);
            let w: Vec<C64> = w0.iter().zip(v).map(|(a, b)| a - b * d).collect();
            let nw = vnorm(&w);
            if nw < 1e-6 {
                continue;
            }
            let w: Vec<C64> = w.iter().map(|z| z / nw).collect();
            pairs += 1;
            let connected = orbit.iter().any(|r| vnorm(&r.mul_vec(&w)) > 1e-6);
            if !connected {
                cond8 = false;
            }
        }
    }
    IrreducibilityCertificates { burnside, b_join, cond7, cond8, test_projections: forward.len(), test_pairs: pairs }
}

fn basis_vectors(n: usize) -> Vec<Vec<C64>> {
    (0..n)
        .map(|i| {
            let mut v = alloc::vec![ZERO; n];
            v[i] = C64::new(1.0, 0.0);
            v
        })
        .collect()
}

fn generic_combination<R: Rng + ?Sized>(ch: &Channel, rng: &mut R) -> CMatrix {
    let n = ch.dim();
    let mut g = CMatrix::zeros(n, n);
    for f in ch.kraus() {
        let scale = f.fro_norm();
        if scale > 0.0 {
            g = &g + &f.scale(gaussian_c64(rng) / scale);
        }
    }
    g
}

/// Unit eigenvectors of a square matrix from its Schur form.
fn eigenvectors(m: &CMatrix) -> Vec<Vec<C64>> {
    let Ok(s) = schur(m) else { return Vec::new() };
    let n = m.rows();
    let t = &s.t;
    let floor = f64::EPSILON * t.fro_norm().max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut y = alloc::vec![ZERO; n];
        y[k] = C64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut acc = ZERO;
            for j in i + 1..=k {
                acc += t[(i, j)] * y[j];
            }
            let mut d = t[(i, i)] - t[(k, k)];
            if d.norm() < floor {
                d = C64::new(floor, 0.0);
            }
            y[i] = -acc / d;
        }
        let v = s.q.mul_vec(&y);
        let nv = vnorm(&v);
        if nv.is_finite() && nv > 0.0 {
            out.push(v.iter().map(|z| z / nv).collect());
        }
    }
    out
}

/// `R(q) ← R(q + Φ(q))`, iterated; the support of `(c₀ Id + Φ)^k(p)` for any
/// `c₀ > 0` is exactly this range.
fn support_growth_reaches_identity(ch: &Channel, start: &CMatrix, steps: usize, tol: &Tolerances) -> bool {
    let n = ch.dim();
    let mut q = range_projection(start, tol);
    let mut rank = q.trace().re.round() as usize;
    for _ in 0..steps {
        if rank == n {
            return true;
        }
        let img = ch.apply_unchecked(&q);
        let scale = img.fro_norm();
        let next = if scale > 0.0 { &q + &img.scale_re(1.0 / scale) } else { q.clone() };
        q = range_projection(&next, tol);
        let new_rank = q.trace().re.round() as usize;
        if new_rank == rank {
            return false;
        }
        rank = new_rank;
    }
    rank == n
}

/// Range projections of `Φ^k(start)` for `k = 1..=steps`.
fn support_orbit(ch: &Channel, start: &CMatrix, steps: usize, tol: &Tolerances) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(steps);
    let mut q = range_projection(start, tol);
    for _ in 0..steps {
        let img = ch.apply_unchecked(&q);
        q = range_projection(&img, tol);
        if q.fro_norm() == 0.0 {
            break;
        }
        if out.iter().any(|r: &CMatrix| r.dist(&q) < 1e-8) {
            // periodic from here on
            break;
        }
        out.push(q.clone());
    }
    out
}

/// `⋁_{k ≤ n²} R(x̂^{*k}) = I`, computed from normalised convolution powers.
fn b_join_is_identity(ch: &Channel, tol: &Tolerances) -> bool {
    let n = ch.dim();
    let c1 = ch.choi();
    let norm1 = c1.matrix().fro_norm();
    if norm1 == 0.0 {
        return false;
    }
    let c1 = Choi::new(n, c1.matrix().scale_re(1.0 / norm1)).expect("shape preserved");
    let mut acc = c1.matrix().clone();
    let mut power = c1.clone();
    for _ in 1..n * n {
        let next = match convolve(&power, &c1) {
            Ok(c) => c,
            Err(_) => return false,
        };
        let s = next.matrix().fro_norm();
        if s == 0.0 {
            break;
        }
        power = Choi::new(n, next.matrix().scale_re(1.0 / s)).expect("shape preserved");
        acc = &acc + power.matrix();
    }
    crate::numerics::rank(&acc, tol) == n * n
}
