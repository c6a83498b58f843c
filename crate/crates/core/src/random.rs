//! Seeded random ensembles: Ginibre matrices, Haar vectors and unitaries,
//! random Kraus channels.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channels::Channel;
use crate::numerics::{inv_sqrt_on_support, orthonormalize, CMatrix, Tolerances, C64};

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

/// Matrix of i.i.d. standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian_c64(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    ginibre(rng, n, n).hermitian_part()
}

/// `G G*` with `G` of shape `n x rank`.
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> CMatrix {
    let g = ginibre(rng, n, rank);
    (&g * &g.adjoint()).hermitian_part()
}

/// Uniformly distributed unit vector.
pub fn haar_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..n).map(|_| gaussian_c64(rng)).collect();
        let nv = crate::numerics::vnorm(&v);
        if nv > 1e-8 {
            return v.into_iter().map(|z| z / nv).collect();
        }
    }
}

/// Haar unitary by Gram-Schmidt on a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    loop {
        let g = ginibre(rng, n, n);
        let cols: Vec<Vec<C64>> = (0..n).map(|j| g.column(j)).collect();
        let q = orthonormalize(&cols, 1e-8);
        if q.len() == n {
            return CMatrix::from_columns(n, &q);
        }
    }
}

/// Completely positive map with `m` Ginibre Kraus operators (not normalised).
pub fn random_cp_map<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> Channel {
    let kraus = (0..m).map(|_| ginibre(rng, n, n)).collect();
    Channel::new(kraus).expect("ginibre kraus operators are valid")
}

/// Trace-preserving channel `F_j = G_j S^{-1/2}` with `S = Σ G_j* G_j`.
pub fn random_channel<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> Channel {
    let raw = random_cp_map(rng, n, m);
    let s = raw.kraus_sum();
    let w = inv_sqrt_on_support(&s, &Tolerances::default()).expect("kraus sum is positive");
    Channel::new(raw.kraus().iter().map(|g| g * &w).collect()).expect("valid kraus")
}

/// Projection onto the span of `k` Haar-random orthonormal vectors.
pub fn random_projection<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> CMatrix {
    let u = random_unitary(rng, n);
    let cols: Vec<Vec<C64>> = (0..k.min(n)).map(|j| u.column(j)).collect();
    crate::numerics::decomp::projector_onto(n, &cols)
}
