/// Relative tolerances shared by every numerical decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Width (relative to the spectral radius) within which eigenvalues are
    /// grouped into one cluster.
    pub eig_cluster: f64,
    /// Allowed negative eigenvalue, relative to the norm, in PSD tests.
    pub psd_floor: f64,
    /// Relative residual accepted for operator equations.
    pub residual: f64,
    /// Singular values below `rank_cut * σ_max` count as zero.
    pub rank_cut: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { eig_cluster: 1e-7, psd_floor: 1e-9, residual: 1e-8, rank_cut: 1e-10 }
    }
}

impl Tolerances {
    pub fn is_valid(&self) -> bool {
        [self.eig_cluster, self.psd_floor, self.residual, self.rank_cut]
            .iter()
            .all(|t| t.is_finite() && *t > 0.0)
    }
}
