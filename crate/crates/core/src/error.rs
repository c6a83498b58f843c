use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A matrix expected to be Hermitian failed the symmetry check.
    NotHermitian { deviation: f64 },
    /// A matrix expected to be positive-semidefinite has a negative eigenvalue.
    NotPsd { min_eigenvalue: f64 },
    /// An iterative routine ran out of its sweep budget.
    NoConvergence { routine: &'static str },
    DimensionMismatch { expected: usize, found: usize },
    /// Matrix data that cannot form a valid [`crate::CMatrix`].
    InvalidMatrix(&'static str),
    /// Choi matrix with a negative eigenvalue where a CP map was required.
    NotCp { min_eigenvalue: f64 },
    NegativeEntry { row: usize, col: usize },
    NonPositiveTestVector { index: usize },
    /// The spectral radius vanishes, so there is no Perron-Frobenius data.
    ZeroSpectralRadius,
    /// The spectral projector at `r` annihilated the input projection.
    ZeroEigenprojection,
    /// No positive-semidefinite representative could be extracted.
    NumericalDegeneracy(&'static str),
    /// The projection is not the range of any positive eigenvector.
    NotInQ,
    NotStarClosed,
    ZeroCode,
    NoUsableBlock,
    ZeroZeta,
}

impl Error {
    /// Numerical failures as opposed to invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::ZeroSpectralRadius
                | Error::ZeroEigenprojection
                | Error::NumericalDegeneracy(_)
                | Error::NoUsableBlock
                | Error::ZeroZeta
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotHermitian { deviation } => {
                write!(f, "matrix is not Hermitian (relative deviation {deviation:e})")
            }
            Error::NotPsd { min_eigenvalue } => {
                write!(f, "matrix is not positive-semidefinite (min eigenvalue {min_eigenvalue:e})")
            }
            Error::NoConvergence { routine } => write!(f, "{routine} did not converge"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidMatrix(why) => write!(f, "invalid matrix: {why}"),
            Error::NotCp { min_eigenvalue } => {
                write!(f, "map is not completely positive (Choi eigenvalue {min_eigenvalue:e})")
            }
            Error::NegativeEntry { row, col } => {
                write!(f, "negative entry at ({row}, {col}) of a matrix required to be nonnegative")
            }
            Error::NonPositiveTestVector { index } => {
                write!(f, "test vector entry {index} is not strictly positive")
            }
            Error::ZeroSpectralRadius => write!(f, "PF analysis undefined at r=0"),
            Error::ZeroEigenprojection => {
                write!(f, "spectral projector at r annihilated the projection")
            }
            Error::NumericalDegeneracy(what) => write!(f, "numerical degeneracy: {what}"),
            Error::NotInQ => {
                write!(f, "projection is not the range of a positive PF eigenvector")
            }
            Error::NotStarClosed => write!(f, "algebra is not closed under the adjoint"),
            Error::ZeroCode => write!(f, "code projection is zero"),
            Error::NoUsableBlock => {
                write!(f, "zeta_p annihilates every matrix block of the interaction algebra")
            }
            Error::ZeroZeta => write!(f, "maximal-support eigenvector is zero"),
        }
    }
}

impl core::error::Error for Error {}
