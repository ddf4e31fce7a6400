use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("degenerate spectrum: eigenvalue gap {gap:.3e} <= threshold {threshold:.3e}; angle tests inapplicable")]
    DegenerateSpectrum { gap: f64, threshold: f64 },

    #[error("eigenvalue condition number {condition:.3e} too large; spectrum is numerically defective")]
    IllConditionedSpectrum { condition: f64 },

    #[error("root finder did not converge: {0}")]
    NoConvergence(String),

    #[error("unsupported dimension {0}: no complete trace criterion implemented")]
    UnsupportedDimension(usize),

    #[error("pairwise eigenvector inner product vanishes (|<x_{i},x_{j}>| = {value:.3e}); determinant criterion inapplicable")]
    OrthogonalEigenvectors { i: usize, j: usize, value: f64 },

    #[error("internal identity check failed with residual {0:.3e}")]
    IdentityCheck(f64),

    #[error("vector {index} is isotropic for the indefinite form (|self-product| = {value:.3e})")]
    IsotropicVector { index: usize, value: f64 },

    #[error("signature mismatch: expected {expected} positive columns, produced {found}")]
    SignatureMismatch { expected: usize, found: usize },

    #[error("invalid signature ({k}, {n}): need 1 <= k <= n")]
    InvalidSignature { k: usize, n: usize },

    #[error("conjugating matrix is singular")]
    SingularQ,

    #[error("diagonal entries must be pairwise distinct")]
    RepeatedDiagonal,

    #[error("gave up after {0} attempts")]
    ExhaustedRetries(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("oracle cost guard: n = {0} exceeds the supported maximum of 6")]
    CostGuard(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}
