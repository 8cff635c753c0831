use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (relative residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not symmetric (relative residual {residual:.3e})")]
    Asymmetric { residual: f64 },

    #[error("matrix is singular to working tolerance (pivot magnitude {pivot:.3e})")]
    SingularMatrix { pivot: f64 },

    #[error("matrix is not positive definite (leading minor {index} fails)")]
    NotPositiveDefinite { index: usize },

    #[error("Hilbert space dimension must be at least 2, got {0}")]
    InvalidDimension(usize),

    #[error("not a density matrix: {reason}")]
    NotAState { reason: String },

    #[error("not an orthogonal projector (residual {residual:.3e})")]
    NotAProjector { residual: f64 },

    #[error("generators share no common fixed point (residual {residual:.3e})")]
    NoCommonFixedPoint { residual: f64 },

    #[error("generators share a {dimension}-dimensional family of fixed points")]
    MultipleCommonFixedPoints { dimension: usize },

    #[error("common fixed point is not a density matrix (minimum eigenvalue {min_eigenvalue:.3e})")]
    FixedPointNotAState { min_eigenvalue: f64 },

    #[error("generator leaves the subspace (leakage {leakage:.3e})")]
    NotInvariant { leakage: f64 },

    #[error("vector is not a fixed point of generator {generator} (residual {residual:.3e})")]
    NotAFixedPoint { generator: usize, residual: f64 },

    #[error("convex combination is not Hurwitz: {diagnostic}")]
    NotHurwitz { diagnostic: String },

    #[error("invalid convex weights: {0}")]
    InvalidWeights(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
