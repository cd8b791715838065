use thiserror::Error;

/// Errors raised by the numerical kernel and the uncertainty machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be at least {min}, got {found}")]
    DimensionTooSmall { min: usize, found: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("seed vectors are linearly dependent (residual norm {residual:e})")]
    DegenerateInput { residual: f64 },

    #[error("matrix is not Hermitian (max |M - M^dagger| entry {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    InvalidTrace { trace: f64 },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("operator is not unitary (||U^dagger U - I||_F = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid ensemble weights: {0}")]
    InvalidWeights(String),

    #[error("weak value undefined: |<phi|psi>| = {overlap:e}")]
    WeakValueUndefined { overlap: f64 },

    #[error("post-selection probability vanishes: <phi|rho|phi> = {probability:e}")]
    VanishingProbability { probability: f64 },

    #[error("negative variance radicand {radicand:e} beyond rounding tolerance")]
    NumericalInconsistency { radicand: f64 },

    #[error("residual direction undefined: deviation {deviation:e} is zero")]
    ResidualUndefined { deviation: f64 },

    #[error("A|psi> vanishes, no zero-uncertainty post-selection exists")]
    NoZeroUncertaintyPostselection,

    #[error("C|psi> vanishes, no saturating post-selection exists")]
    NoSaturatingPostselection,

    #[error("uncertainty equality is indeterminate (denominator {denominator:e})")]
    EqualityIndeterminate { denominator: f64 },

    #[error("states are not orthogonal (|<a|b>| = {overlap:e})")]
    NotOrthogonal { overlap: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown objective '{0}'")]
    UnknownObjective(String),
}

pub type Result<T> = std::result::Result<T, Error>;
