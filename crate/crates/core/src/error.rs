use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state vector has (numerically) zero norm")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix dimension {0} exceeds the supported maximum of {max}", max = crate::linalg::MAX_DIM)]
    TooLarge(usize),
    #[error("singular value decomposition did not converge")]
    ConvergenceFailure,
    #[error("need at least {needed} samples, got {found}")]
    TooFewSamples { needed: usize, found: usize },
    #[error("time grid is not uniform (sample {index})")]
    NonuniformGrid { index: usize },
    #[error("matrix is not Hermitian (anti-Hermitian part {residual:e} relative)")]
    NotHermitian { residual: f64 },
    #[error("time grids do not match: {0}")]
    GridMismatch(String),
    #[error("integrator step {step} exceeds the Hamiltonian grid spacing {spacing}")]
    StepTooLarge { step: f64, spacing: f64 },
    #[error("state norm exceeded {limit:e} at t = {t}")]
    Overflow { t: f64, limit: f64 },
    #[error("path is not closed in projective space (endpoint angle {angle:e} rad)")]
    NotClosed { angle: f64 },
    #[error("inconsistent parameters: {0}")]
    ParameterInconsistent(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    /// True for failures of the numerics themselves (as opposed to bad input).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::ConvergenceFailure | Error::Overflow { .. } | Error::Invariant(_)
        )
    }

    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
