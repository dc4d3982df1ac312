use thiserror::Error;

/// Errors raised by the solver framework.
///
/// Numerical payloads are carried as `f64` regardless of the working scalar.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix entries must be finite")]
    NonFiniteEntry,

    #[error("invalid matrix shape {rows}x{cols}")]
    InvalidShape { rows: usize, cols: usize },

    #[error("singular matrix: pivot {pivot:e} below threshold {threshold:e}")]
    SingularMatrix { pivot: f64, threshold: f64 },

    #[error("hyperbolicity violation: eigenvalue with imaginary part {imag:e} (spectral radius {radius:e})")]
    HyperbolicityViolation { imag: f64, radius: f64 },

    #[error("matrix is not diagonalizable to working precision")]
    NotDiagonalizable,

    #[error("inadmissible state: {0}")]
    Inadmissible(String),

    #[error("fixed-point iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        last_iterate: Vec<f64>,
    },

    #[error("Picard iteration did not converge after {iterations} passes (residual {residual:e})")]
    PicardNonConvergence { iterations: usize, residual: f64 },

    #[error("maximum signal speed {0:e} is zero; cannot choose a time step")]
    ZeroSignalSpeed(f64),

    #[error("run aborted after {0} steps")]
    MaxStepsExceeded(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown system `{0}`")]
    UnknownSystem(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
