use thiserror::Error;

/// Failures raised anywhere in the cocycle pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is singular, has non-positive determinant or non-finite entries")]
    SingularInput,
    #[error("matrix is not symmetric positive definite")]
    NotSpd,
    #[error("determinant {0} is not positive")]
    NonPositiveDeterminant(f64),
    #[error("determinant {det} deviates from 1 by more than {tol}")]
    NotUnimodular { det: f64, tol: f64 },
    #[error("non-finite matrix entry")]
    NonFinite,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported dimension {0}; only 2 and 3 are supported")]
    UnsupportedDimension(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("generator violates cocycle invariants: {0}")]
    InvalidGenerator(String),
    #[error("sampling too coarse: {0}")]
    SamplingTooCoarse(String),
    #[error("loop endpoints do not match (distance {0:e})")]
    EndpointMismatch(f64),
    #[error("loop is not nullhomotopic ({0}); no natural extension exists")]
    NotNullhomotopic(String),
    #[error("no stereographic projection pole keeps distance {0} from the loop")]
    NoProjectionPoint(f64),
    #[error("traceless correction {0:e} exceeds limit; homotopy derivative is inconsistent")]
    TraceDriftTooLarge(f64),
    #[error("time {t} is not an integer multiple of the step {step}")]
    StepNotDividing { t: f64, step: f64 },
    #[error("zero vector has no Lyapunov exponent")]
    ZeroVector,
    #[error("degenerate spectrum: stretch rates {0:?} are not separated")]
    DegenerateSpectrum(Vec<f64>),
}

pub type Result<T> = std::result::Result<T, Error>;
