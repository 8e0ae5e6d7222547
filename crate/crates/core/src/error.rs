use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("stencil leaves the chart domain at {point:?} (step {step})")]
    Stencil { point: Vec<f64>, step: f64 },
    #[error("field evaluation failed at {point:?}: {reason}")]
    Eval { point: Vec<f64>, reason: String },
    #[error("metric is singular or not positive definite at {point:?}")]
    SingularMetric { point: Vec<f64> },
    #[error("point {point:?} lies outside the chart domain: {reason}")]
    Domain { point: Vec<f64>, reason: String },
    #[error("lapse vanishes at {point:?}")]
    DegenerateLapse { point: Vec<f64> },
    #[error("map is not an isometry preserving the boundary: {0}")]
    InvalidIsometry(String),
    #[error("gauge field is not tangent to the boundary (normal component {normal})")]
    InvalidGauge { normal: f64 },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("flux extrapolation did not converge: {0}")]
    Convergence(String),
    #[error("precondition violated: {what} (residual {residual:e})")]
    Precondition { what: String, residual: f64 },
    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Input(e.to_string())
    }
}
