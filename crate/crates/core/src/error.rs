use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("point off the model surface (residual {residual:e})")]
    OffSurface { residual: f64 },

    #[error("vector not tangent at sample {index} (normal component {residual:e})")]
    NotTangent { index: usize, residual: f64 },

    #[error("frame not orthonormal (defect {defect:e})")]
    FrameNotOrthonormal { defect: f64 },

    #[error("immersion failure at sample {index}: |dc/dt| = {speed:e}")]
    Immersion { index: usize, speed: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("path is not normal at s-sample {index}: sup |g(c', T)| = {tangential:e}")]
    NotNormal { index: usize, tangential: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("curvature singularity: {0}")]
    Singularity(String),

    #[error("unsupported combination: {0}")]
    Capability(String),

    #[error("curve generation failed at s-sample {index}: {source}")]
    AtSample {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("optimization failure: {0}")]
    Optimization(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of an iterative or integrating routine, as opposed to
    /// bad arguments or bad files.
    pub fn is_numeric(&self) -> bool {
        match self {
            Error::Numeric(_) | Error::Singularity(_) | Error::Optimization(_) => true,
            Error::AtSample { source, .. } => source.is_numeric(),
            _ => false,
        }
    }

    pub fn at_sample(self, index: usize) -> Self {
        Error::AtSample {
            index,
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
