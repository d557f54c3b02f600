use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("random polygon generation failed: {0}")]
    GenerationFailed(String),

    #[error("mesh refinement failed: {0}")]
    RefinementFailed(String),

    #[error("singular projector matrix on cell {cell} (condition {condition:.3e})")]
    SingularG { cell: usize, condition: f64 },

    #[error("linear solve failed: {0}")]
    SolveFailed(String),

    #[error("exact solution vanishes at every vertex")]
    ZeroNormalizer,

    #[error("negative energy quadratic form: {0:.3e}")]
    NegativeQuadraticForm(f64),

    #[error("invalid convergence samples: {0}")]
    InvalidSamples(String),

    #[error("constant column `{0}`")]
    ConstantColumn(String),

    #[error("missing join key: {0}")]
    MissingJoin(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
