use thiserror::Error;

use crate::certificate::Stage;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong while evaluating metrics, sequences,
/// certificates or the fixed-point solver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("metric `{metric}` produced a malformed distance {value}")]
    MalformedDistance { metric: String, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("prefix too short: need at least {needed} points, have {len}")]
    PrefixTooShort { needed: usize, len: usize },

    #[error("index {index} out of range for a prefix of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("empty sample")]
    EmptySample,

    #[error("relaxed triangle inequality fails for every s: rho(x,z) = {rho_xz} with rho(x,y) + rho(y,z) = 0")]
    UnconditionalTriangleViolation { rho_xz: f64 },

    #[error("every sampled pair is degenerate (rho(x,y) <= eta)")]
    DegenerateSample,

    #[error("contraction `{name}` violated: observed ratio {ratio} exceeds declared c = {declared}")]
    ContractionViolated { name: String, ratio: f64, declared: f64 },

    #[error("no p with c^p < lambda/s: {0}")]
    Unsatisfiable(String),

    #[error("precondition {stage} failed: {detail}")]
    Precondition { stage: Stage, detail: String },

    #[error("certificate stage {stage} rejected at {detail}")]
    CertificateViolation { stage: Stage, detail: String },

    /// The proof replay and direct evaluation disagree. Always a bug or a
    /// metric whose declared `s` is wrong, never a property of the sequence.
    #[error("divergence in stage {stage}: {detail}")]
    Divergence { stage: Stage, detail: String },

    #[error("iteration cap of {iterations} reached without a certificate")]
    IterationCap { iterations: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("csv line {line}: {message}")]
    Csv { line: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_divergence(&self) -> bool {
        matches!(self, Error::Divergence { .. })
    }

    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_) | Error::Csv { .. } | Error::Json(_))
    }
}
