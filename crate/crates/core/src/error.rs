use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Ill-formed operator or cone parameters (k, l, n out of range).
    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    /// A spectrum, matrix or field failed a structural invariant.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Dimension mismatch between two objects that must agree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A point lies outside the operator's admissibility cone. Carries the
    /// violated defining inequality and, for grid fields, the offending node.
    #[error("not admissible: {violated} at lambda = {spectrum:?}{}", node.map(|i| format!(" (node {i})")).unwrap_or_default())]
    NotAdmissible {
        violated: String,
        spectrum: Vec<f64>,
        node: Option<usize>,
    },

    /// A requested level is unreachable along the given ray.
    #[error("level unreachable: {0}")]
    LevelUnreachable(String),

    /// Rejection sampling could not produce enough admissible points.
    #[error("sampling failed: wanted {wanted} samples, accepted {accepted} after {draws} draws ({context})")]
    SamplingFailed {
        wanted: usize,
        accepted: usize,
        draws: usize,
        context: String,
    },

    /// Metric tensor is not positive definite.
    #[error("singular or indefinite metric: {0}")]
    SingularMetric(String),

    /// An iteration (Jacobi sweep cap, etc.) failed to converge numerically.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Inner Krylov solve broke down or hit its iteration cap.
    #[error("linear solver failed: residual {residual:.3e} after {iters} iterations")]
    LinearSolve { iters: usize, residual: f64 },

    /// Newton or continuation did not converge; carries the last good state.
    #[error("nonconvergence in {stage}: residual {residual:.3e}{}", last_t.map(|t| format!(", last good t = {t}")).unwrap_or_default())]
    Nonconvergence {
        stage: String,
        residual: f64,
        last_t: Option<f64>,
    },

    /// Caller-supplied parameter violates a stated precondition.
    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// A config or problem file failed to parse.
    #[error("parse error in {path}: {msg}")]
    Parse { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
