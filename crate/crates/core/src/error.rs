use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Floating-point overflow in a recurrence.
    #[error("range error: {0}")]
    Range(String),

    /// Caller violated a documented precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("construction failed: {0}")]
    Construction(String),

    /// Non-finite integrand value at a quadrature node.
    #[error("non-finite integrand value {value} at node {index} (x = {x})")]
    Evaluation { index: usize, x: f64, value: f64 },

    #[error("kernel is singular on the diagonal: |x - s| = {gap:e} at s = {s}, x = {x}")]
    DiagonalSingularity { s: f64, x: f64, gap: f64 },

    #[error("reference quadrature did not reach tolerance {tol:e} (last estimate {estimate}, change {change:e})")]
    Oracle { tol: f64, estimate: f64, change: f64 },

    #[error("assembly failed: {0}")]
    Assembly(String),

    #[error("singular linear system (reciprocal condition estimate {rcond:e})")]
    Singular { rcond: f64 },

    #[error("singular Jacobian at Newton iteration {iteration}")]
    SingularJacobian { iteration: usize },

    #[error("Newton iteration did not converge: {reason}; best residual {best_residual:e}")]
    NonConvergence {
        reason: String,
        best_residual: f64,
        best_iterate: Vec<f64>,
        history: Vec<f64>,
    },

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("config: {0}")]
    Config(String),
}
