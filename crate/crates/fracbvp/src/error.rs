//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by evaluation, root finding, quadrature and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// A series did not meet its term bound within the iteration cap.
    /// Signals an argument outside the supported evaluation range.
    #[error("series did not converge for alpha={alpha}, beta={beta}, x={x}")]
    NonConvergence { alpha: f64, beta: f64, x: f64 },

    /// No sign change was detected inside the search window.
    #[error("no root found for alpha={alpha}{} in [{window_lo}, 0)", t0.map(|v| format!(", t0={v}")).unwrap_or_default())]
    RootNotFound {
        alpha: f64,
        t0: Option<f64>,
        window_lo: f64,
    },

    /// Parameters violate a precondition (order outside (1,2], spectral
    /// parameter at or too close to an eigenvalue, ...).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Evaluation point outside the kernel's domain of definition.
    #[error("domain error: {0}")]
    DomainError(String),

    /// Two successive quadrature refinements disagree beyond tolerance.
    #[error("quadrature tolerance not met: estimate {estimate:e} > tol {tol:e}")]
    ToleranceNotMet { estimate: f64, tol: f64 },

    /// Fixed-point iteration hit its iteration cap. Carries the step norms
    /// observed so far and the last iterate.
    #[error("iteration cap {max_iter} reached, last step norm {last_step:e}")]
    MaxIterExceeded {
        max_iter: usize,
        last_step: f64,
        step_norms: Vec<f64>,
        last_iterate: Box<crate::grid::WGridFunction>,
    },

    /// Lower candidate exceeds the upper candidate at a grid point.
    #[error("ordering violated at t={t}: lower {lower} > upper {upper}")]
    OrderViolation { t: f64, lower: f64, upper: f64 },

    /// Grid function and scheme grid are incompatible.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// The near-zero fit of the singular part of a candidate failed.
    #[error("singular part unresolved: fit residual {residual:e} above {threshold:e}")]
    SingularPartUnresolved { residual: f64, threshold: f64 },

    /// Expression source text failed to parse.
    #[error("syntax error at byte {offset}: expected {expected}")]
    SyntaxError { offset: usize, expected: String },

    /// Expression evaluation left the declared domain.
    #[error("evaluation error in `{node}`: {reason}")]
    EvalError { node: String, reason: String },

    /// Requested builtin nonlinearity does not exist.
    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),

    /// A verification oracle could not be applied to the candidate.
    #[error("oracle failure: {0}")]
    OracleFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
