use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("stencil half-width p = 1 admits no third-derivative weights: the moment conditions for l = 0, 1, 2 force every weight to zero, contradicting the third-moment target")]
    DispersionNeedsWiderStencil,

    #[error("state outside the admissible set of {model}: {detail}")]
    Domain { model: &'static str, detail: String },

    #[error(
        "WCD condition infeasible: {detail} (tau = {tau}, p = {p}); increase the stencil half-width p or the tolerance tau"
    )]
    InfeasibleTolerance { tau: f64, p: usize, detail: String },

    #[error("non-finite state encountered at step {step} (t = {time})")]
    NonFinite { step: usize, time: f64 },

    #[error("no plateau found: {0}")]
    NoPlateau(String),

    #[error("no heteroclinic connection: {0}")]
    NoConnection(String),

    #[error("shock tracking failed: {0}")]
    Tracking(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
