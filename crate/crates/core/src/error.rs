use crate::numerics::ValueWithError;
use thiserror::Error;

/// Errors produced by evaluators, parsers and the residue engine.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested series diverges, e.g. `(p, x) = (1, 1)`.
    #[error("divergent: {0}")]
    Divergent(String),
    /// The tolerance could not be reached within the term budget.
    #[error("convergence failure: {message} (best estimate {} ± {:.3e})", best.value, best.abs_err)]
    Convergence { message: String, best: ValueWithError },
    /// A Laurent coefficient outside the known window was requested.
    #[error("unknown coefficient of order {order} (window [{min_order}, {trunc_order}])")]
    UnknownCoefficient { order: i64, min_order: i64, trunc_order: i64 },
    /// Two Laurent series with different centers were combined.
    #[error("center mismatch: {0} vs {1}")]
    CenterMismatch(String, String),
    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown identity id: {0}")]
    UnknownIdentity(String),
    #[error("sampler exhausted after {attempts} attempts for {id}")]
    SamplerExhausted { id: String, attempts: usize },
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by bad user input rather than numerics.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Domain(_) | Error::Divergent(_) | Error::Parse(_) | Error::UnknownIdentity(_)
        )
    }
}
