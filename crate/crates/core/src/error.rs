use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter or probability vector outside its valid range.
    #[error("domain error: {0}")]
    Domain(String),

    /// A conditional matrix that fails the circular-symmetry test for the given transform.
    #[error("channel is not symmetric under the output transform: P(y={y}|x=0) = {lhs} but P(T^{x}(y)|x={x}) = {rhs}")]
    NotSymmetric {
        x: usize,
        y: usize,
        lhs: f64,
        rhs: f64,
    },

    /// Operation is undefined for this channel model.
    #[error("unsupported channel: {0}")]
    Unsupported(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    /// A bisection saw verdicts that do not flip exactly once over the search interval.
    #[error("non-monotone verdict: {0}")]
    NonMonotone(String),

    #[error("instance too large: {0}")]
    Oversize(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
