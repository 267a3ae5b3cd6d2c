use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A problem exceeds a hard size cap (block count, pattern size, enumeration size).
    #[error("size error: {0}")]
    Size(String),
    /// A graphon or graph violates its structural invariants.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// Malformed text or JSON input.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        domain(format!("edge probability p = {p} must lie in (0, 1)"))
    }
}
