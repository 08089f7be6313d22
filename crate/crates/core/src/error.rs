use alloc::string::String;
use core::fmt;

use crate::Method;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A scalar argument lies outside its domain, e.g. a probability not in (0, 1).
    Domain { what: &'static str, value: f64 },
    /// Malformed input: shapes, symmetry, positive semi-definiteness, frequencies.
    Validation(String),
    /// The distribution collapsed to a point mass at `constant`.
    DegenerateForm { constant: f64 },
    /// Some other degeneracy that makes the requested quantity undefined.
    Degenerate(&'static str),
    /// The requested method does not apply to this input.
    NotApplicable {
        reason: &'static str,
        fallback: Option<Method>,
    },
    /// An iterative routine failed to reach its tolerance.
    Numerical { what: &'static str, achieved: f64 },
    /// The sample-size search hit its upper bound.
    Unreachable { max_n: u64, achieved_power: f64 },
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::Validation(_) => "validation",
            Error::DegenerateForm { .. } => "degenerate_form",
            Error::Degenerate(_) => "degenerate",
            Error::NotApplicable { .. } => "not_applicable",
            Error::Numerical { .. } => "numerical",
            Error::Unreachable { .. } => "unreachable",
        }
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "{what} out of domain: {value}"),
            Error::Validation(msg) => write!(f, "invalid input: {msg}"),
            Error::DegenerateForm { constant } => {
                write!(f, "quadratic form is degenerate (constant {constant})")
            }
            Error::Degenerate(what) => write!(f, "degenerate input: {what}"),
            Error::NotApplicable { reason, fallback } => {
                write!(f, "method not applicable: {reason}")?;
                if let Some(m) = fallback {
                    write!(f, " (try {m})")?;
                }
                Ok(())
            }
            Error::Numerical { what, achieved } => {
                write!(f, "{what} did not converge (achieved {achieved:e})")
            }
            Error::Unreachable { max_n, achieved_power } => write!(
                f,
                "target power unreachable below n = {max_n} (power there is {achieved_power})"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
