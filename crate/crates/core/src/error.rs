use core::fmt;

/// Errors raised while validating parameters or evaluating bounded quantities.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Fractional order is non-finite or outside `|xi| < 2`.
    InvalidOrder(f64),
    /// A named parameter violates its documented range.
    InvalidParameter {
        /// Parameter name as it appears in configuration.
        name: &'static str,
        /// Offending value.
        value: f64,
    },
    /// The convergence-region denominator is not positive.
    BoundUndefined,
    /// A statistic was requested over an empty sample window.
    EmptyWindow,
    /// A signal that must be finite was not (control input, state).
    NonFinite(&'static str),
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64) -> Self {
        Error::InvalidParameter { name, value }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidOrder(xi) => write!(f, "invalid fractional order {xi}"),
            Error::InvalidParameter { name, value } => {
                write!(f, "invalid value {value} for parameter `{name}`")
            }
            Error::BoundUndefined => {
                f.write_str("convergence bound undefined: nonpositive denominator")
            }
            Error::EmptyWindow => f.write_str("empty sample window"),
            Error::NonFinite(what) => write!(f, "non-finite {what}"),
        }
    }
}

impl core::error::Error for Error {}
