use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot specialize q to 0: the twist must stay injective")]
    ZeroSpecialization,

    #[error("the twist parameter q must be nonzero")]
    ZeroTwist,

    #[error("modulus {0} is not stable under sigma (g does not divide sigma(g))")]
    NotSigmaStable(String),

    #[error("modulus {0} must be monic in x of degree at least 1")]
    NotMonic(String),

    #[error("sigma({0}) is not a unit in the localization")]
    SigmaNotUnit(String),

    #[error("localization at {0} needs non-monomial denominators, which are not supported")]
    UnsupportedDenominator(String),

    #[error("{0} is not a unit")]
    NotAUnit(String),

    #[error("{0} does not live in this carrier")]
    NotInCarrier(String),

    #[error("{operation} requires {requirement}")]
    Precondition {
        operation: &'static str,
        requirement: &'static str,
    },

    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Syntax error with a 1-based character position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub position: usize,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at position {}: expected ", self.position)?;
        match self.expected.as_slice() {
            [] => write!(f, "nothing"),
            [one] => write!(f, "{one}"),
            many => write!(f, "one of {}", many.join(", ")),
        }
    }
}
