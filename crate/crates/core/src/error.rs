use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the numerical routines.
///
/// Every variant carries a stable machine-readable code (see [`Error::code`])
/// which the command-line front-end surfaces verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what}: {constraint}")]
    Domain {
        what: &'static str,
        constraint: String,
    },

    #[error(
        "quadrature for {what} did not settle: successive refinements differ by {estimate:.3e}"
    )]
    Accuracy { what: &'static str, estimate: f64 },

    #[error("overflow in {what}: {detail}")]
    Overflow { what: &'static str, detail: String },

    #[error("{what} did not converge within {terms} terms")]
    NonConvergence { what: &'static str, terms: usize },

    #[error("{what}: |W| = {value:.3e} is below the floor {floor:.1e}")]
    NearZero {
        what: &'static str,
        value: f64,
        floor: f64,
    },

    #[error("{what}: truncated tail ratio {ratio:.3e} exceeds {tolerance:.1e}")]
    Truncation {
        what: &'static str,
        ratio: f64,
        tolerance: f64,
    },
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::Accuracy { .. } => "accuracy",
            Error::Overflow { .. } => "overflow",
            Error::NonConvergence { .. } => "non_convergence",
            Error::NearZero { .. } => "near_zero",
            Error::Truncation { .. } => "truncation",
        }
    }

    pub(crate) fn domain(what: &'static str, constraint: impl Into<String>) -> Self {
        Error::Domain {
            what,
            constraint: constraint.into(),
        }
    }
}
