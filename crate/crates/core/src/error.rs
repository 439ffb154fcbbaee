use thiserror::Error;

use crate::modulus::ModulusEstimate;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid radii: {0}")]
    InvalidRadii(String),

    #[error("unsupported dimension {0}: only n = 2 and n = 3 are implemented")]
    UnsupportedDimension(usize),

    #[error("non-finite integrand value {value} at {location}")]
    NonFiniteIntegrand { location: String, value: f64 },

    #[error(
        "modulus optimizer stopped after {} sweeps with admissibility violation {:.3e}",
        .0.iterations,
        .0.max_violation
    )]
    NoConvergence(Box<ModulusEstimate>),

    #[error("point {0} lies outside the domain of the mapping")]
    EvaluationDomain(String),

    #[error("eta is not admissible: its integral over the ring is {0}, expected at least 1")]
    NotAdmissible(f64),

    #[error("point lies {distance:.3e} from a singularity of the mapping")]
    NearSingularity { distance: f64 },

    #[error("psi is not integrable on the ring: I(eps, eps0) = {0}")]
    PsiNotIntegrable(f64),

    #[error("parameter out of range: {0}")]
    ParameterRange(String),

    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("expression error: {0}")]
    Expression(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn non_finite(location: impl std::fmt::Display, value: f64) -> Self {
        Error::NonFiniteIntegrand {
            location: location.to_string(),
            value,
        }
    }
}
