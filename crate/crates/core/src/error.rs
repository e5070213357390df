use thiserror::Error;

/// Errors raised by the numerical and physical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of a function.
    #[error("domain error in {function}: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },

    /// A configuration value violates its invariants.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Adaptive refinement hit its panel budget before meeting the tolerance.
    #[error("quadrature did not converge: estimate {estimate:e} with error {error:e}")]
    Convergence { estimate: f64, error: f64 },

    /// The scattering function crossed zero (a lattice band or bound state).
    #[error("scattering function vanishes at xi={xi:e}, q={q:?}: value {value:e}")]
    Singularity { xi: f64, q: Vec<f64>, value: f64 },

    /// The round-trip kernel left the physical range, so the logarithm is undefined.
    #[error("round-trip kernel outside the physical range at xi={xi:e}, q={q:?}: |h|^2 = {h2:e}")]
    Validity { xi: f64, q: Vec<f64>, h2: f64 },

    /// A scattering matrix could not be factorized.
    #[error("matrix error: {0}")]
    Matrix(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        function,
        detail: detail.into(),
    }
}
