use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} did not converge after {iterations} iterations (bracket [{lo}, {hi}])")]
    Convergence {
        what: &'static str,
        iterations: usize,
        lo: f64,
        hi: f64,
    },

    #[error("quadrature stopped after {subdivisions} subdivisions with estimated error {error_estimate:e}")]
    Quadrature {
        subdivisions: usize,
        error_estimate: f64,
    },

    /// The closed-form trajectory has a non-positive radicand.
    #[error("trajectory is singular at t = {t}: radicand {radicand:e}")]
    Singular { t: f64, radicand: f64 },

    #[error("blow-up at t = {reached}: estimated singular time {estimated}")]
    BlowUp { reached: f64, estimated: f64 },

    #[error("extrapolation unstable: successive estimates differ by {difference:e} (tolerance {tolerance:e})")]
    Extrapolation { difference: f64, tolerance: f64 },

    #[error("Bessel order would be complex: nu^2 = {0}")]
    ComplexOrder(f64),

    #[error("finite-difference result unstable under step halving: relative change {0:e}")]
    StepInstability(f64),

    #[error("unknown check id `{0}`")]
    UnknownCheck(String),

    #[error("check selection is empty")]
    EmptySelection,
}

impl Error {
    /// True for failures of a numerical method (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Convergence { .. }
                | Error::Quadrature { .. }
                | Error::BlowUp { .. }
                | Error::Extrapolation { .. }
                | Error::StepInstability(_)
                | Error::Singular { .. }
        )
    }
}
