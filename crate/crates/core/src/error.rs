use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The potential violates a structural hypothesis the operation relies on.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// A derivative the operation needs was not supplied with the potential.
    #[error("potential does not supply V{0}")]
    MissingDerivative(&'static str),

    /// The requested route does not apply for these parameters.
    #[error("unsupported route: {0}")]
    UnsupportedRoute(String),

    /// Quadrature did not reach the requested tolerance within its refinement budget.
    #[error("quadrature did not converge: estimate {achieved:.3e} > requested {requested:.3e}")]
    Quadrature { achieved: f64, requested: f64 },

    /// Root refinement failed to bracket or to converge.
    #[error("root finding failed: {0}")]
    Root(String),

    /// The ODE integration lost accuracy (step underflow or energy drift over budget).
    #[error("integration quality: {0}")]
    Integration(String),

    /// A least-squares fit had degenerate data.
    #[error("fit failed: {0}")]
    Fit(String),

    /// No return to the Poincaré section within the time budget.
    #[error("no return to the section before t = {elapsed:.6e}")]
    NonPeriodic { elapsed: f64 },
}

impl Error {
    /// True for failures of a numerical method, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Quadrature { .. } | Error::Root(_) | Error::Integration(_) | Error::NonPeriodic { .. } | Error::Fit(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
