use thiserror::Error;

/// Errors produced by the toolkit.
///
/// Variants are split between bad input ([`Error::InvalidInput`],
/// [`Error::DegenerateBody`], [`Error::EmptyBody`]) and numerical failures, so
/// front ends can map them onto distinct exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate body: {0}")]
    DegenerateBody(String),

    #[error("inner parallel body is empty: offset {offset} >= inradius {inradius}")]
    EmptyBody { offset: f64, inradius: f64 },

    #[error("linear program failed: {0}")]
    LinearProgram(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "integrator step size underflow at r = {r:.6e} (h = {h:.3e}); the problem is too stiff"
    )]
    StepUnderflow { r: f64, h: f64 },

    #[error("no eigenvalue bracket found for lambda in [{lo:.3e}, {hi:.3e}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("quadrature did not reach tolerance: estimate {value:.6e}, error {error:.3e}")]
    Quadrature { value: f64, error: f64 },

    #[error("iteration did not converge: {0}")]
    NoConvergence(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("geometry invariant violated: {0}")]
    Geometry(String),
}

impl Error {
    /// True when the error is caused by the caller's input rather than by the numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_)
                | Error::DegenerateBody(_)
                | Error::EmptyBody { .. }
                | Error::Domain(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
