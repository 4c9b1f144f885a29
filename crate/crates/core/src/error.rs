use thiserror::Error;

/// Errors raised by the numerical engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("bicomplex value is zero or a zero divisor")]
    ZeroDivisorOrZero,

    #[error("finite-difference step too large: Richardson estimate {estimate:e} exceeds {tol:e}")]
    StepTooLarge { estimate: f64, tol: f64 },

    #[error("generating pair is degenerate at ({x}, {y})")]
    DegeneratePair { x: f64, y: f64 },

    #[error("quadrature did not converge within {nodes} nodes")]
    QuadratureNotConverged { nodes: usize },

    #[error("Vekua coefficient b is zero or a zero divisor at ({x}, {y})")]
    ZeroDivisorCoefficient { x: f64, y: f64 },

    #[error("particular solution f0 vanishes near x = {x}")]
    SolutionVanishes { x: f64 },

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
