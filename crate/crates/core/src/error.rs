use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),

    #[error("unsupported parameter combination: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("point lies on or too close to the singular set: {0}")]
    Singular(String),

    #[error("finite-difference estimate ill-conditioned (relative disagreement {disagreement:.3e})")]
    IllConditioned { value: f64, disagreement: f64 },

    #[error("quadrature did not converge: best value {value:.17e}, error estimate {err_estimate:.3e}")]
    NotConverged { value: f64, err_estimate: f64 },

    #[error("optimizer refinement stalled: grid value {grid_value:.17e} exceeds refined value {refined_value:.17e}")]
    NonConverged { grid_value: f64, refined_value: f64 },

    #[error("extrapolation fit unstable: residual {residual:.3e} against constant {constant:.6e}")]
    FitUnstable { constant: f64, residual: f64 },

    #[error("test function support violates the singular guard zone: {0}")]
    SupportViolation(String),

    #[error("Picone remainder negative beyond tolerance: {0:.3e}")]
    NegativeR(f64),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("radial truncation failed: tail fraction {tail_fraction:.3e} at radius {radius}")]
    Truncation { radius: f64, tail_fraction: f64 },

    #[error("exponent {exponent} not integrable (must exceed -1): {context}")]
    SingularParams { exponent: f64, context: String },
}

pub type Result<T> = std::result::Result<T, Error>;
