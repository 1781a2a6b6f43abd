use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {point} lies outside the domain {domain}")]
    Domain { point: f64, domain: String },

    #[error("integrand is not finite at {at}, which is not a declared singular point")]
    UndeclaredSingularity { at: f64 },

    #[error("integrand changes sign near {point}; divergence probing needs a one-signed integrand")]
    OscillatingSign { point: f64 },

    #[error("stencil window around {x} contains a non-finite value")]
    Stencil { x: f64 },

    #[error("dimension N = {0} is outside the model range (N >= 5 required)")]
    ModelDimension(u32),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("pair is not superharmonic: {0}")]
    Classification(String),

    #[error("subdomain [{a}, {b}] is not regular: {reason}")]
    Regularity { a: f64, b: f64, reason: String },

    #[error("points are {distance:e} apart, below the conditioning limit {limit:e}")]
    Conditioning { distance: f64, limit: f64 },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("grid function cannot be evaluated at {at}: {reason}")]
    Grid { at: f64, reason: String },

    #[error("adjoint space unavailable: {0}")]
    AdjointUnavailable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
