use thiserror::Error;

/// Errors produced by the analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("origin not a center: {0}")]
    NotACenter(String),

    #[error("assumption violated at x={0}: {1}")]
    AssumptionViolated(f64, String),

    #[error("no period annulus: {0}")]
    NoAnnulus(String),

    #[error("energy {h} outside (0, {hs})")]
    EnergyOutOfRange { h: f64, hs: f64 },

    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),

    #[error("root isolation inconclusive: {0}")]
    IsolationInconclusive(String),

    #[error("resultant undefined: {0}")]
    ResultantUndefined(String),

    #[error("no continuous solution at 0: transform does not vanish there")]
    AbelNotVanishing,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal invariant broken: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
