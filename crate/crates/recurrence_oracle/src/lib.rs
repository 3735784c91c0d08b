//! Extended-precision reference values for three-term recurrences
//! `P_{n+1} = (A_n x + B_n) P_n − P_{n−1}`.
//!
//! Dominant solutions come from forward recurrence, recessive ones from
//! Miller's backward recurrence. For the Laguerre-type weights
//! `x^α exp(−q x^m)` the crate also supplies the orthonormal recurrence
//! coefficients, the normalizer `K_n` and the transform to the unit-trailing
//! form, plus a least-squares fit of connection coefficients.
//!
//! All arithmetic is done in `rug::Float` at `ceil(3.33·digits) + 32` bits.

mod config;
mod connection;
mod laguerre;
mod source;
mod trace;

pub use config::{Direction, Initial, OracleConfig, MIN_PRECISION_DIGITS};
pub use connection::{fit_connection, ConnectionFit, ConnectionSample};
pub use laguerre::{
    gamma0, k_normalizer, k_normalizer_with_depth, laguerre_coeffs, laguerre_system,
    LaguerreCoeffs, LaguerreTypeWeight, DEFAULT_K_DEPTH,
};
pub use rug::Float;
pub use source::CoeffSource;
pub use trace::{
    backward_miller, canonical_transform, canonical_value, casoratian, forward_recurrence,
    orthonormal_trace, OracleTrace, Provenance,
};

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("invalid oracle config: {0}")]
    InvalidConfig(String),
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("recurrence coefficients unavailable at n = {n}")]
    CoefficientUnavailable { n: u64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error(
        "backward recurrence did not settle for n = {n_target}: last relative change {change:e}"
    )]
    NonConvergence { n_target: u64, change: f64 },
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error(
        "ill-conditioned connection fit: the two basis columns are nearly parallel (|cos| = {0})"
    )]
    IllConditioned(f64),
    #[error(transparent)]
    Frame(#[from] transition_map::FrameError),
    #[error("csv export: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, OracleError>;
