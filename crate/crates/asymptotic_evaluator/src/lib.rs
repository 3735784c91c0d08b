//! Evaluation of the solution pair
//!
//! `P_n = N^{1/2} c(t) [J_ν(Nζ) Σ Ã_s/N^s + J_{ν+1}(Nζ) Σ B̃_s/N^s]`,
//! `Q_n = N^{1/2} c(t) [W_ν(Nζ) Σ Ã_s/N^s + W_{ν+1}(Nζ) Σ B̃_s/N^s]`,
//!
//! with `W_ν = Y_ν − iJ_ν`, `x = N^θ t`, `N = n + τ₀` and `c = (4ζ²/(4 − ψ²))^{1/4}`.
//!
//! On `t < 0` the Bessel functions are evaluated on the imaginary axis and the
//! exponential factor `e^{N|ζ|}` is carried separately in
//! [`EvalResult::log_scale`]. There `J_ν(iy)` carries the constant phase
//! `i^ν`, which is removed from P and moved onto Q (`p_value = P·i^{−ν}`,
//! `q_value = Q·i^{ν}`), so products such as the Casoratian are unchanged.

mod approx;
mod eval;

pub use approx::{Approximant, Calibration, CalibrationSample, SAFETY_FACTOR};
pub use eval::{EvalResult, Regime, N_MIN, ORIGIN_ARG};

use bessel_kernel::BesselError;
use coefficient_engine::CoeffError;
use thiserror::Error;
use transition_map::FrameError;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error("bessel evaluation failed: {0}")]
    Bessel(#[from] BesselError),
    #[error("N = n + tau0 = {0} must be positive")]
    NonPositiveN(f64),
    #[error("coefficient set window {coeffs:?} does not match frame window {frame:?}")]
    WindowMismatch { coeffs: (f64, f64), frame: (f64, f64) },
    #[error("no calibration attached; the error budget needs reference values")]
    CalibrationUnavailable,
    #[error("calibration needs at least {needed} samples, got {got}")]
    CalibrationTooSmall { needed: usize, got: usize },
    #[error("{0} is unbounded at t = 0")]
    Singular(&'static str),
}

pub type Result<T> = std::result::Result<T, EvalError>;
