//! Coefficient functions of the uniform Bessel-type expansion: the shift
//! blocks G/H/K/L, the transport sources f/g, and the corrections Ã_s, B̃_s as
//! piecewise Chebyshev functions on the frame window.

pub mod blocks;
pub mod set;
pub mod transport;

pub use blocks::{blocks_at, ghkl_closed_form, BlockSeries, ClosedBlocks, Family};
pub use set::{build_coefficient_set, build_coefficient_set_with, BlockFuns, CoefficientSet, SetOptions};
pub use transport::{ab_next, fg_terms, window_breaks, PartialCoeffs, Sources};

use numerics::Jet64;
use transition_map::FrameError;

/// Highest expansion order that can be built.
pub const P_MAX: usize = 2;

#[derive(Debug, thiserror::Error)]
pub enum CoeffError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("order {requested} unavailable (maximum {max})")]
    OrderUnavailable { requested: usize, max: usize },
    #[error("transport integrals from the origin need 0 < theta < 2, got {0}")]
    ThetaRange(f64),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

/// Coefficient of `N^{−m}` in `((1 + 1/N)^{−θ} − 1)^l`.
pub fn gamma_lm(theta: f64, l: usize, m: usize) -> f64 {
    gamma_table(theta, l.max(m))[l][m]
}

/// `γ[l][m]` for `l, m ≤ order`.
pub(crate) fn gamma_table(theta: f64, order: usize) -> Vec<Vec<f64>> {
    let base = Jet64::variable(1.0, order).powf(-theta).add_scalar(-1.0);
    let mut power = Jet64::constant(1.0, order);
    let mut out = Vec::with_capacity(order + 1);
    for _ in 0..=order {
        out.push(power.c.clone());
        power = &power * &base;
    }
    out
}
