//! The assembled coefficient set for an approximant of order p.

use num_complex::Complex64;
use numerics::{ChebFun, ChebOptions};
use serde::{Deserialize, Serialize};
use transition_map::TransitionFrame;

use crate::blocks::blocks_at;
use crate::transport::{ab_next, window_breaks, PartialCoeffs};
use crate::{CoeffError, P_MAX};

pub const SET_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy)]
pub struct SetOptions {
    /// Relative accuracy of the stored Chebyshev functions.
    pub tol: f64,
}

impl Default for SetOptions {
    fn default() -> Self {
        Self { tol: 1e-11 }
    }
}

/// The s ≤ 1 blocks on the window. H and L are stored divided by ζ so that
/// they stay real for t < 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockFuns {
    pub g0: ChebFun,
    pub g1: ChebFun,
    pub h0_hat: ChebFun,
    pub h1_hat: ChebFun,
    pub k0: ChebFun,
    pub k1: ChebFun,
    pub l0_hat: ChebFun,
    pub l1_hat: ChebFun,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSet {
    pub version: u32,
    pub order_p: usize,
    pub window: (f64, f64),
    /// `Ã_s = ΛA_s`, s = 0..=p.
    pub tilde_a: Vec<ChebFun>,
    /// `B̂_s = ζΛB_s = ζB̃_s`, s = 0..=p. `B̃_s` itself has a `1/ζ` pole.
    pub b_hat: Vec<ChebFun>,
    pub blocks: BlockFuns,
}

impl CoefficientSet {
    fn check(&self, s: usize) -> Result<(), CoeffError> {
        if s > self.order_p {
            return Err(CoeffError::OrderUnavailable {
                requested: s,
                max: self.order_p,
            });
        }
        Ok(())
    }

    pub fn a_tilde(&self, s: usize, t: f64) -> Result<f64, CoeffError> {
        self.check(s)?;
        Ok(self.tilde_a[s].eval(t))
    }

    pub fn b_hat(&self, s: usize, t: f64) -> Result<f64, CoeffError> {
        self.check(s)?;
        Ok(self.b_hat[s].eval(t))
    }

    /// `B̃_s = B̂_s/ζ`; infinite at t = 0 unless `B̂_s(0) = 0`.
    pub fn b_tilde(&self, frame: &TransitionFrame, s: usize, t: f64) -> Result<Complex64, CoeffError> {
        let z = frame.zeta(t)?;
        Ok(Complex64::new(self.b_hat(s, t)?, 0.0) / z)
    }

    /// `(Σ_{s≤p} Ã_s/N^s, Σ_{s≤p} B̂_s/N^s)` for `p ≤ order_p`.
    pub fn sums(&self, p: usize, t: f64, big_n: f64) -> Result<(f64, f64), CoeffError> {
        self.check(p)?;
        let mut a = 0.0;
        let mut b = 0.0;
        let mut w = 1.0;
        for s in 0..=p {
            a += w * self.tilde_a[s].eval(t);
            b += w * self.b_hat[s].eval(t);
            w /= big_n;
        }
        Ok((a, b))
    }

    pub fn to_json(&self) -> Result<String, CoeffError> {
        serde_json::to_string(self).map_err(|e| CoeffError::Numerical(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self, CoeffError> {
        let s: Self = serde_json::from_str(text).map_err(|e| CoeffError::Numerical(e.to_string()))?;
        if s.version != SET_VERSION {
            return Err(CoeffError::Numerical(format!("unsupported coefficient set version {}", s.version)));
        }
        Ok(s)
    }
}

fn block_funs(frame: &TransitionFrame, tol: f64) -> Result<BlockFuns, CoeffError> {
    let breaks = window_breaks(frame);
    let opts = ChebOptions {
        tol,
        ..ChebOptions::default()
    };
    let build = |pick: fn(&crate::BlockSeries) -> f64| -> Result<ChebFun, CoeffError> {
        ChebFun::try_build(|t| blocks_at(frame, t, 1).map(|b| pick(&b)), &breaks, opts).map_err(|e| match e {
            numerics::ChebBuildError::Function(inner) => inner,
            other => CoeffError::Numerical(other.to_string()),
        })
    };
    Ok(BlockFuns {
        g0: build(|b| b.g[0])?,
        g1: build(|b| b.g[1])?,
        h0_hat: build(|b| b.h_hat[0])?,
        h1_hat: build(|b| b.h_hat[1])?,
        k0: build(|b| b.k[0])?,
        k1: build(|b| b.k[1])?,
        l0_hat: build(|b| b.l_hat[0])?,
        l1_hat: build(|b| b.l_hat[1])?,
    })
}

pub fn build_coefficient_set(frame: &TransitionFrame, p: usize) -> Result<CoefficientSet, CoeffError> {
    build_coefficient_set_with(frame, p, SetOptions::default())
}

/// Builds `Ã_s`, `B̂_s` for `s ≤ p` by successive transport solves, starting
/// from `Ã₀ = 1`, `B̂₀ = 0`.
pub fn build_coefficient_set_with(
    frame: &TransitionFrame,
    p: usize,
    opts: SetOptions,
) -> Result<CoefficientSet, CoeffError> {
    if p > P_MAX {
        return Err(CoeffError::OrderUnavailable { requested: p, max: P_MAX });
    }
    let mut known = PartialCoeffs::leading(frame);
    for step in 2..=p + 1 {
        let (a, b) = ab_next(frame, &known, step, opts.tol)?;
        known.tilde_a.push(a);
        known.b_hat.push(b);
    }
    Ok(CoefficientSet {
        version: SET_VERSION,
        order_p: p,
        window: frame.window(),
        tilde_a: known.tilde_a,
        b_hat: known.b_hat,
        blocks: block_funs(frame, opts.tol)?,
    })
}
