//! The G/H/K/L building blocks: coefficients of `1/N` in the shift relations
//! `Z_ν((N+1)ζ(t₊)) = Z_ν(Nζ)·G + Z_{ν+1}(Nζ)·H` and
//! `Z_{ν+1}((N+1)ζ(t₊)) = Z_ν(Nζ)·L + Z_{ν+1}(Nζ)·K`.
//!
//! Each block comes from `w(u) = (1 + u/N)^{1/2} Z_μ((N+u)ζ)`, which solves
//! `w″ = ((μ² − ¼)/(N+u)² − ζ²) w`. Writing its components as
//! `Σ_s X̃_s(u)/N^s`, every `X̃_s` is a power series in u whose coefficients
//! depend on ζ only through `η = ζ²`. The H and L components carry an extra
//! factor ζ, which is divided out (`Ĥ = H/ζ`, `L̂ = L/ζ`) so that all stored
//! values are real on both sides of the transition point.

use num_complex::Complex64;
use numerics::Jet64;
use transition_map::TransitionFrame;

use crate::CoeffError;

/// Terms kept in the u power series. `|ζu|` stays below about π on the
/// oscillatory side and below `arccosh(ψ/2)` on the other.
pub const U_TERMS: usize = 120;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    G,
    HHat,
    K,
    LHat,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::G, Family::HHat, Family::K, Family::LHat];

    /// `(μ, X̃₀(0), X̃₀′(0), X̃₁′(0))`.
    fn shape(self, nu: f64) -> (f64, f64, f64, f64) {
        match self {
            Family::G => (nu, 1.0, 0.0, 0.5 + nu),
            Family::HHat => (nu, 0.0, -1.0, 0.0),
            Family::K => (nu + 1.0, 1.0, 0.0, -(nu + 0.5)),
            Family::LHat => (nu + 1.0, 0.0, 1.0, 0.0),
        }
    }
}

/// `c[s][k]`: coefficient of `u^k` in `X̃_s(u)` at `η`.
pub fn u_power_coeffs(family: Family, nu: f64, eta: f64, s_max: usize, k_max: usize) -> Vec<Vec<f64>> {
    let (mu, a0, b0, b1) = family.shape(nu);
    let c = mu * mu - 0.25;
    let mut g = vec![vec![0.0; k_max]; s_max + 1];
    g[0][0] = a0;
    g[0][1] = b0;
    if s_max >= 1 {
        g[1][1] = b1;
    }
    for s in 0..=s_max {
        for k in 0..k_max - 2 {
            let mut rhs = -eta * g[s][k];
            for j in 2..=s {
                if k + 2 >= j {
                    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                    rhs += c * (j - 1) as f64 * sign * g[s - j][k + 2 - j];
                }
            }
            g[s][k + 2] = rhs / ((k + 2) * (k + 1)) as f64;
        }
    }
    g
}

/// `X̃_s(u)` at a scalar u.
pub fn tilde_eval(family: Family, nu: f64, eta: f64, s: usize, u: f64) -> f64 {
    let g = u_power_coeffs(family, nu, eta, s, U_TERMS);
    g[s].iter().rev().fold(0.0, |acc, &c| acc * u + c)
}

/// Block coefficients `X_s`, `s = 0..=s_max`, for the `+` shift.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSeries {
    pub g: Vec<f64>,
    pub h_hat: Vec<f64>,
    pub k: Vec<f64>,
    pub l_hat: Vec<f64>,
}

impl BlockSeries {
    pub fn family(&self, f: Family) -> &[f64] {
        match f {
            Family::G => &self.g,
            Family::HHat => &self.h_hat,
            Family::K => &self.k,
            Family::LHat => &self.l_hat,
        }
    }
}

/// Expands `(1 + hU)^{−1/2} Σ_s h^s X̃_s(U)` in h, where `U(h)` is the jet of
/// `u₊` in `h = 1/N`.
pub fn blocks_from_u(nu: f64, eta: f64, u: &Jet64, s_max: usize) -> BlockSeries {
    let h = Jet64::variable(0.0, s_max);
    let u = u.truncate(s_max);
    let weight = (&h * &u).add_scalar(1.0).powf(-0.5);
    let mut out = Vec::with_capacity(4);
    for fam in Family::ALL {
        let g = u_power_coeffs(fam, nu, eta, s_max, U_TERMS);
        let mut total = vec![0.0; s_max + 1];
        for (s, gs) in g.iter().enumerate() {
            let mut acc = Jet64::constant(0.0, s_max - s);
            let us = u.truncate(s_max - s);
            for &c in gs.iter().rev() {
                acc = (&acc * &us).add_scalar(c);
            }
            for (k, v) in acc.c.iter().enumerate() {
                total[s + k] += v;
            }
        }
        let x = &weight * &Jet64::from_coeffs(total);
        out.push(x.c);
    }
    let l_hat = out.pop().unwrap_or_default();
    let k = out.pop().unwrap_or_default();
    let h_hat = out.pop().unwrap_or_default();
    let g = out.pop().unwrap_or_default();
    BlockSeries { g, h_hat, k, l_hat }
}

pub fn blocks_at(frame: &TransitionFrame, t: f64, s_max: usize) -> Result<BlockSeries, CoeffError> {
    let eta = frame.eta(t)?;
    let u = frame.u_series(t, s_max)?;
    Ok(blocks_from_u(frame.nu, eta, &u, s_max))
}

/// The s ≤ 1 blocks from their trigonometric closed forms, with H and L
/// restored (not divided by ζ). Complex because ζ is imaginary for t < 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedBlocks {
    pub g0: Complex64,
    pub g1: Complex64,
    pub h0: Complex64,
    pub h1: Complex64,
    pub k0: Complex64,
    pub k1: Complex64,
    pub l0: Complex64,
    pub l1: Complex64,
}

pub fn ghkl_closed_form(frame: &TransitionFrame, t: f64) -> Result<ClosedBlocks, CoeffError> {
    if t == 0.0 {
        return Err(CoeffError::Frame(transition_map::FrameError::Singular("closed-form blocks")));
    }
    let z = frame.zeta(t)?;
    let (u0, u1) = frame.u_coeffs(t)?;
    let nu = frame.nu;
    let (sn, cs) = ((z * u0).sin(), (z * u0).cos());
    Ok(ClosedBlocks {
        g0: cs,
        g1: (0.5 + nu - z * z * u1) / z * sn - 0.5 * u0 * cs,
        h0: -sn,
        h1: -u1 * z * cs + 0.5 * u0 * sn,
        k0: cs,
        k1: -(0.5 + nu + z * z * u1) / z * sn - 0.5 * u0 * cs,
        l0: sn,
        l1: u1 * z * cs - 0.5 * u0 * sn,
    })
}
