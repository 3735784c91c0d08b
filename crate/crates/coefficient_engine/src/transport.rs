//! Sources `f_{p−1}`, `g_{p−1}` and the first-order transport solves that turn
//! them into the next pair of coefficient functions.
//!
//! Everything is carried in Λ-weighted real form: `Ã_r = ΛA_r` and
//! `B̂_r = ζΛB_r`. Derivatives enter only as `t^l D^l`, which are the Taylor
//! coefficients of `X(t(1+ε))` in ε; these stay finite at `t = 0`.

use numerics::{integrate_power_weight, ChebFun, ChebOptions, Jet64, QuadOptions};
use transition_map::{binom, TransitionFrame};

use crate::blocks::blocks_at;
use crate::{gamma_table, CoeffError};

/// Half-width unit of the bridge used for `Λg/ζ` near `t = 0`, relative to t₂.
const BRIDGE: f64 = 2e-3;

/// Coefficient functions known so far: `Ã_0..`, `B̂_0..`.
#[derive(Debug, Clone)]
pub struct PartialCoeffs {
    pub tilde_a: Vec<ChebFun>,
    pub b_hat: Vec<ChebFun>,
}

impl PartialCoeffs {
    pub fn leading(frame: &TransitionFrame) -> Self {
        let (lo, hi) = frame.window();
        Self {
            tilde_a: vec![ChebFun::constant(1.0, lo, hi)],
            b_hat: vec![ChebFun::constant(0.0, lo, hi)],
        }
    }
}

/// ε-jets at t of the ratios `Λ(t)/Λ(t(1+ε))` and `(ζΛ)(t)/(ζΛ)(t(1+ε))`,
/// both real.
struct RatioJets {
    r_lambda: Jet64,
    r_b: Jet64,
    tj: Jet64,
}

fn ratio_jets(frame: &TransitionFrame, t: f64, order: usize) -> Result<RatioJets, CoeffError> {
    let th = frame.theta;
    let tj = Jet64::variable(0.0, order).scale(t);
    let rho = frame.rho_jet(t, order)?.compose(&tj);
    let one = Jet64::variable(1.0, order);
    let lin = one.scale(-t / frame.t2).add_scalar(1.0).scale(frame.alpha0p().abs());
    let s0 = &lin.sqrt() / &rho;
    let s0_rel = s0.scale(1.0 / s0.value()).powf(-0.5);
    let r_lambda = &one.powf(-0.5 / th) * &s0_rel;
    let rho_rel = rho.scale(1.0 / rho.value()).recip();
    let r_b = &(&one.powf(-0.5 - 0.5 / th) * &rho_rel) * &s0_rel;
    Ok(RatioJets { r_lambda, r_b, tj })
}

/// Pointwise transport sources at step p (producing index `p − 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sources {
    /// `Λ f_{p−1}`.
    pub lambda_f: f64,
    /// `Λ g_{p−1}/ζ`.
    pub lambda_g_over_zeta: f64,
}

/// Evaluates the triple sums defining `f_{p−1}` and `g_{p−1}` at t. Needs
/// `Ã_r`, `B̂_r` for `r ≤ p − 2`. Undefined at `t = 0` only through the
/// `1/η` factor of the g part, which cancels analytically.
pub fn fg_terms(frame: &TransitionFrame, known: &PartialCoeffs, p: usize, t: f64) -> Result<Sources, CoeffError> {
    if p < 2 {
        return Ok(Sources {
            lambda_f: 0.0,
            lambda_g_over_zeta: 0.0,
        });
    }
    let ladders = Ladders::new(known, p)?;
    fg_at(frame, &ladders, p, t)
}

/// Derivative ladders of the known coefficient functions, deep enough for
/// step p.
struct Ladders {
    a: Vec<Vec<ChebFun>>,
    b: Vec<Vec<ChebFun>>,
}

impl Ladders {
    fn new(known: &PartialCoeffs, p: usize) -> Result<Self, CoeffError> {
        let have = known.tilde_a.len().min(known.b_hat.len());
        if have + 1 < p {
            return Err(CoeffError::OrderUnavailable {
                requested: p - 1,
                max: have,
            });
        }
        Ok(Self {
            a: known.tilde_a[..p - 1].iter().map(|f| f.derivative_ladder(p)).collect(),
            b: known.b_hat[..p - 1].iter().map(|f| f.derivative_ladder(p)).collect(),
        })
    }
}

fn fg_at(frame: &TransitionFrame, known: &Ladders, p: usize, t: f64) -> Result<Sources, CoeffError> {
    let blocks = blocks_at(frame, t, p)?;
    let jets = ratio_jets(frame, t, p)?;
    let gamma = gamma_table(frame.theta, p);
    let ap = &frame.alpha_prime;
    let bp = &frame.beta_prime;

    // [ΛA_r]_l = t^l Λ D^l A_r / l!,  [ζΛB_r]_l likewise
    let mut la = Vec::with_capacity(p - 1);
    let mut lb = Vec::with_capacity(p - 1);
    for r in 0..=p - 2 {
        let a = ChebFun::jet(&known.a[r], t).compose(&jets.tj);
        let b = ChebFun::jet(&known.b[r], t).compose(&jets.tj);
        la.push(&a * &jets.r_lambda);
        lb.push(&b * &jets.r_b);
    }

    let mut lf = 0.0;
    let mut g_over_eta = 0.0;
    let mut g_reg = 0.0;
    for s in 2..=p {
        let r = p - s;
        let lin = 0.5 * (ap.get(s).copied().unwrap_or(0.0) * t + bp.get(s).copied().unwrap_or(0.0));
        lf += lin * la[r].coeff(0);
        g_over_eta += lin * lb[r].coeff(0);
        for i in 0..=s {
            for m in 0..=s - i {
                let bin = binom(-(r as f64), s - i - m);
                if bin == 0.0 {
                    continue;
                }
                let sa: f64 = (0..=m).map(|l| gamma[l][m] * la[r].coeff(l)).sum();
                let sb: f64 = (0..=m).map(|l| gamma[l][m] * lb[r].coeff(l)).sum();
                if s % 2 == 0 {
                    lf -= bin * blocks.g[i] * sa;
                    g_over_eta -= bin * blocks.k[i] * sb;
                } else {
                    lf -= bin * blocks.l_hat[i] * sb;
                    g_reg -= bin * blocks.h_hat[i] * sa;
                }
            }
        }
    }
    let eta = frame.eta(t)?;
    let lg = if g_over_eta == 0.0 { g_reg } else { g_over_eta / eta + g_reg };
    Ok(Sources {
        lambda_f: lf,
        lambda_g_over_zeta: lg,
    })
}

/// Breakpoints for coefficient functions on the frame window: the origin,
/// plus a geometric grading towards t₂ where the functions steepen.
pub fn window_breaks(frame: &TransitionFrame) -> Vec<f64> {
    let (lo, hi) = frame.window();
    let t2 = frame.t2;
    let mut b = vec![lo];
    if lo < -0.25 * t2 {
        b.push(-0.25 * t2);
    }
    b.extend([0.0, 0.25 * t2, 0.5 * t2]);
    let mut gap = 0.25 * t2;
    while t2 - gap < hi && gap > 2.0 * frame.sigma {
        b.push(t2 - gap);
        gap *= 0.5;
    }
    b.push(hi);
    b
}

fn lagrange(nodes: &[f64], values: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for (i, (&xi, &vi)) in nodes.iter().zip(values).enumerate() {
        let mut w = 1.0;
        for (j, &xj) in nodes.iter().enumerate() {
            if i != j {
                w *= (x - xj) / (xi - xj);
            }
        }
        acc += w * vi;
    }
    acc
}

fn quad_opts() -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-14,
        rel_tol: 1e-12,
        max_intervals: 2000,
    }
}

/// Solves the transport equations at step p:
///
/// `B̂_{p−1}(t) = −ρ(t) ∫₀¹ v^{c−1} Y_f(tv) dv`, `Y_f = Λf/(θρS₀)`, `c = (p−1)/θ − ½`;
/// `Ã_{p−1}(t) = ∫₀¹ v^{e−1} Y_g(tv) dv`, `Y_g = (Λg/ζ)/(θS₀)`, `e = (p−1)/θ`.
///
/// These are the integrals from 0 with the substitution `s = tv`; they
/// converge for `0 < θ < 2` only.
pub fn ab_next(
    frame: &TransitionFrame,
    known: &PartialCoeffs,
    p: usize,
    tol: f64,
) -> Result<(ChebFun, ChebFun), CoeffError> {
    let th = frame.theta;
    if !(th > 0.0 && th < 2.0) {
        return Err(CoeffError::ThetaRange(th));
    }
    let ladders = Ladders::new(known, p)?;
    let breaks = window_breaks(frame);
    let opts = ChebOptions {
        tol,
        abs_floor: 1e-300,
        ..ChebOptions::default()
    };
    let cheb_err = |e: numerics::ChebBuildError<CoeffError>| match e {
        numerics::ChebBuildError::Function(inner) => inner,
        other => CoeffError::Numerical(other.to_string()),
    };

    let y_f = ChebFun::try_build(
        |s| {
            let src = fg_at(frame, &ladders, p, s)?;
            Ok(src.lambda_f / (th * frame.rho(s)? * frame.s0(s)?))
        },
        &breaks,
        opts,
    )
    .map_err(cheb_err)?;

    let y_g_raw = |s: f64| -> Result<f64, CoeffError> {
        let src = fg_at(frame, &ladders, p, s)?;
        Ok(src.lambda_g_over_zeta / (th * frame.s0(s)?))
    };
    let delta = BRIDGE * frame.t2;
    let nodes = [-3.0 * delta, -2.0 * delta, -delta, delta, 2.0 * delta, 3.0 * delta];
    let bridge: Vec<f64> = nodes.iter().map(|&s| y_g_raw(s)).collect::<Result<_, _>>()?;
    let y_g = ChebFun::try_build(
        |s| {
            if s.abs() < delta {
                Ok(lagrange(&nodes, &bridge, s))
            } else {
                y_g_raw(s)
            }
        },
        &breaks,
        opts,
    )
    .map_err(cheb_err)?;

    let c_exp = (p - 1) as f64 / th - 1.5;
    let e_exp = (p - 1) as f64 / th - 1.0;
    let quad_err = |e: numerics::QuadError| CoeffError::Numerical(e.to_string());
    let b_hat = ChebFun::try_build(
        |t| -> Result<f64, CoeffError> {
            let i = integrate_power_weight(|v| y_f.eval(t * v), c_exp, quad_opts()).map_err(quad_err)?;
            Ok(-frame.rho(t)? * i.value)
        },
        &breaks,
        opts,
    )
    .map_err(cheb_err)?;
    let tilde_a = ChebFun::try_build(
        |t| -> Result<f64, CoeffError> {
            Ok(integrate_power_weight(|v| y_g.eval(t * v), e_exp, quad_opts())
                .map_err(quad_err)?
                .value)
        },
        &breaks,
        opts,
    )
    .map_err(cheb_err)?;
    Ok((tilde_a, b_hat))
}
