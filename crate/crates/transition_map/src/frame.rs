//! The transition frame: constants fixed by a canonical system and the ζ
//! function family built on the evaluation window `t_lo ≤ t ≤ t₂ − σ`.
//!
//! Internally ζ is carried as `ρ(t) = ζ(t)/√t`, which is real and analytic
//! across the transition point. For θ < 1 it can vanish again far out on the
//! negative ray; the window stops short of that point. It solves the linear equation
//! `θ t ρ′ = (1 − θ/2) ρ − s D(t)` with `D = arccos(ψ/2)/√t` (continued as
//! `arccosh(ψ/2)/√|t|` for `t < 0`), `ψ = α′₀t + β′₀` and `s = ±1` chosen so
//! that ζ is positive on `(0, t₂)`. Near the origin ρ is its Taylor series;
//! further out it is continued along the equation by quadrature and stored as
//! Chebyshev interpolants.

use num_complex::Complex64;
use numerics::{integrate, ChebFun, ChebOptions, Jet64, QuadOptions};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::system::{canonicalize, order_nu, shift_and_recast, transition_points, CaseTransform, RecurrenceSystem};
use crate::FrameError;

pub const FRAME_VERSION: u32 = 1;
const SERIES_TERMS: usize = 60;
/// Fraction of the distance to a second zero of ζ on the negative ray kept
/// in the default window.
const LEFT_ZERO_MARGIN: f64 = 0.9;

#[derive(Debug, Clone, Copy)]
pub struct FrameOptions {
    /// Exclusion margin below t₂; defaults to `1e-3·t₂`.
    pub sigma: Option<f64>,
    /// Lower end of the window; defaults to `−5·t₂`, pulled in to 0.9 of the
    /// way to a second zero of ζ when one lies closer.
    pub t_lo: Option<f64>,
    pub cheb_tol: f64,
}

impl Default for FrameOptions {
    fn default() -> Self {
        Self {
            sigma: None,
            t_lo: None,
            cheb_tol: 1e-13,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionFrame {
    pub version: u32,
    /// The canonical system the frame was built from.
    pub system: RecurrenceSystem,
    pub transform: CaseTransform,
    pub theta: f64,
    pub tau0: f64,
    pub alpha_prime: Vec<f64>,
    pub beta_prime: Vec<f64>,
    pub t1: f64,
    pub t2: f64,
    pub nu: f64,
    pub sigma: f64,
    pub t_lo: f64,
    sign: f64,
    rho_series: Vec<f64>,
    /// ρ against `u = sqrt(t₂ − t)` for `t₂/4 ≤ t ≤ t₂ − σ`.
    right: ChebFun,
    /// ρ against `ln(−t)` for `t_lo ≤ t ≤ −t₂/4`.
    left: Option<ChebFun>,
}

fn quad_opts() -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-15,
        rel_tol: 1e-14,
        max_intervals: 4000,
    }
}

impl TransitionFrame {
    /// Canonicalises, shifts and recasts `system`, then builds the ζ family.
    pub fn build(system: &RecurrenceSystem, opts: FrameOptions) -> Result<Self, FrameError> {
        let (canon, transform) = canonicalize(system)?;
        let recast = shift_and_recast(&canon)?;
        let theta = canon.theta;
        let a0 = recast.alpha_prime[0];
        let (t1, t2) = transition_points(a0, recast.beta_prime[0]);
        let nu = order_nu(theta, recast.beta_prime[2])?.nu();
        let sigma = opts.sigma.unwrap_or(1e-3 * t2);
        if !(sigma > 0.0 && sigma < 0.75 * t2) {
            return Err(FrameError::BadWindow(format!("sigma = {sigma} must lie in (0, 0.75·t₂)")));
        }
        let t_lo = opts.t_lo.unwrap_or(-5.0 * t2);
        if !(t_lo < 0.0 && t_lo.is_finite()) {
            return Err(FrameError::BadWindow(format!("window lower bound {t_lo} must be negative")));
        }
        let sign = if theta > 2.0 { -1.0 } else { 1.0 };

        // D(t) = (2/√t₂) Σ c_k (t/t₂)^k with c_k = (½)_k² / ((3/2)_k k!)
        let mut rho_series = Vec::with_capacity(SERIES_TERMS);
        let mut ck = 2.0 / t2.sqrt();
        for k in 0..SERIES_TERMS {
            let kf = k as f64;
            let denom = 1.0 - theta / 2.0 - theta * kf;
            if denom.abs() < 1e-9 {
                return Err(FrameError::ResonantTheta { theta, k });
            }
            rho_series.push(sign * ck / denom);
            ck *= (0.5 + kf).powi(2) / ((1.5 + kf) * (kf + 1.0) * t2);
        }

        let mut frame = Self {
            version: FRAME_VERSION,
            system: canon,
            transform,
            theta,
            tau0: recast.tau0,
            alpha_prime: recast.alpha_prime,
            beta_prime: recast.beta_prime,
            t1,
            t2,
            nu,
            sigma,
            t_lo,
            sign,
            rho_series,
            right: ChebFun::constant(0.0, 0.0, 1.0),
            left: None,
        };

        let cheb = ChebOptions {
            tol: opts.cheb_tol,
            min_width: 1e-12,
            ..ChebOptions::default()
        };
        let u_lo = sigma.sqrt();
        let u_hi = (0.75 * t2).sqrt();
        frame.right = ChebFun::try_build(|u| frame.rho_continued(t2 - u * u), &[u_lo, u_hi], cheb)
            .map_err(|e| FrameError::Quadrature(e.to_string()))?;
        let r_star = 0.25 * t2;
        if let Some(tz) = frame.first_left_zero()? {
            // η vanishes again at tz; the frame stops short of it.
            if opts.t_lo.is_some() {
                return Err(FrameError::BadWindow(format!(
                    "zeta vanishes again at t = {tz}; the lower bound {t_lo} must lie in ({tz}, 0)"
                )));
            }
            frame.t_lo = LEFT_ZERO_MARGIN * tz;
        }
        let t_lo = frame.t_lo;
        if -t_lo > r_star {
            let left = ChebFun::try_build(|y| frame.rho_continued(-y.exp()), &[r_star.ln(), (-t_lo).ln()], cheb)
                .map_err(|e| FrameError::Quadrature(e.to_string()))?;
            frame.left = Some(left);
        }
        Ok(frame)
    }

    /// First `t < 0` with `ρ(t) = 0` above the requested lower bound, if any.
    fn first_left_zero(&self) -> Result<Option<f64>, FrameError> {
        let r_star = self.series_radius();
        let value = |t: f64| -> Result<f64, FrameError> {
            if -t <= r_star {
                Ok(self.rho_from_series(t))
            } else {
                self.rho_continued(t)
            }
        };
        const STEPS: usize = 400;
        let mut prev_t = 0.0;
        let mut prev = value(0.0)?;
        for k in 1..=STEPS {
            let t = self.t_lo * k as f64 / STEPS as f64;
            let v = value(t)?;
            if v.signum() != prev.signum() || v == 0.0 {
                let (mut a, mut b) = (t, prev_t);
                for _ in 0..100 {
                    let m = 0.5 * (a + b);
                    if value(m)?.signum() == prev.signum() {
                        b = m;
                    } else {
                        a = m;
                    }
                }
                return Ok(Some(0.5 * (a + b)));
            }
            prev_t = t;
            prev = v;
        }
        Ok(None)
    }

    pub fn to_json(&self) -> Result<String, FrameError> {
        serde_json::to_string_pretty(self).map_err(|e| FrameError::Cache(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self, FrameError> {
        let f: Self = serde_json::from_str(text).map_err(|e| FrameError::Cache(e.to_string()))?;
        if f.version != FRAME_VERSION {
            return Err(FrameError::Cache(format!("unsupported frame version {}", f.version)));
        }
        Ok(f)
    }

    /// `[t_lo, t₂ − σ]`.
    pub fn window(&self) -> (f64, f64) {
        (self.t_lo, self.t2 - self.sigma)
    }

    pub fn alpha0p(&self) -> f64 {
        self.alpha_prime[0]
    }

    /// `ψ(t) = α′₀t + β′₀`.
    pub fn psi(&self, t: f64) -> f64 {
        self.alpha_prime[0] * t + self.beta_prime[0]
    }

    fn check(&self, t: f64) -> Result<(), FrameError> {
        let (lo, hi) = self.window();
        if t.is_nan() || t > hi + 1e-12 * hi.abs() || t < lo * (1.0 + 1e-12) {
            return Err(FrameError::Domain { t, lo, hi });
        }
        Ok(())
    }

    fn series_radius(&self) -> f64 {
        0.25 * self.t2
    }

    /// ρ continued from `±t₂/4` along the linear equation:
    /// `ρ = (r/r*)^e ρ* − (s/θ) r^e ∫_{r*}^{r} D(±φ) φ^{−e−1} dφ`, `e = 1/θ − ½`.
    fn rho_continued(&self, t: f64) -> Result<f64, FrameError> {
        let th = self.theta;
        let e = 1.0 / th - 0.5;
        let r_star = self.series_radius();
        let r = t.abs();
        let rho_star = self.rho_from_series(if t > 0.0 { r_star } else { -r_star });
        let integral = if t > 0.0 {
            // φ = t₂ − w²
            let t2 = self.t2;
            let w_star = (t2 - r_star).sqrt();
            let w = (t2 - r).sqrt();
            let sq = t2.sqrt();
            integrate(
                |w| {
                    let phi = t2 - w * w;
                    let d = (PI - 2.0 * (w / sq).asin()) / phi.sqrt();
                    -2.0 * w * d * phi.powf(-e - 1.0)
                },
                w_star,
                w,
                quad_opts(),
            )
        } else {
            let t2 = self.t2;
            integrate(
                |y| {
                    let phi = y.exp();
                    (1.0 + 2.0 * phi / t2).acosh() / phi.sqrt() * phi.powf(-e)
                },
                r_star.ln(),
                r.ln(),
                quad_opts(),
            )
        }
        .map_err(|e| FrameError::Quadrature(e.to_string()))?;
        Ok((r / r_star).powf(e) * rho_star - self.sign / th * r.powf(e) * integral.value)
    }

    fn rho_from_series(&self, t: f64) -> f64 {
        self.rho_series.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    /// `ρ(t) = ζ(t)/√t`.
    pub fn rho(&self, t: f64) -> Result<f64, FrameError> {
        self.check(t)?;
        Ok(self.rho_unchecked(t))
    }

    fn rho_unchecked(&self, t: f64) -> f64 {
        if t.abs() <= self.series_radius() {
            self.rho_from_series(t)
        } else if t > 0.0 {
            self.right.eval((self.t2 - t).max(0.0).sqrt())
        } else {
            match &self.left {
                Some(l) => l.eval((-t).ln()),
                None => f64::NAN,
            }
        }
    }

    /// Taylor jet of `D` at `t ≠ 0`, in powers of `t − t0`.
    fn d_jet(&self, t0: f64, order: usize) -> Jet64 {
        let t2 = self.t2;
        let x = Jet64::variable(t0, order + 1);
        if t0 > 0.0 {
            // δ′ = (t(t₂ − t))^{−1/2}
            let q = &x * &(-&x).add_scalar(t2);
            let delta = q.powf(-0.5).integral((1.0 - 2.0 * t0 / t2).acos());
            (&delta.truncate(order) * &x.truncate(order).powf(-0.5)).truncate(order)
        } else {
            // d/dt arccosh(1 − 2t/t₂) = −(t(t − t₂))^{−1/2}
            let q = &x * &x.add_scalar(-t2);
            let g = (-q.powf(-0.5)).integral((1.0 - 2.0 * t0 / t2).acosh());
            (&g.truncate(order) * &(-&x.truncate(order)).powf(-0.5)).truncate(order)
        }
    }

    /// Taylor jet of ρ at t, in powers of `t' − t`.
    pub fn rho_jet(&self, t: f64, order: usize) -> Result<Jet64, FrameError> {
        self.check(t)?;
        if t.abs() <= self.series_radius() {
            let n = self.rho_series.len();
            let mut c = vec![0.0; order + 1];
            for (j, cj) in c.iter_mut().enumerate() {
                // Σ_k C(k, j) ρ_k t^{k−j}
                let mut acc = 0.0;
                for k in (j..n).rev() {
                    acc = acc * t + self.rho_series[k] * binom_int(k, j);
                }
                *cj = acc;
            }
            return Ok(Jet64::from_coeffs(c));
        }
        let th = self.theta;
        let d = self.d_jet(t, order);
        let mut c = vec![0.0; order + 1];
        c[0] = self.rho_unchecked(t);
        for k in 0..order {
            let kf = k as f64;
            c[k + 1] = ((1.0 - th / 2.0 - th * kf) * c[k] - self.sign * d.coeff(k)) / (th * t * (kf + 1.0));
        }
        Ok(Jet64::from_coeffs(c))
    }

    /// `η = ζ² = t ρ²`, real and smooth on the window.
    pub fn eta(&self, t: f64) -> Result<f64, FrameError> {
        Ok(t * self.rho(t)?.powi(2))
    }

    pub fn eta_prime(&self, t: f64) -> Result<f64, FrameError> {
        let j = self.rho_jet(t, 1)?;
        Ok(j.coeff(0).powi(2) + 2.0 * t * j.coeff(0) * j.coeff(1))
    }

    /// `|ζ(t)| = sqrt(|t|) ρ(t)`.
    pub fn zeta_abs(&self, t: f64) -> Result<f64, FrameError> {
        Ok(t.abs().sqrt() * self.rho(t)?)
    }

    /// ζ on the principal branch: real for `t ≥ 0`, on the positive imaginary
    /// axis for `t < 0`.
    pub fn zeta(&self, t: f64) -> Result<Complex64, FrameError> {
        let a = self.zeta_abs(t)?;
        Ok(if t >= 0.0 {
            Complex64::new(a, 0.0)
        } else {
            Complex64::new(0.0, a)
        })
    }

    fn sqrt_t(t: f64) -> Complex64 {
        Complex64::new(t, 0.0).sqrt()
    }

    /// ζ′(t). Unbounded at t = 0, where only `η′` is finite.
    pub fn zeta_prime(&self, t: f64) -> Result<Complex64, FrameError> {
        if t == 0.0 {
            return Err(FrameError::Singular("zeta_prime"));
        }
        let j = self.rho_jet(t, 1)?;
        Ok((0.5 * j.coeff(0) + t * j.coeff(1)) / Self::sqrt_t(t))
    }

    pub fn zeta_second(&self, t: f64) -> Result<Complex64, FrameError> {
        if t == 0.0 {
            return Err(FrameError::Singular("zeta_second"));
        }
        let j = self.rho_jet(t, 2)?;
        let v = -0.25 * j.coeff(0) + t * j.coeff(1) + 2.0 * t * t * j.coeff(2);
        Ok(v / (Self::sqrt_t(t) * t))
    }

    /// `arccos(ψ/2)` continued to `t < 0` as `i·arccosh(ψ/2)`.
    pub fn arccos_psi(&self, t: f64) -> Complex64 {
        let h = 0.5 * self.psi(t);
        if h <= 1.0 {
            Complex64::new(h.max(-1.0).acos(), 0.0)
        } else {
            Complex64::new(0.0, h.acosh())
        }
    }

    /// `U(h) = u₊/1` as a jet in `h = 1/N`, where
    /// `u₊ = [(1+h) ζ(t₊)/ζ(t) − 1]/h`, `t₊ = (1+h)^{−θ} t`.
    /// Its coefficients are `u₀, u₁, …`.
    pub fn u_series(&self, t: f64, order: usize) -> Result<Jet64, FrameError> {
        let th = self.theta;
        let n = order + 1;
        let rho = self.rho_jet(t, n)?;
        let one_plus_h = Jet64::variable(1.0, n);
        let shift = one_plus_h.powf(-th).add_scalar(-1.0).scale(t);
        let moved = rho.compose(&shift);
        let ratio = (&one_plus_h.powf(1.0 - th / 2.0) * &moved).scale(1.0 / rho.value());
        Ok(ratio.add_scalar(-1.0).div_by_variable())
    }

    /// `(u₀, u₁)`.
    pub fn u_coeffs(&self, t: f64) -> Result<(f64, f64), FrameError> {
        let u = self.u_series(t, 1)?;
        Ok((u.coeff(0), u.coeff(1)))
    }

    /// `S₀ = −H₀/ζ = sqrt(|α′₀|(1 − t/t₂))/ρ`, real and positive.
    pub fn s0(&self, t: f64) -> Result<f64, FrameError> {
        Ok((self.alpha0p().abs() * (1.0 - t / self.t2)).sqrt() / self.rho(t)?)
    }

    /// `H₀ = −sqrt((4 − ψ²)/4)`: real on `[0, t₂)`, imaginary for `t < 0`.
    pub fn h0(&self, t: f64) -> Result<Complex64, FrameError> {
        Ok(-self.zeta(t)? * self.s0(t)?)
    }

    /// `Λ = t^{1/(2θ)} (−H₀/ζ)^{1/2}` on the principal branch.
    pub fn lambda_weight(&self, t: f64) -> Result<Complex64, FrameError> {
        let s = self.s0(t)?;
        Ok(Complex64::new(t, 0.0).powf(0.5 / self.theta) * s.sqrt())
    }

    /// `(4ζ²/(4 − ψ²))^{1/4} = S₀^{−1/2}`.
    pub fn normalizer(&self, t: f64) -> Result<f64, FrameError> {
        Ok(self.s0(t)?.powf(-0.5))
    }
}

fn binom_int(k: usize, j: usize) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (k - i) as f64 / (i + 1) as f64)
}
