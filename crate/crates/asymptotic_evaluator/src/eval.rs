use std::f64::consts::FRAC_2_PI;

use bessel_kernel::gamma::gamma;
use bessel_kernel::{bessel_jy, modified_pair};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Approximant, EvalError, Result};

/// Below this index the expansion is still evaluated but flagged.
pub const N_MIN: u64 = 10;

/// `|Nζ|` at or below which the Bessel functions come from their power series
/// in `N²η`, which is continuous through t = 0.
pub const ORIGIN_ARG: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Negative,
    OriginWindow,
    Oscillatory,
}

/// One evaluation of the pair. For the negative regime the true values are
/// `P = p_value·e^{log_scale}` and `Q = q_value·e^{−log_scale}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub n: u64,
    /// User-side scaled variable.
    pub t: f64,
    pub p_value: f64,
    pub q_value: Complex64,
    pub log_scale: f64,
    pub regime: Regime,
    /// Modeled bound on `|P − P_exact|`, on the same scale as `p_value`.
    pub budget: Option<f64>,
    pub below_n_min: bool,
}

impl EvalResult {
    /// `P` itself; overflows to infinity for large `log_scale`.
    pub fn p_unscaled(&self) -> f64 {
        self.p_value * self.log_scale.exp()
    }

    pub fn q_unscaled(&self) -> Complex64 {
        self.q_value * (-self.log_scale).exp()
    }

    /// `ln|P|`.
    pub fn ln_abs_p(&self) -> f64 {
        self.p_value.abs().ln() + self.log_scale
    }
}

/// `Σ_k (−w/4)^k / (k! Γ(μ+k+1))`, so that `J_μ(x) = (x/2)^μ E_μ(x²)`.
pub(crate) fn reduced_series(mu: f64, w: f64) -> f64 {
    let q = -0.25 * w;
    let mut term = 1.0 / gamma(mu + 1.0);
    let mut sum = term;
    for k in 1..60 {
        term *= q / (k as f64 * (mu + k as f64));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

pub(crate) struct Canonical {
    pub p: f64,
    pub q: Complex64,
    pub log_scale: f64,
    pub regime: Regime,
    /// `N^{1/2} c (|J_ν| + |J_{ν+1}|)` on the scale of `p`.
    pub shape: f64,
}

impl Approximant {
    pub fn big_n(&self, n: u64) -> Result<f64> {
        let big_n = n as f64 + self.frame.tau0;
        if big_n > 0.0 {
            Ok(big_n)
        } else {
            Err(EvalError::NonPositiveN(big_n))
        }
    }

    /// `t` such that `N^θ t = x`.
    pub fn t_at(&self, n: u64, x: f64) -> Result<f64> {
        Ok(x / self.big_n(n)?.powf(self.frame.theta))
    }

    /// Evaluation in the canonical variable, before the case transform.
    pub(crate) fn canonical(&self, n: u64, t: f64) -> Result<Canonical> {
        let frame = &self.frame;
        let big_n = self.big_n(n)?;
        let c = frame.normalizer(t)?;
        let (sa, sb) = self.coeffs.sums(self.order_p, t, big_n)?;
        let eta = frame.eta(t)?;
        let zabs = frame.zeta_abs(t)?;
        let nu = frame.nu;
        let x = big_n * zabs;
        let pref = big_n.sqrt() * c;

        if x <= ORIGIN_ARG {
            let lead = if x == 0.0 {
                if nu == 0.0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                (0.5 * x).powf(nu)
            };
            let w = big_n * big_n * eta;
            let e0 = reduced_series(nu, w);
            let e1 = reduced_series(nu + 1.0, w);
            // J_{ν+1}(x)/ζ = (x/2)^ν (N/2) E_{ν+1}
            let p = pref * lead * (e0 * sa + 0.5 * big_n * e1 * sb);
            let shape = pref * lead * (e0.abs() + 0.5 * x * e1.abs());
            let q = if t > 0.0 {
                let jy = bessel_jy(nu, x)?;
                Complex64::new(pref * (jy.y * sa + jy.y_next / zabs * sb), -p)
            } else if t < 0.0 {
                let m = modified_pair(nu, x, false)?;
                Complex64::new(-FRAC_2_PI * pref * (m.k_val * sa - m.k_next / zabs * sb), 0.0)
            } else {
                Complex64::new(f64::NEG_INFINITY, -p)
            };
            return Ok(Canonical {
                p,
                q,
                log_scale: 0.0,
                regime: Regime::OriginWindow,
                shape,
            });
        }

        if t > 0.0 {
            let jy = bessel_jy(nu, x)?;
            let p = pref * (jy.j * sa + jy.j_next / zabs * sb);
            let y = pref * (jy.y * sa + jy.y_next / zabs * sb);
            Ok(Canonical {
                p,
                q: Complex64::new(y, -p),
                log_scale: 0.0,
                regime: Regime::Oscillatory,
                shape: pref * (jy.j.abs() + jy.j_next.abs()),
            })
        } else {
            let m = modified_pair(nu, x, true)?;
            let p = pref * (m.i_val * sa + m.i_next / zabs * sb);
            let q = -FRAC_2_PI * pref * (m.k_val * sa - m.k_next / zabs * sb);
            Ok(Canonical {
                p,
                q: Complex64::new(q, 0.0),
                log_scale: x,
                regime: Regime::Negative,
                shape: pref * (m.i_val.abs() + m.i_next.abs()),
            })
        }
    }

    /// Both members of the pair at index n and user-side scaled variable t.
    pub fn evaluate(&self, n: u64, t: f64) -> Result<EvalResult> {
        let tc = self.case_transform.map_x(t);
        let raw = self.canonical(n, tc)?;
        let budget = self
            .calibration
            .as_ref()
            .map(|cal| cal.m_hat * self.big_n(n).map(|bn| bn.powi(-(self.order_p as i32 + 1))).unwrap_or(f64::NAN) * raw.shape);
        Ok(EvalResult {
            n,
            t,
            p_value: self.case_transform.map_value(n, raw.p),
            q_value: self.case_transform.map_value(n, raw.q),
            log_scale: raw.log_scale,
            regime: raw.regime,
            budget,
            below_n_min: n < N_MIN,
        })
    }

    pub fn eval_p(&self, n: u64, t: f64) -> Result<EvalResult> {
        self.evaluate(n, t)
    }

    /// As [`Approximant::evaluate`], but refuses t = 0 where `W_ν(0)` is infinite.
    pub fn eval_q(&self, n: u64, t: f64) -> Result<EvalResult> {
        if self.case_transform.map_x(t) == 0.0 {
            return Err(EvalError::Singular("Q_n"));
        }
        self.evaluate(n, t)
    }

    /// Evaluation at fixed `x` rather than fixed t.
    pub fn evaluate_at_x(&self, n: u64, x: f64) -> Result<EvalResult> {
        let t = self.t_at(n, x)?;
        self.evaluate(n, t)
    }

    /// Casoratian `P_{n+1}(x)Q_n(x) − P_n(x)Q_{n+1}(x)` at `x = N^θ t`.
    pub fn wronskian(&self, n: u64, t: f64) -> Result<f64> {
        let big_n = self.big_n(n)?;
        let x = big_n.powf(self.frame.theta) * t;
        let a = self.eval_q(n, t)?;
        let b = self.eval_q(n + 1, self.t_at(n + 1, x)?)?;
        let w = a.q_value * b.p_value * (b.log_scale - a.log_scale).exp()
            - b.q_value * a.p_value * (a.log_scale - b.log_scale).exp();
        Ok(w.re)
    }

    /// `M̂ N^{−(p+1)} N^{1/2} c (|J_ν(Nζ)| + |J_{ν+1}(Nζ)|)`, scaled like `p_value`.
    pub fn error_budget(&self, n: u64, t: f64) -> Result<f64> {
        if self.calibration.is_none() {
            return Err(EvalError::CalibrationUnavailable);
        }
        self.evaluate(n, t)?.budget.ok_or(EvalError::CalibrationUnavailable)
    }
}
