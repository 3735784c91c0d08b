//! Error measures against the high-precision reference.

use std::f64::consts::PI;

use asymptotic_evaluator::{Approximant, CalibrationSample};
use recurrence_oracle::{
    canonical_value, fit_connection, ConnectionFit, ConnectionSample, LaguerreTypeWeight,
};

use crate::HarnessError;

/// Points per local period in [`local_rel_error`].
pub const PERIOD_POINTS: usize = 9;
/// Half-width of the n window used to fit the connection constants.
pub const CONNECTION_HALF_WIDTH: u64 = 10;

/// Exact reference on the scale of the approximant: `𝒫_n / c₁`.
#[derive(Debug, Clone, Copy)]
pub struct Reference<'a> {
    pub weight: &'a LaguerreTypeWeight,
    pub c1: f64,
    pub digits: u32,
}

impl Reference<'_> {
    /// `(sign, ln|𝒫_n(x)/c₁|)` at user-side `t`, `x = N^θ t`.
    pub fn signed_log(&self, ap: &Approximant, n: u64, t: f64) -> Result<(f64, f64), HarnessError> {
        let x = ap
            .big_n(n)
            .map_err(HarnessError::from_eval)?
            .powf(ap.frame.theta)
            * t;
        let v = canonical_value(self.weight, n, x, self.digits)?;
        if v.is_zero() {
            return Ok((0.0, f64::NEG_INFINITY));
        }
        let sign = if v.is_sign_negative() { -1.0 } else { 1.0 };
        let ln_abs = v.abs().ln().to_f64();
        Ok((sign * self.c1.signum(), ln_abs - self.c1.abs().ln()))
    }

    /// The reference times `e^{−log_scale}`.
    pub fn scaled(
        &self,
        ap: &Approximant,
        n: u64,
        t: f64,
        log_scale: f64,
    ) -> Result<f64, HarnessError> {
        let (s, l) = self.signed_log(ap, n, t)?;
        Ok(s * (l - log_scale).exp())
    }

    pub fn calibration_sample(
        &self,
        ap: &Approximant,
        n: u64,
        t: f64,
    ) -> Result<CalibrationSample, HarnessError> {
        let (value, log_scale) = self.signed_log(ap, n, t)?;
        Ok(CalibrationSample {
            n,
            t,
            value,
            log_scale,
        })
    }
}

/// Sample points for the local error at t: one local period of the Bessel
/// phase, `2π/(N ζ′(t))`, centred on t for t > 0; t alone otherwise.
pub fn local_points(ap: &Approximant, n: u64, t: f64) -> Result<Vec<f64>, HarnessError> {
    let tc = ap.case_transform.map_x(t);
    if tc <= 0.0 {
        return Ok(vec![t]);
    }
    let big_n = ap.big_n(n).map_err(HarnessError::from_eval)?;
    let zp = ap
        .frame
        .zeta_prime(tc)
        .map_err(|e| HarnessError::Numerical(e.to_string()))?
        .re
        .abs();
    let period = 2.0 * PI / (big_n * zp);
    let (lo, hi) = ap.frame.window();
    let last = (PERIOD_POINTS - 1) as f64;
    Ok((0..PERIOD_POINTS)
        .map(|k| tc + period * (k as f64 / last - 0.5))
        .filter(|s| *s >= lo && *s <= hi)
        .map(|s| ap.case_transform.map_x(s))
        .collect())
}

/// Sup of `|P − 𝒫/c₁|` over [`local_points`] divided by the sup of the
/// reference there. Pointwise on the non-oscillatory side, where the
/// reference has no zeros.
pub fn local_rel_error(
    ap: &Approximant,
    reference: &Reference,
    n: u64,
    t: f64,
) -> Result<f64, HarnessError> {
    let (mut err, mut mag) = (0.0f64, 0.0f64);
    for s in local_points(ap, n, t)? {
        let r = ap.evaluate(n, s).map_err(HarnessError::from_eval)?;
        let o = reference.scaled(ap, n, s, r.log_scale)?;
        err = err.max((r.p_value - o).abs());
        mag = mag.max(o.abs());
    }
    Ok(err / mag)
}

/// Least-squares slope of y against x.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Fits `𝒫_n ≈ C₁ P_n + C₂ Re Q_n` at `t = t₂/2` over
/// `n_center ± CONNECTION_HALF_WIDTH` (even steps).
pub fn fit_c1(
    ap: &Approximant,
    weight: &LaguerreTypeWeight,
    n_center: u64,
    digits: u32,
) -> Result<ConnectionFit, HarnessError> {
    let t = ap.case_transform.map_x(0.5 * ap.frame.t2);
    let unit = Reference {
        weight,
        c1: 1.0,
        digits,
    };
    let lo = n_center.saturating_sub(CONNECTION_HALF_WIDTH).max(1);
    let samples = (lo..=n_center + CONNECTION_HALF_WIDTH)
        .step_by(2)
        .map(|n| {
            let r = ap.evaluate(n, t).map_err(HarnessError::from_eval)?;
            Ok(ConnectionSample {
                n,
                p: r.p_value,
                q: r.q_value.re,
                target: unit.scaled(ap, n, t, r.log_scale)?,
            })
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    Ok(fit_connection(&samples)?)
}
