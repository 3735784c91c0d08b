//! Recurrence systems `P_{n+1} − (A_n x + B_n) P_n + P_{n−1} = 0` described by
//! the exponent θ and the coefficient series of `A_n ~ n^{−θ} Σ α_s n^{−s}`,
//! `B_n ~ Σ β_s n^{−s}`.

use bessel_kernel::BesselOrder64;
use serde::{Deserialize, Serialize};

use crate::FrameError;

/// Where exact `A_n`, `B_n` values come from when a reference trace is wanted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ExactCoeffs {
    /// Orthonormal polynomials for the weight `x^α exp(−q x^m)` on `(0, ∞)`,
    /// after the normalising transform that puts them in unit-trailing form.
    Laguerre { m: u32, alpha: f64, q: f64 },
    /// Tabulated `A_n`, `B_n` for `n = 0, 1, …`.
    Table { a: Vec<f64>, b: Vec<f64> },
    /// `A_n ≡ a`, `B_n ≡ b`.
    Constant { a: f64, b: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceSystem {
    pub theta: f64,
    pub alpha_series: Vec<f64>,
    pub beta_series: Vec<f64>,
    pub exact_coeffs: Option<ExactCoeffs>,
}

impl RecurrenceSystem {
    pub fn new(theta: f64, alpha_series: Vec<f64>, beta_series: Vec<f64>) -> Result<Self, FrameError> {
        let sys = Self {
            theta,
            alpha_series,
            beta_series,
            exact_coeffs: None,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn with_exact(mut self, exact: ExactCoeffs) -> Self {
        self.exact_coeffs = Some(exact);
        self
    }

    pub fn validate(&self) -> Result<(), FrameError> {
        let th = self.theta;
        if !th.is_finite() {
            return Err(FrameError::NonFinite("theta"));
        }
        if th == 0.0 || th == 2.0 {
            return Err(FrameError::ExcludedTheta(th));
        }
        if self.alpha_series.is_empty() || self.alpha_series[0] == 0.0 {
            return Err(FrameError::ZeroAlpha0);
        }
        if self.alpha_series.iter().chain(&self.beta_series).any(|v| !v.is_finite()) {
            return Err(FrameError::NonFinite("coefficient series"));
        }
        if self.beta_series.len() < 3 {
            return Err(FrameError::SeriesTooShort {
                needed: 3,
                got: self.beta_series.len(),
            });
        }
        let b0 = self.beta_series[0];
        if b0 != 2.0 && b0 != -2.0 {
            return Err(FrameError::TransitionNotAtOrigin(b0));
        }
        if self.beta_series[1] != 0.0 {
            return Err(FrameError::NonzeroBeta1(self.beta_series[1]));
        }
        Ok(())
    }

    /// `A_n` from the truncated series.
    pub fn a_series(&self, n: f64) -> f64 {
        n.powf(-self.theta) * horner_inv(&self.alpha_series, n)
    }

    /// `B_n` from the truncated series.
    pub fn b_series(&self, n: f64) -> f64 {
        horner_inv(&self.beta_series, n)
    }
}

fn horner_inv(c: &[f64], n: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc / n + v)
}

/// Which of the two sign flips took the user's system to the canonical case
/// `α₀ < 0, β₀ = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CaseTransform {
    /// The canonical solution is `(−1)^n` times the user's.
    pub parity_flip: bool,
    /// The canonical variable is `x = −x_user`.
    pub axis_flip: bool,
}

impl CaseTransform {
    pub fn is_identity(&self) -> bool {
        !self.parity_flip && !self.axis_flip
    }

    /// Canonical x for a user x.
    pub fn map_x(&self, x_user: f64) -> f64 {
        if self.axis_flip {
            -x_user
        } else {
            x_user
        }
    }

    /// User-side value from a canonical value at index n.
    pub fn map_value<T: std::ops::Neg<Output = T>>(&self, n: u64, v: T) -> T {
        if self.parity_flip && n % 2 == 1 {
            -v
        } else {
            v
        }
    }
}

/// Brings `(α₀, β₀)` to `α₀ < 0, β₀ = 2`. A parity flip negates every α_s and
/// β_s; an axis flip negates every α_s.
pub fn canonicalize(system: &RecurrenceSystem) -> Result<(RecurrenceSystem, CaseTransform), FrameError> {
    system.validate()?;
    let a0 = system.alpha_series[0];
    let b0 = system.beta_series[0];
    let parity_flip = b0 < 0.0;
    let a0_after_parity = if parity_flip { -a0 } else { a0 };
    let axis_flip = a0_after_parity > 0.0;
    let mut out = system.clone();
    if parity_flip {
        out.beta_series.iter_mut().for_each(|b| *b = -*b);
    }
    if parity_flip != axis_flip {
        out.alpha_series.iter_mut().for_each(|a| *a = -*a);
    }
    if let Some(ExactCoeffs::Table { a, b }) = &mut out.exact_coeffs {
        if parity_flip {
            b.iter_mut().for_each(|v| *v = -*v);
        }
        if parity_flip != axis_flip {
            a.iter_mut().for_each(|v| *v = -*v);
        }
    }
    if let Some(ExactCoeffs::Constant { a, b }) = &mut out.exact_coeffs {
        if parity_flip {
            *b = -*b;
        }
        if parity_flip != axis_flip {
            *a = -*a;
        }
    }
    Ok((out, CaseTransform { parity_flip, axis_flip }))
}

/// Generalised binomial coefficient `C(a, k)` for real a.
pub fn binom(a: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (a - j as f64) / (j as f64 + 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recast {
    pub tau0: f64,
    pub alpha_prime: Vec<f64>,
    pub beta_prime: Vec<f64>,
}

/// Shift `N = n + τ₀` with `τ₀ = −α₁/(α₀θ)` and re-expand both series in
/// powers of `1/N`. Terms beyond the supplied series are taken as zero.
pub fn shift_and_recast(system: &RecurrenceSystem) -> Result<Recast, FrameError> {
    system.validate()?;
    let th = system.theta;
    let al = &system.alpha_series;
    let be = &system.beta_series;
    let a1 = al.get(1).copied().unwrap_or(0.0);
    let tau0 = -a1 / (al[0] * th);
    // n^{−c} = N^{−c} Σ_j C(c+j−1, j) τ₀^j N^{−j}
    let expand = |c: f64, j: usize| binom(c + j as f64 - 1.0, j) * tau0.powi(j as i32);
    let mut alpha_prime = vec![0.0; al.len()];
    for (k, &a) in al.iter().enumerate() {
        for (s, slot) in alpha_prime.iter_mut().enumerate().skip(k) {
            *slot += a * expand(th + k as f64, s - k);
        }
    }
    if alpha_prime.len() > 1 {
        alpha_prime[1] = 0.0;
    }
    let mut beta_prime = vec![0.0; be.len()];
    beta_prime[0] = be[0];
    for (k, &b) in be.iter().enumerate().skip(1) {
        for (s, slot) in beta_prime.iter_mut().enumerate().skip(k) {
            *slot += b * expand(k as f64, s - k);
        }
    }
    Ok(Recast {
        tau0,
        alpha_prime,
        beta_prime,
    })
}

/// Roots of `α′₀t + β′₀ = ±2`.
pub fn transition_points(alpha0p: f64, beta0p: f64) -> (f64, f64) {
    ((2.0 - beta0p) / alpha0p, (-2.0 - beta0p) / alpha0p)
}

/// `ν = sqrt(1 + 4β′₂) / |θ − 2|`. Values of `1 + 4β′₂` within rounding of
/// zero are clamped so that series-extracted coefficients do not trip the
/// imaginary-order check.
pub fn order_nu(theta: f64, beta2p: f64) -> Result<BesselOrder64, FrameError> {
    let d = 1.0 + 4.0 * beta2p;
    let floor = -1e-10 * (1.0 + 4.0 * beta2p.abs());
    if d < floor || !d.is_finite() {
        return Err(FrameError::ImaginaryOrder(d));
    }
    let nu = d.max(0.0).sqrt() / (theta - 2.0).abs();
    BesselOrder64::new(nu).map_err(|_| FrameError::ImaginaryOrder(d))
}
