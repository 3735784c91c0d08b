//! Orthonormal polynomials for `w(x) = x^α exp(−q x^m)` on `(0, ∞)`.
//!
//! For m = 1 the recurrence coefficients are the exact Laguerre ones, dilated
//! to q. For m ≥ 2 only their large-n expansions are known, so the values come
//! from those expansions with the unknown `n^{−2}` constants set to zero and
//! are flagged as truncated.
//!
//! In both models `ln b_k` is a finite sum `Σ u_j ln(k + s_j) + const`, which
//! lets the infinite product defining `K_n` be summed in closed form beyond any
//! truncation depth.

use rug::ops::Pow;
use rug::Float;
use transition_map::{ExactCoeffs, RecurrenceSystem};

use crate::source::CoeffSource;
use crate::{OracleError, Result};

/// Explicit factors of the `K_n` product before the closed-form tail.
pub const DEFAULT_K_DEPTH: u64 = 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaguerreTypeWeight {
    pub m: u32,
    pub alpha: f64,
    pub q_m: f64,
}

impl LaguerreTypeWeight {
    pub fn new(m: u32, alpha: f64, q_m: f64) -> Result<Self> {
        if m == 0 {
            return Err(OracleError::InvalidWeight(
                "m must be a positive integer".into(),
            ));
        }
        if !(alpha.is_finite() && alpha > -1.0) {
            return Err(OracleError::InvalidWeight(format!(
                "alpha must be > -1, got {alpha}"
            )));
        }
        if !(q_m.is_finite() && q_m > 0.0) {
            return Err(OracleError::InvalidWeight(format!(
                "q_m must be > 0, got {q_m}"
            )));
        }
        Ok(Self { m, alpha, q_m })
    }

    /// Coefficients are exact only for m = 1.
    pub fn is_exact(&self) -> bool {
        self.m == 1
    }

    pub fn theta(&self) -> f64 {
        1.0 / self.m as f64
    }

    pub fn tau0(&self) -> f64 {
        0.5 * (self.alpha + 1.0)
    }

    /// `r_m = (½ m q_m ∏_{j≤m} (2j−1)/(2j))^{−1/m}`.
    pub fn r_m(&self) -> f64 {
        self.r_m_float(64).to_f64()
    }

    pub fn r_m_float(&self, bits: u32) -> Float {
        let mut prod = Float::with_val(bits, 0.5 * self.m as f64) * self.q_m;
        for j in 1..=self.m {
            prod *= (2 * j - 1) as f64;
            prod /= (2 * j) as f64;
        }
        let exponent = Float::with_val(bits, -1.0) / self.m as f64;
        prod.pow(exponent)
    }

    /// `(u_j, s_j)` with `ln b_k = Σ u_j ln(k + s_j) + const`.
    fn log_model(&self, bits: u32) -> Vec<(Float, Float)> {
        let alpha = Float::with_val(bits, self.alpha);
        if self.m == 1 {
            let half = Float::with_val(bits, 0.5);
            vec![
                (half.clone(), Float::with_val(bits, 1.0)),
                (half, alpha + 1.0),
            ]
        } else {
            let inv_m = Float::with_val(bits, 1.0) / self.m as f64;
            let shift = alpha / (2 * self.m) as f64 + 1.0;
            vec![
                (inv_m - 1.0, Float::with_val(bits, 1.0)),
                (Float::with_val(bits, 1.0), shift),
            ]
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaguerreCoeffs {
    pub a: Float,
    pub b: Float,
    /// Set when the values come from the truncated large-n expansion.
    pub truncated: bool,
}

/// `a_n` and `b_n` of `x p_n = b_n p_{n+1} + a_n p_n + b_{n−1} p_{n−1}`.
///
/// For m ≥ 2 the expansion of `a_n` has a `1/n` term, so `a_0` is taken at
/// n = 1.
pub fn laguerre_coeffs(w: &LaguerreTypeWeight, n: u64, bits: u32) -> LaguerreCoeffs {
    let nf = Float::with_val(bits, n);
    let alpha = Float::with_val(bits, w.alpha);
    if w.m == 1 {
        let a = (Float::with_val(bits, 2 * n + 1) + &alpha) / w.q_m;
        let b = (Float::with_val(bits, &nf + 1u32) * (Float::with_val(bits, &nf + 1u32) + &alpha))
            .sqrt()
            / w.q_m;
        return LaguerreCoeffs {
            a,
            b,
            truncated: false,
        };
    }
    let m = w.m as f64;
    let r = w.r_m_float(bits);
    let inv_m = Float::with_val(bits, 1.0) / m;
    let k = Float::with_val(bits, &nf + 1u32);
    let b =
        k.clone().pow(&inv_m) * &r * (Float::with_val(bits, 0.25) + alpha.clone() / (8.0 * m) / &k);
    let na = Float::with_val(bits, n.max(1));
    let a = na.clone().pow(&inv_m)
        * &r
        * (Float::with_val(bits, 0.5) + (alpha + 1.0) / (4.0 * m) / &na);
    LaguerreCoeffs {
        a,
        b,
        truncated: true,
    }
}

/// `γ₀ = p₀ = (∫ w)^{−1/2} = (m q^{(α+1)/m} / Γ((α+1)/m))^{1/2}`.
pub fn gamma0(w: &LaguerreTypeWeight, bits: u32) -> Float {
    let s = Float::with_val(bits, w.alpha + 1.0) / w.m as f64;
    let q = Float::with_val(bits, w.q_m).pow(&s);
    (q * w.m / s.gamma()).sqrt()
}

/// `K_n = n^{−1/(2m)} ∏_{l≥0} ((n+2l)/(n+2l+2))^{1/(2m)} b_{n+2l+1}/b_{n+2l}`.
pub fn k_normalizer(w: &LaguerreTypeWeight, n: u64, bits: u32) -> Result<Float> {
    k_normalizer_with_depth(w, n, DEFAULT_K_DEPTH, bits)
}

/// As [`k_normalizer`] with `depth` explicit factors; the remaining factors
/// are summed exactly through log-gamma values.
pub fn k_normalizer_with_depth(
    w: &LaguerreTypeWeight,
    n: u64,
    depth: u64,
    bits: u32,
) -> Result<Float> {
    if n < 1 {
        return Err(OracleError::Domain("K_n needs n >= 1".into()));
    }
    let work = bits + 32;
    Ok(Float::with_val(bits, ln_k_depth(w, n, depth, work).exp()))
}

pub(crate) fn ln_k(w: &LaguerreTypeWeight, n: u64, bits: u32) -> Float {
    ln_k_depth(w, n, DEFAULT_K_DEPTH, bits + 32)
}

fn ln_k_depth(w: &LaguerreTypeWeight, n: u64, depth: u64, bits: u32) -> Float {
    let inv_2m = Float::with_val(bits, 0.5) / w.m as f64;
    let model = w.log_model(bits);
    let ln_shift = |k: &Float, s: &Float| Float::with_val(bits, k + s).ln();
    let mut acc = -(Float::with_val(bits, n).ln() * &inv_2m);
    for l in 0..depth {
        let k = Float::with_val(bits, n + 2 * l);
        acc += (k.clone().ln() - Float::with_val(bits, &k + 2u32).ln()) * &inv_2m;
        for (u, s) in &model {
            let s1 = Float::with_val(bits, s + 1u32);
            acc += (ln_shift(&k, &s1) - ln_shift(&k, s)) * u;
        }
    }
    // Σ_{l≥0} Σ_i w_i ln(l + d_i) = −Σ_i w_i lnΓ(d_i) when Σ w_i = Σ w_i d_i = 0.
    let base = Float::with_val(bits, n + 2 * depth);
    let d = |c: &Float| Float::with_val(bits, &base + c) / 2u32;
    let lg = |c: Float| d(&c).ln_gamma();
    acc -= (lg(Float::with_val(bits, 0)) - lg(Float::with_val(bits, 2))) * &inv_2m;
    for (u, s) in &model {
        acc -= (lg(Float::with_val(bits, s + 1u32)) - lg(s.clone())) * u;
    }
    acc
}

/// Weight factor `|x|^{α/2} exp(−q x^m / 2)`; the modulus of `x^α` is used
/// for x < 0.
pub(crate) fn weight_sqrt(w: &LaguerreTypeWeight, x: &Float, bits: u32) -> Result<Float> {
    if x.is_zero() {
        return if w.alpha < 0.0 {
            Err(OracleError::Domain(
                "weight factor is infinite at x = 0 for alpha < 0".into(),
            ))
        } else if w.alpha == 0.0 {
            Ok(Float::with_val(bits, 1.0))
        } else {
            Ok(Float::with_val(bits, 0.0))
        };
    }
    let power = Float::with_val(bits, x.abs_ref()).pow(Float::with_val(bits, w.alpha) / 2u32);
    let xm = Float::with_val(bits, x).pow(w.m);
    Ok(power * (xm * -w.q_m / 2u32).exp())
}

const FIT_NODES: usize = 16;
const FIT_BITS: u32 = 1200;

/// A [`RecurrenceSystem`] for the weight, with the series of `A_n n^{1/m}` and
/// `B_n` in powers of `1/n` read off the exact coefficients by interpolation
/// at `n = 4000, 4500, …, 11500`. Values below `1e-13` of the leading term are
/// set to zero.
pub fn laguerre_system(w: &LaguerreTypeWeight, terms: usize) -> Result<RecurrenceSystem> {
    if !(3..=FIT_NODES / 2).contains(&terms) {
        return Err(OracleError::InvalidConfig(format!(
            "series terms must be in 3..={}",
            FIT_NODES / 2
        )));
    }
    let bits = FIT_BITS;
    let inv_m = Float::with_val(bits, 1.0) / w.m as f64;
    let mut rows = Vec::with_capacity(FIT_NODES);
    let mut ya = Vec::with_capacity(FIT_NODES);
    let mut yb = Vec::with_capacity(FIT_NODES);
    for j in 0..FIT_NODES {
        let n = 4000 + 500 * j as u64;
        let (a, b) = w.coeffs(n, bits)?;
        let nf = Float::with_val(bits, n);
        ya.push(a * nf.clone().pow(&inv_m));
        yb.push(b);
        let u = Float::with_val(bits, 1.0) / nf;
        let mut row = Vec::with_capacity(FIT_NODES);
        let mut p = Float::with_val(bits, 1.0);
        for _ in 0..FIT_NODES {
            row.push(p.clone());
            p *= &u;
        }
        rows.push(row);
    }
    let alpha = snap(&solve(rows.clone(), ya)[..terms]);
    let beta = snap(&solve(rows, yb)[..terms]);
    Ok(
        RecurrenceSystem::new(w.theta(), alpha, beta)?.with_exact(ExactCoeffs::Laguerre {
            m: w.m,
            alpha: w.alpha,
            q: w.q_m,
        }),
    )
}

fn snap(c: &[Float]) -> Vec<f64> {
    let lead = c[0].to_f64().abs();
    c.iter()
        .map(|v| {
            let f = v.to_f64();
            if f.abs() < 1e-13 * lead {
                0.0
            } else {
                f
            }
        })
        .collect()
}

/// Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<Float>>, mut y: Vec<Float>) -> Vec<Float> {
    let n = y.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| {
                a[i][col]
                    .clone()
                    .abs()
                    .partial_cmp(&a[j][col].clone().abs())
                    .unwrap()
            })
            .unwrap_or(col);
        a.swap(col, piv);
        y.swap(col, piv);
        for row in col + 1..n {
            let f = Float::with_val(a[row][col].prec(), &a[row][col] / &a[col][col]);
            for k in col..n {
                let d = Float::with_val(a[row][k].prec(), &f * &a[col][k]);
                a[row][k] -= d;
            }
            let d = Float::with_val(y[row].prec(), &f * &y[col]);
            y[row] -= d;
        }
    }
    let mut x = vec![Float::new(y[0].prec()); n];
    for i in (0..n).rev() {
        let mut s = y[i].clone();
        for k in i + 1..n {
            s -= Float::with_val(s.prec(), &a[i][k] * &x[k]);
        }
        x[i] = s / &a[i][i];
    }
    x
}
