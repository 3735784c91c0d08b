use std::io::Write;

use rug::ops::Pow;
use rug::Float;

use crate::config::{bits_for, Direction, Initial, OracleConfig};
use crate::laguerre::{gamma0, k_normalizer, laguerre_coeffs, weight_sqrt, LaguerreTypeWeight};
use crate::source::CoeffSource;
use crate::{OracleError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Provenance {
    pub direction: Direction,
    pub precision_digits: u32,
}

impl Provenance {
    pub fn label(&self) -> String {
        format!("{}@{}", self.direction.label(), self.precision_digits)
    }
}

/// Values of one solution at fixed x for `n = start, start+1, …`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleTrace {
    pub x: f64,
    pub start: u64,
    pub values: Vec<Float>,
    pub provenance: Provenance,
    /// False for raw orthonormal `p_n`, true after the transform to unit-trailing form.
    pub normalized: bool,
}

impl OracleTrace {
    pub fn end(&self) -> u64 {
        self.start + self.values.len() as u64 - 1
    }

    pub fn get(&self, n: u64) -> Option<&Float> {
        n.checked_sub(self.start)
            .and_then(|i| self.values.get(i as usize))
    }

    pub fn value_f64(&self, n: u64) -> Option<f64> {
        self.get(n).map(Float::to_f64)
    }

    /// `(sign, ln|value|)`, finite even when the value overflows f64.
    pub fn sign_ln_abs(&self, n: u64) -> Option<(f64, f64)> {
        self.get(n).map(|v| {
            let sign = if v.is_sign_negative() { -1.0 } else { 1.0 };
            (sign, Float::with_val(v.prec(), v.abs_ref()).ln().to_f64())
        })
    }

    /// Largest `|P_{n+1} − (A_n x + B_n)P_n + P_{n−1}|` relative to the largest
    /// of the three terms, over all interior n.
    pub fn max_triple_residual(&self, source: &dyn CoeffSource) -> Result<f64> {
        let bits = bits_for(self.provenance.precision_digits);
        let x = Float::with_val(bits, self.x);
        let mut worst: f64 = 0.0;
        for i in 1..self.values.len().saturating_sub(1) {
            let n = self.start + i as u64;
            let (a, b) = source.coeffs(n, bits)?;
            let c = Float::with_val(bits, &a * &x) + &b;
            let mid = Float::with_val(bits, &c * &self.values[i]);
            let r = Float::with_val(bits, &self.values[i + 1] - &mid) + &self.values[i - 1];
            let scale = [&self.values[i + 1], &mid, &self.values[i - 1]]
                .iter()
                .map(|v| Float::with_val(bits, v.abs_ref()))
                .fold(Float::new(bits), |m, v| if v > m { v } else { m });
            if !scale.is_zero() {
                worst = worst.max((r.abs() / scale).to_f64());
            }
        }
        Ok(worst)
    }

    /// CSV with columns `n,mantissa,exp10,provenance`; the mantissa carries
    /// the trace's working digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "n,mantissa,exp10,provenance")?;
        let label = self.provenance.label();
        let digits = self.provenance.precision_digits as usize;
        for (i, v) in self.values.iter().enumerate() {
            let (mant, e) = split10(v, digits);
            writeln!(out, "{},{},{},{}", self.start + i as u64, mant, e, label)?;
        }
        Ok(())
    }
}

/// `v = mantissa·10^exp10` with `1 ≤ |mantissa| < 10`.
fn split10(v: &Float, digits: usize) -> (String, i64) {
    if v.is_zero() {
        return ("0".into(), 0);
    }
    let bits = v.prec() + 16;
    let mut e = Float::with_val(bits, v.abs_ref()).log10().floor().to_f64() as i64;
    let mut mant = Float::with_val(bits, v / Float::with_val(bits, 10).pow(e as i32));
    // correct a floor that landed one off at an exact power of ten
    if Float::with_val(bits, mant.abs_ref()) >= 10 {
        mant /= 10;
        e += 1;
    } else if Float::with_val(bits, mant.abs_ref()) < 1 {
        mant *= 10;
        e -= 1;
    }
    (mant.to_string_radix(10, Some(digits)), e)
}

fn start_values(config: &OracleConfig) -> Result<(Float, Float)> {
    match &config.initial {
        Initial::Values(p0, p1) => {
            let bits = config.bits();
            Ok((Float::with_val(bits, p0), Float::with_val(bits, p1)))
        }
        Initial::Miller { .. } => Err(OracleError::InvalidConfig(
            "forward recurrence needs initial values, not a Miller seed".into(),
        )),
    }
}

/// `P_{n+1} = (A_n x + B_n) P_n − P_{n−1}` from `(P_start, P_{start+1})` up
/// to `n_max`.
pub fn forward_recurrence(
    config: &OracleConfig,
    source: &dyn CoeffSource,
    x: f64,
) -> Result<OracleTrace> {
    config.validate()?;
    if config.n_max <= config.start {
        return Err(OracleError::InvalidConfig("n_max must exceed start".into()));
    }
    let bits = config.bits();
    let (p0, p1) = start_values(config)?;
    let xf = Float::with_val(bits, x);
    let mut values = Vec::with_capacity((config.n_max - config.start + 1) as usize);
    values.push(p0);
    values.push(p1);
    for n in config.start + 1..config.n_max {
        if n < source.min_index() {
            return Err(OracleError::CoefficientUnavailable { n });
        }
        let (a, b) = source.coeffs(n, bits)?;
        let c = Float::with_val(bits, &a * &xf) + &b;
        let k = values.len();
        let next = Float::with_val(bits, &c * &values[k - 1]) - &values[k - 2];
        values.push(next);
    }
    Ok(OracleTrace {
        x,
        start: config.start,
        values,
        provenance: Provenance {
            direction: Direction::Forward,
            precision_digits: config.precision_digits,
        },
        normalized: false,
    })
}

const MAX_ESCALATIONS: usize = 12;

/// Recessive solution on `config.start ..= n_target`, normalised to 1 at
/// `config.start`. Backward recurrence starts from `P_{n₀+1} = 0, P_{n₀} = 1`
/// with `n₀ = n_target + buffer`, and the buffer is doubled until the value at
/// `n_target` moves by less than `10^{−(digits−10)}` relative.
pub fn backward_miller(
    config: &OracleConfig,
    source: &dyn CoeffSource,
    x: f64,
    n_target: u64,
) -> Result<OracleTrace> {
    config.validate()?;
    if n_target <= config.start {
        return Err(OracleError::InvalidConfig(
            "n_target must exceed start".into(),
        ));
    }
    let lo = config.start.max(source.min_index().saturating_sub(1));
    let bits = config.bits();
    let tol = 10f64.powi(-(config.precision_digits as i32 - 10));
    let mut buffer = match config.initial {
        Initial::Miller { buffer: Some(b) } => b.max(1),
        _ => (n_target / 2).max(50),
    };
    let xf = Float::with_val(bits, x);
    let mut prev: Option<Vec<Float>> = None;
    let mut change = f64::INFINITY;
    for _ in 0..MAX_ESCALATIONS {
        let values = miller_pass(source, &xf, lo, n_target, n_target + buffer, bits)?;
        if let Some(p) = &prev {
            let i = (n_target - lo) as usize;
            let d = Float::with_val(bits, &values[i] - &p[i]).abs()
                / Float::with_val(bits, values[i].abs_ref());
            change = d.to_f64();
            if change < tol {
                return Ok(OracleTrace {
                    x,
                    start: lo,
                    values,
                    provenance: Provenance {
                        direction: Direction::Backward,
                        precision_digits: config.precision_digits,
                    },
                    normalized: false,
                });
            }
        }
        prev = Some(values);
        buffer *= 2;
    }
    Err(OracleError::NonConvergence { n_target, change })
}

fn miller_pass(
    source: &dyn CoeffSource,
    x: &Float,
    lo: u64,
    n_target: u64,
    n_start: u64,
    bits: u32,
) -> Result<Vec<Float>> {
    let mut upper = Float::with_val(bits, 0);
    let mut cur = Float::with_val(bits, 1);
    let mut kept = Vec::with_capacity((n_target - lo + 1) as usize);
    let mut n = n_start;
    loop {
        if n <= n_target {
            kept.push(cur.clone());
        }
        if n == lo {
            break;
        }
        let (a, b) = source.coeffs(n, bits)?;
        let c = Float::with_val(bits, &a * x) + &b;
        let lower = Float::with_val(bits, &c * &cur) - &upper;
        upper = cur;
        cur = lower;
        n -= 1;
        // keep magnitudes in range without changing ratios
        let e = cur.get_exp().unwrap_or(0);
        if e.abs() > 1 << 20 {
            cur >>= e;
            upper >>= e;
            for v in kept.iter_mut() {
                *v >>= e;
            }
        }
    }
    kept.reverse();
    let norm = kept[0].clone();
    if norm.is_zero() {
        return Err(OracleError::Domain(
            "recessive solution vanishes at the normalising index".into(),
        ));
    }
    for v in kept.iter_mut() {
        *v /= &norm;
    }
    Ok(kept)
}

/// `P_{n+1}Q_n − P_nQ_{n+1}` over the indices the two traces share.
pub fn casoratian(p: &OracleTrace, q: &OracleTrace) -> Vec<(u64, Float)> {
    let lo = p.start.max(q.start);
    let hi = p.end().min(q.end());
    let bits = p.values[0].prec().max(q.values[0].prec());
    (lo..hi)
        .filter_map(|n| {
            let (p0, p1, q0, q1) = (p.get(n)?, p.get(n + 1)?, q.get(n)?, q.get(n + 1)?);
            let w = Float::with_val(bits, p1 * q0) - Float::with_val(bits, p0 * q1);
            Some((n, w))
        })
        .collect()
}

/// Orthonormal `p_0 … p_{n_max}` at x from `x p_n = b_n p_{n+1} + a_n p_n + b_{n−1} p_{n−1}`.
pub fn orthonormal_trace(
    config: &OracleConfig,
    weight: &LaguerreTypeWeight,
    x: f64,
) -> Result<OracleTrace> {
    config.validate()?;
    let bits = config.bits();
    let xf = Float::with_val(bits, x);
    let mut values = Vec::with_capacity(config.n_max as usize + 1);
    values.push(gamma0(weight, bits));
    let mut b_prev = Float::with_val(bits, 0);
    for n in 0..config.n_max {
        let c = laguerre_coeffs(weight, n, bits);
        let k = values.len();
        let mut next = Float::with_val(bits, &xf - &c.a) * &values[k - 1];
        if k >= 2 {
            next -= Float::with_val(bits, &b_prev * &values[k - 2]);
        }
        next /= &c.b;
        values.push(next);
        b_prev = c.b;
    }
    Ok(OracleTrace {
        x,
        start: 0,
        values,
        provenance: Provenance {
            direction: Direction::Forward,
            precision_digits: config.precision_digits,
        },
        normalized: false,
    })
}

/// `𝒫_n = (−1)^n w(x)^{1/2} p_n(x) / K_n` for n ≥ 1. For x < 0 the factor
/// `x^{α/2}` is replaced by `|x|^{α/2}`, so only magnitudes are meaningful
/// there when α ≠ 0.
pub fn canonical_transform(weight: &LaguerreTypeWeight, raw: &OracleTrace) -> Result<OracleTrace> {
    if raw.normalized {
        return Err(OracleError::InvalidConfig(
            "trace is already normalized".into(),
        ));
    }
    let digits = raw.provenance.precision_digits;
    let bits = bits_for(digits);
    let ws = weight_sqrt(weight, &Float::with_val(bits, raw.x), bits)?;
    let start = raw.start.max(1);
    let mut values = Vec::new();
    for n in start..=raw.end() {
        let p = raw
            .get(n)
            .ok_or(OracleError::CoefficientUnavailable { n })?;
        let k = k_normalizer(weight, n, bits)?;
        let mut v = Float::with_val(bits, &ws * p) / k;
        if n % 2 == 1 {
            v = -v;
        }
        values.push(v);
    }
    Ok(OracleTrace {
        x: raw.x,
        start,
        values,
        provenance: raw.provenance,
        normalized: true,
    })
}

/// `𝒫_n(x)` for a single index, from a fresh orthonormal trace.
pub fn canonical_value(
    weight: &LaguerreTypeWeight,
    n: u64,
    x: f64,
    precision_digits: u32,
) -> Result<Float> {
    let mut cfg = OracleConfig::forward(precision_digits, 0, n.max(2), 0.0, 0.0);
    cfg.n_max = n.max(2);
    let raw = orthonormal_trace(&cfg, weight, x)?;
    let bits = cfg.bits();
    if n < 1 {
        return Err(OracleError::Domain(
            "the transformed solution starts at n = 1".into(),
        ));
    }
    let ws = weight_sqrt(weight, &Float::with_val(bits, x), bits)?;
    let p = raw
        .get(n)
        .ok_or(OracleError::CoefficientUnavailable { n })?;
    let v = Float::with_val(bits, &ws * p) / k_normalizer(weight, n, bits)?;
    Ok(if n % 2 == 1 { -v } else { v })
}
