//! Bessel functions J_ν, Y_ν, I_ν, K_ν and W_ν = Y_ν − iJ_ν of real order
//! ν > −1, on the positive real axis and on the positive imaginary axis.
//!
//! Everything is generic over [`BesselFloat`] (any `num_traits::Float` with
//! the usual constants), so `f32` and `f64` both work; `f64` aliases are
//! provided at the bottom of this file.
//!
//! ```
//! let j = bessel_kernel::bessel_j(0.5, std::f64::consts::PI).unwrap();
//! assert!(j.abs() < 1e-14);
//! ```

pub mod gamma;
mod real;

use num_complex::Complex;
use num_traits::{Float, FloatConst};
use thiserror::Error;

pub use real::{i_series, j_series};

pub trait BesselFloat: Float + FloatConst + std::fmt::Debug + Send + Sync + 'static {}
impl<T: Float + FloatConst + std::fmt::Debug + Send + Sync + 'static> BesselFloat for T {}

#[inline]
pub(crate) fn c<T: BesselFloat>(x: f64) -> T {
    T::from(x).expect("representable constant")
}

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum BesselError {
    #[error("order {0} outside the supported range nu > -1")]
    Order(f64),
    #[error("argument {0} outside the domain of this function")]
    Domain(f64),
    #[error("result overflows the floating-point range; use the scaled variant")]
    Overflow,
    #[error("continued fraction or series failed to converge")]
    NoConvergence,
}

type Result<T> = std::result::Result<T, BesselError>;

/// A validated order ν > −1.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BesselOrder<T>(T);

impl<T: BesselFloat> BesselOrder<T> {
    pub fn new(nu: T) -> Result<Self> {
        if nu.is_finite() && nu > -T::one() {
            Ok(Self(nu))
        } else {
            Err(BesselError::Order(nu.to_f64().unwrap_or(f64::NAN)))
        }
    }

    pub fn nu(self) -> T {
        self.0
    }
}

/// `J_ν, Y_ν, J_{ν+1}, Y_{ν+1}` at one argument x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselPair<T> {
    pub x: T,
    pub j: T,
    pub y: T,
    pub j_next: T,
    pub y_next: T,
}

impl<T: BesselFloat> BesselPair<T> {
    /// `J_{ν+1}Y_ν − J_νY_{ν+1}`, which equals `2/(πx)`.
    pub fn wronskian(&self) -> T {
        self.j_next * self.y - self.j * self.y_next
    }
}

/// `I_ν, K_ν, I_{ν+1}, K_{ν+1}`; when `scaled`, the I values carry `e^{−x}`
/// and the K values carry `e^{x}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModifiedPair<T> {
    pub x: T,
    pub i_val: T,
    pub k_val: T,
    pub i_next: T,
    pub k_next: T,
    pub scaled: bool,
}

impl<T: BesselFloat> ModifiedPair<T> {
    /// `I_νK_{ν+1} + I_{ν+1}K_ν`, which equals `1/x` (scale factors cancel).
    pub fn wronskian(&self) -> T {
        self.i_val * self.k_next + self.i_next * self.k_val
    }
}

/// `J_ν(iy)`, `W_ν(iy)` and their order-(ν+1) partners. With `log_scale = s`,
/// the true values are `j·e^{s}` and `w·e^{−s}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImaginaryPair<T> {
    pub j: Complex<T>,
    pub w: Complex<T>,
    pub j_next: Complex<T>,
    pub w_next: Complex<T>,
    pub log_scale: T,
}

fn check_order<T: BesselFloat>(nu: T) -> Result<T> {
    BesselOrder::new(nu).map(BesselOrder::nu)
}

fn reflect_jy<T: BesselFloat>(mu: T, jm: T, ym: T) -> (T, T) {
    let (s, co) = (mu * T::PI()).sin_cos();
    (co * jm - s * ym, s * jm + co * ym)
}

/// `J_ν, Y_ν, J_{ν+1}, Y_{ν+1}` for x > 0.
pub fn bessel_jy<T: BesselFloat>(nu: T, x: T) -> Result<BesselPair<T>> {
    let nu = check_order(nu)?;
    if !(x > T::zero()) || !x.is_finite() {
        return Err(BesselError::Domain(x.to_f64().unwrap_or(f64::NAN)));
    }
    if nu >= T::zero() {
        let (j, y, j_next, y_next) = real::jy(nu, x)?;
        return Ok(BesselPair { x, j, y, j_next, y_next });
    }
    let mu = -nu;
    let (jm, ym, _, _) = real::jy(mu, x)?;
    let (j, y) = reflect_jy(mu, jm, ym);
    let (j_next, y_next, _, _) = real::jy(nu + T::one(), x)?;
    Ok(BesselPair { x, j, y, j_next, y_next })
}

pub fn bessel_j<T: BesselFloat>(nu: T, x: T) -> Result<T> {
    let nu = check_order(nu)?;
    if x < T::zero() || !x.is_finite() {
        return Err(BesselError::Domain(x.to_f64().unwrap_or(f64::NAN)));
    }
    if x == T::zero() {
        return if nu == T::zero() {
            Ok(T::one())
        } else if nu > T::zero() {
            Ok(T::zero())
        } else {
            Err(BesselError::Overflow)
        };
    }
    Ok(bessel_jy(nu, x)?.j)
}

pub fn bessel_y<T: BesselFloat>(nu: T, x: T) -> Result<T> {
    Ok(bessel_jy(nu, x)?.y)
}

/// `I_ν, K_ν` and partners for x > 0, optionally exponentially scaled.
pub fn modified_pair<T: BesselFloat>(nu: T, x: T, scaled: bool) -> Result<ModifiedPair<T>> {
    let nu = check_order(nu)?;
    if !(x > T::zero()) || !x.is_finite() {
        return Err(BesselError::Domain(x.to_f64().unwrap_or(f64::NAN)));
    }
    let (mut i_val, mut k_val, mut i_next, mut k_next) = if nu >= T::zero() {
        real::ik_scaled(nu, x)?
    } else {
        let mu = -nu;
        let (im, km, _, _) = real::ik_scaled(mu, x)?;
        let extra = c::<T>(2.0) / T::PI() * (mu * T::PI()).sin() * (-(x + x)).exp() * km;
        let (i1, k1, _, _) = real::ik_scaled(nu + T::one(), x)?;
        (im + extra, km, i1, k1)
    };
    if !scaled {
        let ex = x.exp();
        if !ex.is_finite() {
            return Err(BesselError::Overflow);
        }
        i_val = i_val * ex;
        i_next = i_next * ex;
        k_val = k_val / ex;
        k_next = k_next / ex;
        if !i_val.is_finite() || !i_next.is_finite() {
            return Err(BesselError::Overflow);
        }
    }
    Ok(ModifiedPair { x, i_val, k_val, i_next, k_next, scaled })
}

fn value_at_zero<T: BesselFloat>(nu: T) -> Result<T> {
    if nu == T::zero() {
        Ok(T::one())
    } else if nu > T::zero() {
        Ok(T::zero())
    } else {
        Err(BesselError::Overflow)
    }
}

pub fn bessel_i<T: BesselFloat>(nu: T, x: T) -> Result<T> {
    let nu = check_order(nu)?;
    if x == T::zero() {
        return value_at_zero(nu);
    }
    Ok(modified_pair(nu, x, false)?.i_val)
}

pub fn bessel_k<T: BesselFloat>(nu: T, x: T) -> Result<T> {
    Ok(modified_pair(nu, x, false)?.k_val)
}

/// `e^{−x} I_ν(x)`.
pub fn bessel_i_scaled<T: BesselFloat>(nu: T, x: T) -> Result<T> {
    let nu = check_order(nu)?;
    if x == T::zero() {
        return value_at_zero(nu);
    }
    Ok(modified_pair(nu, x, true)?.i_val)
}

/// `e^{x} K_ν(x)`.
pub fn bessel_k_scaled<T: BesselFloat>(nu: T, x: T) -> Result<T> {
    Ok(modified_pair(nu, x, true)?.k_val)
}

/// `J_ν(iy) = e^{iνπ/2} I_ν(y)` and `W_ν(iy) = −(2/π) e^{−iνπ/2} K_ν(y)`
/// for y ≥ 0, with the order-(ν+1) partners. When `scaled`, the factor
/// `e^{y}` is split off into `log_scale`.
pub fn eval_on_imaginary<T: BesselFloat>(nu: T, y: T, scaled: bool) -> Result<ImaginaryPair<T>> {
    let nu = check_order(nu)?;
    if y < T::zero() || !y.is_finite() {
        return Err(BesselError::Domain(y.to_f64().unwrap_or(f64::NAN)));
    }
    let half_pi = T::FRAC_PI_2();
    let phase = |a: T| Complex::from_polar(T::one(), a);
    let two_over_pi = c::<T>(2.0) / T::PI();
    if y == T::zero() {
        let inf = Complex::new(-T::infinity(), T::zero());
        return Ok(ImaginaryPair {
            j: phase(nu * half_pi) * value_at_zero(nu)?,
            w: inf,
            j_next: Complex::new(T::zero(), T::zero()),
            w_next: inf,
            log_scale: T::zero(),
        });
    }
    let m = modified_pair(nu, y, true)?;
    let nu1 = nu + T::one();
    let mut out = ImaginaryPair {
        j: phase(nu * half_pi) * m.i_val,
        w: phase(-nu * half_pi) * (-two_over_pi * m.k_val),
        j_next: phase(nu1 * half_pi) * m.i_next,
        w_next: phase(-nu1 * half_pi) * (-two_over_pi * m.k_next),
        log_scale: y,
    };
    if !scaled {
        let e = y.exp();
        if !e.is_finite() {
            return Err(BesselError::Overflow);
        }
        out.j = out.j * e;
        out.j_next = out.j_next * e;
        out.w = out.w / e;
        out.w_next = out.w_next / e;
        out.log_scale = T::zero();
    }
    Ok(out)
}

pub type BesselPair64 = BesselPair<f64>;
pub type ModifiedPair64 = ModifiedPair<f64>;
pub type ImaginaryPair64 = ImaginaryPair<f64>;
pub type BesselOrder64 = BesselOrder<f64>;
