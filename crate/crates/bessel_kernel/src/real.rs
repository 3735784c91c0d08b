//! J, Y, I, K on the positive real axis for order ν ≥ 0.
//!
//! Moderate arguments use Temme's series (x < 2) or Steed's complex continued
//! fraction (x ≥ 2) for the fractional order μ = ν − ⌊ν + ½⌋-ish, a ratio
//! continued fraction for J (resp. I), and the Wronskian to tie them together.
//! Large arguments use the Hankel expansions truncated at their smallest term.

use crate::gamma::temme_gammas;
use crate::{c, BesselError, BesselFloat};

const MAXIT: usize = 200_000;
const XMIN: f64 = 2.0;

fn fpmin<T: BesselFloat>() -> T {
    T::min_positive_value() / T::epsilon()
}

/// Threshold beyond which the Hankel expansions are used.
pub(crate) fn asymptotic_threshold<T: BesselFloat>(nu: T) -> T {
    let a = c::<T>(25.0);
    let b = c::<T>(2.0) * nu * nu;
    if a > b {
        a
    } else {
        b
    }
}

/// Coefficients `a_k(ν) = Π_{j=1}^k (4ν² − (2j−1)²) / (k! 8^k)` and the
/// truncated series `Σ (sign)^k a_k / x^k` stopped at the smallest term.
/// Returns the even- and odd-indexed partial sums separately.
fn hankel_sums<T: BesselFloat>(nu: T, x: T, alternate: bool) -> (T, T) {
    let mu = c::<T>(4.0) * nu * nu;
    let eight_x = c::<T>(8.0) * x;
    let mut term = T::one();
    let mut even = T::one();
    let mut odd = T::zero();
    let mut last = T::infinity();
    for k in 1..200 {
        let kk = c::<T>(k as f64);
        let odd_sq = c::<T>((2 * k - 1) as f64).powi(2);
        let next = term * (mu - odd_sq) / (kk * eight_x);
        let next = if alternate { -next } else { next };
        if next.abs() >= last || next.abs() < T::epsilon() * T::epsilon() {
            break;
        }
        last = next.abs();
        term = next;
        if k % 2 == 0 {
            even = even + term;
        } else {
            odd = odd + term;
        }
        if term.abs() < T::epsilon() * c::<T>(1e-3) * (even.abs() + odd.abs()) {
            break;
        }
    }
    (even, odd)
}

/// Large-x J_ν and Y_ν.
pub(crate) fn jy_hankel<T: BesselFloat>(nu: T, x: T) -> (T, T) {
    // P = Σ (−1)^k a_{2k}/x^{2k},  Q = Σ (−1)^k a_{2k+1}/x^{2k+1}
    let (p, q) = hankel_pq(nu, x);
    let quarter_pi = T::FRAC_PI_4();
    let omega = x - (nu * T::FRAC_PI_2() + quarter_pi);
    let amp = (c::<T>(2.0) / (T::PI() * x)).sqrt();
    let (s, co) = omega.sin_cos();
    (amp * (p * co - q * s), amp * (p * s + q * co))
}

fn hankel_pq<T: BesselFloat>(nu: T, x: T) -> (T, T) {
    let mu = c::<T>(4.0) * nu * nu;
    let eight_x = c::<T>(8.0) * x;
    let mut term = T::one();
    let mut p = T::one();
    let mut q = T::zero();
    let mut last = T::infinity();
    for k in 1..200 {
        let kk = c::<T>(k as f64);
        let odd_sq = c::<T>((2 * k - 1) as f64).powi(2);
        let next = term * (mu - odd_sq) / (kk * eight_x);
        if next.abs() >= last {
            break;
        }
        last = next.abs();
        term = next;
        // sign pattern (−1)^{⌊k/2⌋}
        let signed = if (k / 2) % 2 == 0 { term } else { -term };
        if k % 2 == 0 {
            p = p + signed;
        } else {
            q = q + signed;
        }
        if term.abs() < T::epsilon() * c::<T>(1e-3) {
            break;
        }
    }
    (p, q)
}

/// Large-x `(e^{−x} I_ν, e^{x} K_ν)`.
pub(crate) fn ik_hankel_scaled<T: BesselFloat>(nu: T, x: T) -> (T, T) {
    let (ie, io) = hankel_sums(nu, x, true);
    let (ke, ko) = hankel_sums(nu, x, false);
    let two_pi = T::PI() + T::PI();
    let i = (ie + io) / (two_pi * x).sqrt();
    let k = (T::PI() / (c::<T>(2.0) * x)).sqrt() * (ke + ko);
    (i, k)
}

/// `(J_ν, Y_ν, J_{ν+1}, Y_{ν+1})` for ν ≥ 0, x > 0.
pub(crate) fn jy<T: BesselFloat>(nu: T, x: T) -> Result<(T, T, T, T), BesselError> {
    debug_assert!(nu >= T::zero() && x > T::zero());
    if x >= asymptotic_threshold(nu + T::one()) {
        let (j0, y0) = jy_hankel(nu, x);
        let (j1, y1) = jy_hankel(nu + T::one(), x);
        return Ok((j0, y0, j1, y1));
    }
    steed_jy(nu, x)
}

fn to_usize<T: BesselFloat>(v: T) -> usize {
    v.to_usize().unwrap_or(0)
}

fn steed_jy<T: BesselFloat>(xnu: T, x: T) -> Result<(T, T, T, T), BesselError> {
    let eps = T::epsilon();
    let fpm = fpmin::<T>();
    let half = c::<T>(0.5);
    let two = c::<T>(2.0);
    let xmin = c::<T>(XMIN);
    let nl = if x < xmin {
        to_usize((xnu + half).floor())
    } else {
        let v = (xnu - x + c::<T>(1.5)).floor();
        if v > T::zero() {
            to_usize(v)
        } else {
            0
        }
    };
    let xmu = xnu - c::<T>(nl as f64);
    let xmu2 = xmu * xmu;
    let xi = T::one() / x;
    let xi2 = two * xi;
    let w = xi2 / T::PI();

    // CF1 for J'_ν/J_ν
    let mut isign = T::one();
    let mut h = xnu * xi;
    if h < fpm {
        h = fpm;
    }
    let mut b = xi2 * xnu;
    let mut d = T::zero();
    let mut cc = h;
    let mut converged = false;
    for _ in 0..MAXIT {
        b = b + xi2;
        d = b - d;
        if d.abs() < fpm {
            d = fpm;
        }
        cc = b - T::one() / cc;
        if cc.abs() < fpm {
            cc = fpm;
        }
        d = T::one() / d;
        let del = cc * d;
        h = del * h;
        if d < T::zero() {
            isign = -isign;
        }
        if (del - T::one()).abs() < eps {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(BesselError::NoConvergence);
    }

    let mut rjl = isign * fpm;
    let mut rjpl = h * rjl;
    let rjl1 = rjl;
    let rjp1 = rjpl;
    let mut fact = xnu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact = fact - xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if rjl == T::zero() {
        rjl = eps;
    }
    let f = rjpl / rjl;

    let (rjmu, rymu, rymup, ry1);
    if x < xmin {
        let x2 = half * x;
        let pimu = T::PI() * xmu;
        let fct = if pimu.abs() < eps { T::one() } else { pimu / pimu.sin() };
        let d0 = -x2.ln();
        let e0 = xmu * d0;
        let fct2 = if e0.abs() < eps { T::one() } else { e0.sinh() / e0 };
        let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
        let mut ff = two / T::PI() * fct * (gam1 * e0.cosh() + gam2 * fct2 * d0);
        let e = e0.exp();
        let mut p = e / (gampl * T::PI());
        let mut q = T::one() / (e * T::PI() * gammi);
        let pimu2 = half * pimu;
        let fct3 = if pimu2.abs() < eps { T::one() } else { pimu2.sin() / pimu2 };
        let r = T::PI() * pimu2 * fct3 * fct3;
        let mut cterm = T::one();
        let dd = -x2 * x2;
        let mut sum = ff + r * q;
        let mut sum1 = p;
        let mut ok = false;
        for i in 1..MAXIT {
            let fi = c::<T>(i as f64);
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            cterm = cterm * dd / fi;
            p = p / (fi - xmu);
            q = q / (fi + xmu);
            let del = cterm * (ff + r * q);
            sum = sum + del;
            let del1 = cterm * p - fi * del;
            sum1 = sum1 + del1;
            if del.abs() < (T::one() + sum.abs()) * eps {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(BesselError::NoConvergence);
        }
        rymu = -sum;
        ry1 = -sum1 * xi2;
        rymup = xmu * xi * rymu - ry1;
        rjmu = w / (rymup - f * rymu);
    } else {
        let mut a = c::<T>(0.25) - xmu2;
        let mut p = -half * xi;
        let mut q = T::one();
        let br = two * x;
        let mut bi = two;
        let mut fct = a * xi / (p * p + q * q);
        let mut cr = br + q * fct;
        let mut ci = bi + p * fct;
        let mut den = br * br + bi * bi;
        let mut dr = br / den;
        let mut di = -bi / den;
        let mut dlr = cr * dr - ci * di;
        let mut dli = cr * di + ci * dr;
        let mut temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        let mut ok = false;
        for i in 2..MAXIT {
            a = a + c::<T>((2 * (i - 1)) as f64);
            bi = bi + two;
            dr = a * dr + br;
            di = a * di + bi;
            if dr.abs() + di.abs() < fpm {
                dr = fpm;
            }
            fct = a / (cr * cr + ci * ci);
            cr = br + cr * fct;
            ci = bi - ci * fct;
            if cr.abs() + ci.abs() < fpm {
                cr = fpm;
            }
            den = dr * dr + di * di;
            dr = dr / den;
            di = -di / den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (dlr - T::one()).abs() + dli.abs() < eps {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(BesselError::NoConvergence);
        }
        let gam = (p - f) / q;
        let mut rj = (w / ((p - f) * gam + q)).sqrt();
        if rjl < T::zero() {
            rj = -rj;
        }
        rjmu = rj;
        rymu = rjmu * gam;
        rymup = rymu * (p + q / gam);
        ry1 = xmu * xi * rymu - rymup;
    }
    let _ = rymup;
    let scale = rjmu / rjl;
    let rj = rjl1 * scale;
    let rjp = rjp1 * scale;
    let mut ym = rymu;
    let mut y1 = ry1;
    for i in 1..=nl {
        let yt = (xmu + c::<T>(i as f64)) * xi2 * y1 - ym;
        ym = y1;
        y1 = yt;
    }
    let j_next = xnu * xi * rj - rjp;
    Ok((rj, ym, j_next, y1))
}

/// `(e^{−x}I_ν, e^{x}K_ν, e^{−x}I_{ν+1}, e^{x}K_{ν+1})` for ν ≥ 0, x > 0.
pub(crate) fn ik_scaled<T: BesselFloat>(nu: T, x: T) -> Result<(T, T, T, T), BesselError> {
    debug_assert!(nu >= T::zero() && x > T::zero());
    if x >= asymptotic_threshold(nu + T::one()) {
        let (i0, k0) = ik_hankel_scaled(nu, x);
        let (i1, k1) = ik_hankel_scaled(nu + T::one(), x);
        return Ok((i0, k0, i1, k1));
    }
    temme_ik(nu, x)
}

fn temme_ik<T: BesselFloat>(xnu: T, x: T) -> Result<(T, T, T, T), BesselError> {
    let eps = T::epsilon();
    let fpm = fpmin::<T>();
    let half = c::<T>(0.5);
    let two = c::<T>(2.0);
    let nl = to_usize((xnu + half).floor());
    let xmu = xnu - c::<T>(nl as f64);
    let xmu2 = xmu * xmu;
    let xi = T::one() / x;
    let xi2 = two * xi;

    // CF1 for I'_ν/I_ν
    let mut h = xnu * xi;
    if h < fpm {
        h = fpm;
    }
    let mut b = xi2 * xnu;
    let mut d = T::zero();
    let mut cc = h;
    let mut ok = false;
    for _ in 0..MAXIT {
        b = b + xi2;
        d = T::one() / (b + d);
        cc = b + T::one() / cc;
        let del = cc * d;
        h = del * h;
        if (del - T::one()).abs() < eps {
            ok = true;
            break;
        }
    }
    if !ok {
        return Err(BesselError::NoConvergence);
    }
    let mut ril = fpm;
    let mut ripl = h * ril;
    let ril1 = ril;
    let rip1 = ripl;
    let mut fact = xnu * xi;
    for _ in 0..nl {
        let ritemp = fact * ril + ripl;
        fact = fact - xi;
        ripl = fact * ritemp + ril;
        ril = ritemp;
    }
    let f = ripl / ril;

    // K_μ, K_{μ+1}, both multiplied by e^{x}
    let (rkmu, rk1);
    if x < c::<T>(XMIN) {
        let x2 = half * x;
        let pimu = T::PI() * xmu;
        let fct = if pimu.abs() < eps { T::one() } else { pimu / pimu.sin() };
        let d0 = -x2.ln();
        let e0 = xmu * d0;
        let fct2 = if e0.abs() < eps { T::one() } else { e0.sinh() / e0 };
        let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
        let mut ff = fct * (gam1 * e0.cosh() + gam2 * fct2 * d0);
        let mut sum = ff;
        let e = e0.exp();
        let mut p = half * e / gampl;
        let mut q = half / (e * gammi);
        let mut cterm = T::one();
        let dd = x2 * x2;
        let mut sum1 = p;
        let mut conv = false;
        for i in 1..MAXIT {
            let fi = c::<T>(i as f64);
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            cterm = cterm * dd / fi;
            p = p / (fi - xmu);
            q = q / (fi + xmu);
            let del = cterm * ff;
            sum = sum + del;
            let del1 = cterm * (p - fi * ff);
            sum1 = sum1 + del1;
            if del.abs() < sum.abs() * eps {
                conv = true;
                break;
            }
        }
        if !conv {
            return Err(BesselError::NoConvergence);
        }
        let ex = x.exp();
        rkmu = sum * ex;
        rk1 = sum1 * xi2 * ex;
    } else {
        let mut bb = two * (T::one() + x);
        let mut dd = T::one() / bb;
        let mut hh = dd;
        let mut delh = dd;
        let mut q1 = T::zero();
        let mut q2 = T::one();
        let a1 = c::<T>(0.25) - xmu2;
        let mut q = a1;
        let mut cterm = a1;
        let mut a = -a1;
        let mut s = T::one() + q * delh;
        let mut conv = false;
        for i in 2..MAXIT {
            let fi = c::<T>(i as f64);
            a = a - c::<T>((2 * (i - 1)) as f64);
            cterm = -a * cterm / fi;
            let qnew = (q1 - bb * q2) / a;
            q1 = q2;
            q2 = qnew;
            q = q + cterm * qnew;
            bb = bb + two;
            dd = T::one() / (bb + a * dd);
            delh = (bb * dd - T::one()) * delh;
            hh = hh + delh;
            let dels = q * delh;
            s = s + dels;
            if (dels / s).abs() < eps {
                conv = true;
                break;
            }
        }
        if !conv {
            return Err(BesselError::NoConvergence);
        }
        hh = a1 * hh;
        rkmu = (T::PI() / (two * x)).sqrt() / s;
        rk1 = rkmu * (xmu + x + half - hh) * xi;
    }
    let rkmup = xmu * xi * rkmu - rk1;
    // Wronskian: I·K scaling cancels, so this I carries e^{−x}
    let rimu = xi / (f * rkmu - rkmup);
    let ri = rimu * ril1 / ril;
    let rip = rimu * rip1 / ril;
    let mut km = rkmu;
    let mut k1 = rk1;
    for i in 1..=nl {
        let kt = (xmu + c::<T>(i as f64)) * xi2 * k1 + km;
        km = k1;
        k1 = kt;
    }
    let i_next = rip - xnu * xi * ri;
    Ok((ri, km, i_next, k1))
}

/// Power series `J_ν(x) = Σ (−x²/4)^k (x/2)^ν / (k! Γ(ν+k+1))`; an independent
/// route used for small arguments and as a cross-check.
pub fn j_series<T: BesselFloat>(nu: T, x: T) -> T {
    series(nu, x, true)
}

/// Power series for I_ν.
pub fn i_series<T: BesselFloat>(nu: T, x: T) -> T {
    series(nu, x, false)
}

fn series<T: BesselFloat>(nu: T, x: T, alternating: bool) -> T {
    let q = c::<T>(0.25) * x * x;
    let q = if alternating { -q } else { q };
    let lead = if x == T::zero() {
        if nu == T::zero() {
            T::one()
        } else {
            T::zero()
        }
    } else {
        (nu * (c::<T>(0.5) * x).ln() - crate::gamma::ln_gamma(nu + T::one())).exp()
    };
    let mut term = T::one();
    let mut sum = T::one();
    for k in 1..500 {
        let kk = c::<T>(k as f64);
        term = term * q / (kk * (nu + kk));
        sum = sum + term;
        if term.abs() < T::epsilon() * sum.abs() * c::<T>(0.01) {
            break;
        }
    }
    lead * sum
}
