//! Truncated Taylor series ("jets") over real or complex scalars.
//!
//! A `Jet` of order K stores `c[0..=K]` for `f(x₀ + Δ) = Σ c_k Δ^k + O(Δ^{K+1})`.

use num_complex::ComplexFloat;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub trait JetScalar: ComplexFloat<Real = f64> + std::fmt::Debug {
    fn real(x: f64) -> Self;
}

impl JetScalar for f64 {
    fn real(x: f64) -> Self {
        x
    }
}

impl JetScalar for num_complex::Complex64 {
    fn real(x: f64) -> Self {
        num_complex::Complex64::new(x, 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Jet<S> {
    pub c: Vec<S>,
}

impl<S: JetScalar> Jet<S> {
    pub fn constant(v: S, order: usize) -> Self {
        let mut c = vec![S::zero(); order + 1];
        c[0] = v;
        Self { c }
    }

    /// The identity map `x₀ + Δ` expanded at `x₀`.
    pub fn variable(x0: S, order: usize) -> Self {
        let mut j = Self::constant(x0, order);
        if order >= 1 {
            j.c[1] = S::one();
        }
        j
    }

    pub fn from_coeffs(c: Vec<S>) -> Self {
        assert!(!c.is_empty(), "jet needs at least one coefficient");
        Self { c }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn value(&self) -> S {
        self.c[0]
    }

    pub fn coeff(&self, k: usize) -> S {
        self.c.get(k).copied().unwrap_or_else(S::zero)
    }

    /// k-th derivative at the expansion point.
    pub fn derivative_at(&self, k: usize) -> S {
        let mut f = 1.0;
        for i in 2..=k {
            f *= i as f64;
        }
        self.coeff(k) * S::real(f)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut c = self.c.clone();
        c.resize(order + 1, S::zero());
        Self { c }
    }

    fn zip_order(&self, other: &Self) -> usize {
        self.order().min(other.order())
    }

    pub fn scale(&self, s: S) -> Self {
        Self {
            c: self.c.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn add_scalar(&self, s: S) -> Self {
        let mut r = self.clone();
        r.c[0] = r.c[0] + s;
        r
    }

    pub fn recip(&self) -> Self {
        let a = &self.c;
        let n = a.len();
        let mut b = vec![S::zero(); n];
        b[0] = S::one() / a[0];
        for k in 1..n {
            let mut s = S::zero();
            for j in 1..=k {
                s = s + a[j] * b[k - j];
            }
            b[k] = -s * b[0];
        }
        Self { c: b }
    }

    /// `self^r` for real `r`, principal branch at the expansion point.
    pub fn powf(&self, r: f64) -> Self {
        let a = &self.c;
        let n = a.len();
        let mut b = vec![S::zero(); n];
        b[0] = a[0].powf(r);
        for k in 1..n {
            let mut s = S::zero();
            for j in 1..=k {
                s = s + a[j] * b[k - j] * S::real(r * j as f64 - (k - j) as f64);
            }
            b[k] = s / (a[0] * S::real(k as f64));
        }
        Self { c: b }
    }

    pub fn sqrt(&self) -> Self {
        let mut r = self.powf(0.5);
        r.c[0] = self.c[0].sqrt();
        r
    }

    pub fn exp(&self) -> Self {
        let a = &self.c;
        let n = a.len();
        let mut b = vec![S::zero(); n];
        b[0] = a[0].exp();
        for k in 1..n {
            let mut s = S::zero();
            for j in 1..=k {
                s = s + a[j] * b[k - j] * S::real(j as f64);
            }
            b[k] = s / S::real(k as f64);
        }
        Self { c: b }
    }

    pub fn ln(&self) -> Self {
        let a = &self.c;
        let n = a.len();
        let mut b = vec![S::zero(); n];
        b[0] = a[0].ln();
        for k in 1..n {
            let mut s = S::zero();
            for j in 1..k {
                s = s + b[j] * a[k - j] * S::real(j as f64);
            }
            b[k] = (a[k] - s / S::real(k as f64)) / a[0];
        }
        Self { c: b }
    }

    pub fn sin_cos(&self) -> (Self, Self) {
        let a = &self.c;
        let n = a.len();
        let mut s = vec![S::zero(); n];
        let mut c = vec![S::zero(); n];
        s[0] = a[0].sin();
        c[0] = a[0].cos();
        for k in 1..n {
            let mut ss = S::zero();
            let mut cc = S::zero();
            for j in 1..=k {
                let w = a[j] * S::real(j as f64);
                ss = ss + w * c[k - j];
                cc = cc + w * s[k - j];
            }
            s[k] = ss / S::real(k as f64);
            c[k] = -cc / S::real(k as f64);
        }
        (Self { c: s }, Self { c })
    }

    /// `Σ self.c[k]·inner^k`; `inner` must vanish at the expansion point.
    pub fn compose(&self, inner: &Self) -> Self {
        let order = inner.order();
        let mut acc = Self::constant(*self.c.last().expect("non-empty"), order);
        for k in (0..self.c.len() - 1).rev() {
            acc = &acc * inner;
            acc.c[0] = acc.c[0] + self.c[k];
        }
        acc
    }

    /// d/dΔ, dropping one order.
    pub fn derivative(&self) -> Self {
        if self.c.len() == 1 {
            return Self::constant(S::zero(), 0);
        }
        Self {
            c: (1..self.c.len())
                .map(|k| self.c[k] * S::real(k as f64))
                .collect(),
        }
    }

    /// Antiderivative with value `c0` at the expansion point, gaining one order.
    pub fn integral(&self, c0: S) -> Self {
        let mut c = Vec::with_capacity(self.c.len() + 1);
        c.push(c0);
        for (k, &x) in self.c.iter().enumerate() {
            c.push(x / S::real((k + 1) as f64));
        }
        Self { c }
    }

    /// `self / Δ` for a jet whose constant term is (numerically) zero.
    pub fn div_by_variable(&self) -> Self {
        Self {
            c: self.c[1..].to_vec(),
        }
    }
}

impl Jet<f64> {
    pub fn to_complex(&self) -> Jet<num_complex::Complex64> {
        Jet {
            c: self
                .c
                .iter()
                .map(|&x| num_complex::Complex64::new(x, 0.0))
                .collect(),
        }
    }
}

impl<S: JetScalar> Add for &Jet<S> {
    type Output = Jet<S>;
    fn add(self, o: &Jet<S>) -> Jet<S> {
        let n = self.zip_order(o) + 1;
        Jet {
            c: (0..n).map(|k| self.c[k] + o.c[k]).collect(),
        }
    }
}

impl<S: JetScalar> Sub for &Jet<S> {
    type Output = Jet<S>;
    fn sub(self, o: &Jet<S>) -> Jet<S> {
        let n = self.zip_order(o) + 1;
        Jet {
            c: (0..n).map(|k| self.c[k] - o.c[k]).collect(),
        }
    }
}

impl<S: JetScalar> Mul for &Jet<S> {
    type Output = Jet<S>;
    fn mul(self, o: &Jet<S>) -> Jet<S> {
        let n = self.zip_order(o) + 1;
        let mut c = vec![S::zero(); n];
        for (i, &a) in self.c.iter().take(n).enumerate() {
            for (j, &b) in o.c.iter().take(n - i).enumerate() {
                c[i + j] = c[i + j] + a * b;
            }
        }
        Jet { c }
    }
}

impl<S: JetScalar> Div for &Jet<S> {
    type Output = Jet<S>;
    fn div(self, o: &Jet<S>) -> Jet<S> {
        self * &o.recip()
    }
}

impl<S: JetScalar> Neg for &Jet<S> {
    type Output = Jet<S>;
    fn neg(self) -> Jet<S> {
        Jet {
            c: self.c.iter().map(|&x| -x).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<S: JetScalar> $tr for Jet<S> {
            type Output = Jet<S>;
            fn $m(self, o: Jet<S>) -> Jet<S> {
                (&self).$m(&o)
            }
        }
        impl<S: JetScalar> $tr<&Jet<S>> for Jet<S> {
            type Output = Jet<S>;
            fn $m(self, o: &Jet<S>) -> Jet<S> {
                (&self).$m(o)
            }
        }
        impl<S: JetScalar> $tr<Jet<S>> for &Jet<S> {
            type Output = Jet<S>;
            fn $m(self, o: Jet<S>) -> Jet<S> {
                self.$m(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl<S: JetScalar> Neg for Jet<S> {
    type Output = Jet<S>;
    fn neg(self) -> Jet<S> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn exp_of_variable_is_factorial_series() {
        let j = Jet::variable(0.3f64, 8).exp();
        let mut f = 1.0;
        for k in 0..=8 {
            if k > 0 {
                f *= k as f64;
            }
            assert!(close(j.c[k], 0.3f64.exp() / f, 1e-14));
        }
    }

    #[test]
    fn ln_inverts_exp() {
        let x = Jet::from_coeffs(vec![0.7, -0.2, 0.5, 0.1, -0.3]);
        let y = x.exp().ln();
        for k in 0..5 {
            assert!(close(y.c[k], x.c[k], 1e-13));
        }
    }

    #[test]
    fn powf_matches_repeated_product() {
        let x = Jet::from_coeffs(vec![1.3, 0.4, -0.2, 0.7, 0.05]);
        let cube = &(&x * &x) * &x;
        let p = x.powf(3.0);
        for k in 0..5 {
            assert!(close(p.c[k], cube.c[k], 1e-13));
        }
        let r = x.sqrt();
        let back = &r * &r;
        for k in 0..5 {
            assert!(close(back.c[k], x.c[k], 1e-13));
        }
    }

    #[test]
    fn sin_cos_pythagoras() {
        let x = Jet::from_coeffs(vec![0.9, 1.1, -0.4, 0.2, 0.3, -0.1]);
        let (s, c) = x.sin_cos();
        let one = &(&s * &s) + &(&c * &c);
        assert!(close(one.c[0], 1.0, 1e-15));
        for k in 1..6 {
            assert!(one.c[k].abs() < 1e-13);
        }
    }

    #[test]
    fn compose_with_shift() {
        // exp(x) around 0 composed with Δ ↦ 2Δ gives exp(2Δ)
        let outer = Jet::variable(0.0f64, 6).exp();
        let inner = Jet::from_coeffs(vec![0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let r = outer.compose(&inner);
        let direct = Jet::from_coeffs(vec![0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0]).exp();
        for k in 0..7 {
            assert!(close(r.c[k], direct.c[k], 1e-14));
        }
    }

    #[test]
    fn complex_principal_power() {
        let x = Jet::variable(Complex64::new(-2.0, 0.0), 3);
        let p = x.powf(0.5);
        assert!((p.c[0] - Complex64::new(0.0, 2f64.sqrt())).norm() < 1e-15);
        // d/dx x^{1/2} = x^{-1/2}/2
        let d = Complex64::new(-2.0, 0.0).powf(-0.5) * 0.5;
        assert!((p.c[1] - d).norm() < 1e-15);
    }

    #[test]
    fn derivative_and_integral_roundtrip() {
        let x = Jet::from_coeffs(vec![1.0, 2.0, 3.0, 4.0]);
        let y = x.derivative().integral(1.0);
        assert_eq!(y.c, x.c);
    }
}
