//! Piecewise Chebyshev representations with automatic degree growth and
//! bisection.
//!
//! Samples are taken at first-kind points (never at a piece endpoint), with
//! `n = 2·3^k` so that refinement by tripling reuses every earlier sample and
//! no node ever lands on a piece midpoint.

use crate::jet::Jet;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChebBuildError<E> {
    #[error("Chebyshev construction did not converge on [{lo}, {hi}]")]
    NotConverged { lo: f64, hi: f64 },
    #[error("sampled function returned a non-finite value at {0}")]
    NonFinite(f64),
    #[error("sampled function failed: {0}")]
    Function(E),
}

#[derive(Debug, Clone, Copy)]
pub struct ChebOptions {
    /// Relative accuracy target, measured against the sample magnitude.
    pub tol: f64,
    /// Absolute floor for the accuracy target (functions crossing zero).
    pub abs_floor: f64,
    pub max_coeffs: usize,
    pub min_width: f64,
}

impl Default for ChebOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            abs_floor: 1e-300,
            max_coeffs: 2048,
            min_width: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChebPiece {
    pub lo: f64,
    pub hi: f64,
    pub coeffs: Vec<f64>,
}

impl ChebPiece {
    fn to_unit(&self, x: f64) -> f64 {
        (2.0 * x - self.lo - self.hi) / (self.hi - self.lo)
    }

    pub fn eval(&self, x: f64) -> f64 {
        clenshaw(&self.coeffs, self.to_unit(x))
    }

    pub fn derivative(&self) -> ChebPiece {
        let a = &self.coeffs;
        let n = a.len();
        let scale = 2.0 / (self.hi - self.lo);
        if n <= 1 {
            return ChebPiece {
                lo: self.lo,
                hi: self.hi,
                coeffs: vec![0.0],
            };
        }
        let mut d = vec![0.0; n + 1];
        for k in (1..n).rev() {
            d[k - 1] = d[k + 1] + 2.0 * k as f64 * a[k];
        }
        d[0] *= 0.5;
        d.truncate(n - 1);
        ChebPiece {
            lo: self.lo,
            hi: self.hi,
            coeffs: d.into_iter().map(|v| v * scale).collect(),
        }
    }

    /// Antiderivative vanishing at `lo`.
    pub fn antiderivative(&self) -> ChebPiece {
        let a = &self.coeffs;
        let n = a.len();
        let scale = 0.5 * (self.hi - self.lo);
        let get = |k: usize| if k < n { a[k] } else { 0.0 };
        let mut b = vec![0.0; n + 1];
        for (k, bk) in b.iter_mut().enumerate().skip(1) {
            let prev = if k == 1 { 2.0 * get(0) } else { get(k - 1) };
            *bk = scale * (prev - get(k + 1)) / (2.0 * k as f64);
        }
        let mut at_lo = 0.0;
        for (k, &bk) in b.iter().enumerate().skip(1) {
            at_lo += if k % 2 == 0 { bk } else { -bk };
        }
        b[0] = -at_lo;
        ChebPiece {
            lo: self.lo,
            hi: self.hi,
            coeffs: b,
        }
    }
}

fn clenshaw(c: &[f64], x: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &ck in c.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    x * b1 - b2 + c[0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChebFun {
    pub pieces: Vec<ChebPiece>,
    pub tol: f64,
}

/// Coefficients from values at first-kind points `cos(π(k+½)/n)`.
fn coefficients(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let table: Vec<f64> = (0..4 * n)
        .map(|m| (PI * m as f64 / (2 * n) as f64).cos())
        .collect();
    let mut c = vec![0.0; n];
    for (j, cj) in c.iter_mut().enumerate() {
        let mut s = 0.0;
        for (k, &v) in values.iter().enumerate() {
            s += v * table[(j * (2 * k + 1)) % (4 * n)];
        }
        *cj = 2.0 * s / n as f64;
    }
    c[0] *= 0.5;
    c
}

fn node(n: usize, k: usize) -> f64 {
    (PI * (k as f64 + 0.5) / n as f64).cos()
}

fn fit_piece<E, F: FnMut(f64) -> Result<f64, E>>(
    f: &mut F,
    lo: f64,
    hi: f64,
    opts: &ChebOptions,
) -> Result<Option<ChebPiece>, ChebBuildError<E>> {
    let map = |u: f64| 0.5 * (lo + hi) + 0.5 * (hi - lo) * u;
    let mut sample = |u: f64| -> Result<f64, ChebBuildError<E>> {
        let x = map(u);
        let v = f(x).map_err(ChebBuildError::Function)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(ChebBuildError::NonFinite(x))
        }
    };
    let mut n = 18;
    let mut values: Vec<f64> = (0..n).map(|k| sample(node(n, k))).collect::<Result<_, _>>()?;
    loop {
        let c = coefficients(&values);
        let vscale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let thresh = (opts.tol * vscale).max(opts.abs_floor);
        let tail = (n / 6).max(4);
        if c[n - tail..].iter().all(|v| v.abs() <= thresh) {
            let mut keep = n;
            while keep > 1 && c[keep - 1].abs() <= 0.01 * thresh {
                keep -= 1;
            }
            return Ok(Some(ChebPiece {
                lo,
                hi,
                coeffs: c[..keep].to_vec(),
            }));
        }
        if 3 * n > opts.max_coeffs {
            return Ok(None);
        }
        let m = 3 * n;
        let mut next = vec![0.0; m];
        for (j, slot) in next.iter_mut().enumerate() {
            if (2 * j + 1) % 3 == 0 {
                *slot = values[(2 * j + 1) / 3 / 2];
            } else {
                *slot = sample(node(m, j))?;
            }
        }
        values = next;
        n = m;
    }
}

impl ChebFun {
    pub fn try_build<E, F: FnMut(f64) -> Result<f64, E>>(
        mut f: F,
        breakpoints: &[f64],
        opts: ChebOptions,
    ) -> Result<Self, ChebBuildError<E>> {
        assert!(breakpoints.len() >= 2, "need a domain");
        let mut pieces = Vec::new();
        for w in breakpoints.windows(2) {
            let mut stack = vec![(w[0], w[1])];
            let mut done = Vec::new();
            while let Some((lo, hi)) = stack.pop() {
                match fit_piece(&mut f, lo, hi, &opts)? {
                    Some(p) => done.push(p),
                    None => {
                        if hi - lo < opts.min_width {
                            return Err(ChebBuildError::NotConverged { lo, hi });
                        }
                        let mid = 0.5 * (lo + hi);
                        stack.push((mid, hi));
                        stack.push((lo, mid));
                    }
                }
            }
            pieces.extend(done);
        }
        pieces.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        Ok(Self {
            pieces,
            tol: opts.tol,
        })
    }

    pub fn build<F: FnMut(f64) -> f64>(
        mut f: F,
        breakpoints: &[f64],
        opts: ChebOptions,
    ) -> Result<Self, ChebBuildError<std::convert::Infallible>> {
        Self::try_build(|x| Ok(f(x)), breakpoints, opts)
    }

    pub fn constant(v: f64, lo: f64, hi: f64) -> Self {
        Self {
            pieces: vec![ChebPiece {
                lo,
                hi,
                coeffs: vec![v],
            }],
            tol: 0.0,
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        (
            self.pieces[0].lo,
            self.pieces.last().expect("non-empty").hi,
        )
    }

    fn piece_index(&self, x: f64) -> usize {
        let idx = self.pieces.partition_point(|p| p.lo <= x);
        idx.saturating_sub(1).min(self.pieces.len() - 1)
    }

    /// Evaluates the piece containing `x`; outside the domain the nearest
    /// end piece is extrapolated.
    pub fn eval(&self, x: f64) -> f64 {
        self.pieces[self.piece_index(x)].eval(x)
    }

    pub fn derivative(&self) -> Self {
        Self {
            pieces: self.pieces.iter().map(ChebPiece::derivative).collect(),
            tol: self.tol,
        }
    }

    /// Antiderivative vanishing at the left end of the domain.
    pub fn antiderivative(&self) -> Self {
        let mut acc = 0.0;
        let mut pieces = Vec::with_capacity(self.pieces.len());
        for p in &self.pieces {
            let mut q = p.antiderivative();
            q.coeffs[0] += acc;
            acc = q.eval(q.hi);
            pieces.push(q);
        }
        Self {
            pieces,
            tol: self.tol,
        }
    }

    pub fn total_coeffs(&self) -> usize {
        self.pieces.iter().map(|p| p.coeffs.len()).sum()
    }

    /// Taylor jet at `x` from successive derivative representations.
    pub fn jet(derivs: &[ChebFun], x: f64) -> Jet<f64> {
        let mut c = Vec::with_capacity(derivs.len());
        let mut fact = 1.0;
        for (k, d) in derivs.iter().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            c.push(d.eval(x) / fact);
        }
        Jet::from_coeffs(c)
    }

    /// `[f, f′, …, f^{(k)}]`.
    pub fn derivative_ladder(&self, k: usize) -> Vec<ChebFun> {
        let mut out = vec![self.clone()];
        for _ in 0..k {
            let d = out.last().expect("non-empty").derivative();
            out.push(d);
        }
        out
    }
}
