#![allow(dead_code)]

use asymptotic_evaluator::Approximant;
use bessel_kernel::gamma::ln_gamma;
use transition_map::{FrameOptions, RecurrenceSystem};

/// `A_n·n` and `B_n` series in `1/n` for the α = 0, m = 1, q = 1 Laguerre
/// weight, read off the exact coefficients at 60 digits.
pub const ALPHA: [f64; 5] = [-1.0, 0.5, -0.125, -0.0625, 0.0390625];
pub const BETA: [f64; 5] = [2.0, 0.0, -0.25, 0.25, -0.015625];

pub fn laguerre_system() -> RecurrenceSystem {
    RecurrenceSystem::new(1.0, ALPHA.to_vec(), BETA.to_vec()).unwrap()
}

pub fn laguerre(p: usize) -> Approximant {
    Approximant::build(&laguerre_system(), FrameOptions::default(), p).unwrap()
}

pub fn ln_k(n: f64) -> f64 {
    0.5 * (2.0 * ln_gamma((n + 1.0) / 2.0) - 2f64.ln() - 2.0 * ln_gamma(n / 2.0 + 1.0))
}

/// Exact `(A_n, B_n)` of the normalised Laguerre recurrence.
pub fn exact_ab(n: u64) -> (f64, f64) {
    let nf = n as f64;
    let ratio = (ln_k(nf) - ln_k(nf + 1.0)).exp();
    let b = nf + 1.0;
    (-ratio / b, (2.0 * nf + 1.0) * ratio / b)
}

/// `(sign, ln|𝒫_n(x)|)` with `𝒫_n = e^{−x/2} L_n(x)/K_n`, from the
/// Laguerre three-term recurrence with running rescaling.
pub fn oracle(n: u64, x: f64) -> (f64, f64) {
    let (mut a, mut b) = (1.0f64, 1.0 - x);
    let mut ls = 0.0;
    for k in 1..n {
        let kf = k as f64;
        let c = ((2.0 * kf + 1.0 - x) * b - kf * a) / (kf + 1.0);
        a = b;
        b = c;
        let m = a.abs().max(b.abs());
        if m > 1e100 {
            a /= m;
            b /= m;
            ls += m.ln();
        }
    }
    (b.signum(), ls + b.abs().ln() - 0.5 * x - ln_k(n as f64))
}

/// `𝒫_n` on the P normalisation, `√2·𝒫_n`, as `(value, log_scale)`.
pub fn reference(n: u64, t: f64) -> (f64, f64) {
    let x = (n as f64 + 0.5) * t;
    let (s, l) = oracle(n, x);
    (s * std::f64::consts::SQRT_2, l)
}

/// Relative error of P against the reference, as the sup over a window of
/// one local period of the Bessel phase around t, relative to the sup of the
/// reference there. On t ≤ 0 this is the pointwise error.
pub fn local_rel_error(ap: &Approximant, n: u64, t: f64) -> f64 {
    let big_n = n as f64 + ap.frame.tau0;
    let ts: Vec<f64> = if t > 0.0 {
        let zp = ap.frame.zeta_prime(t).unwrap().re;
        let period = 2.0 * std::f64::consts::PI / (big_n * zp);
        (0..9).map(|k| t + period * (k as f64 / 8.0 - 0.5)).collect()
    } else {
        vec![t]
    };
    let (mut err, mut mag) = (0.0f64, 0.0f64);
    for &s in &ts {
        let r = ap.evaluate(n, s).unwrap();
        let (v, l) = reference(n, s);
        let o = v * (l - r.log_scale).exp();
        err = err.max((r.p_value - o).abs());
        mag = mag.max(o.abs());
    }
    err / mag
}
