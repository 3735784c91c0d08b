mod common;

use std::f64::consts::{FRAC_2_PI, PI};

use asymptotic_evaluator::{CalibrationSample, EvalError, Regime};
use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn p0_matches_reference_at_half() {
    let ap = laguerre(0);
    // z = 0.5 is t = 2 for t₂ = 4
    let e = local_rel_error(&ap, 100, 2.0);
    assert!(e < 0.05, "{e}");
    let e400 = local_rel_error(&ap, 400, 2.0);
    assert!(e400 < e, "{e400} vs {e}");
}

#[test]
fn origin_value_and_continuity() {
    let ap = laguerre(1);
    let n = 120;
    let r0 = ap.evaluate(n, 0.0).unwrap();
    assert_eq!(r0.regime, Regime::OriginWindow);
    // ν = 0, B̂₁(0) = 0: P = N^{1/2} c(0)
    let big_n = n as f64 + 0.5;
    let c0 = ap.frame.normalizer(0.0).unwrap();
    assert!((r0.p_value - big_n.sqrt() * c0).abs() < 1e-9 * r0.p_value.abs());
    // P moves by about N²t near the origin, so continuity is checked on the
    // symmetric second difference: left and right limits of P and of its
    // first-order trend agree.
    let (rp, rm) = (ap.evaluate(n, 1e-8).unwrap(), ap.evaluate(n, -1e-8).unwrap());
    let second = rp.p_value - 2.0 * r0.p_value + rm.p_value;
    assert!(second.abs() < 1e-6 * r0.p_value.abs(), "{second}");
    assert!((rp.p_value - r0.p_value).abs() < 2.0 * big_n * big_n * 1e-8 * r0.p_value.abs());
}

#[test]
fn continuous_across_series_switch() {
    let ap = laguerre(2);
    let n = 80u64;
    let big_n = n as f64 + 0.5;
    for sign in [1.0, -1.0] {
        // |Nζ(t)| = 1 located by bisection
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if big_n * ap.frame.zeta_abs(sign * mid).unwrap() > 1.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let a = ap.evaluate(n, sign * lo).unwrap();
        let b = ap.evaluate(n, sign * hi).unwrap();
        assert_eq!(a.regime, Regime::OriginWindow);
        assert_ne!(b.regime, Regime::OriginWindow);
        let pa = a.p_unscaled();
        let pb = b.p_unscaled();
        assert!((pa - pb).abs() < 1e-12 * pa.abs(), "sign={sign}: {pa} vs {pb}");
        let (qa, qb) = (a.q_unscaled(), b.q_unscaled());
        assert!((qa - qb).norm() < 1e-11 * qa.norm(), "sign={sign}: {qa} vs {qb}");
    }
}

#[test]
fn regimes_by_argument() {
    let ap = laguerre(0);
    assert_eq!(ap.evaluate(100, 2.0).unwrap().regime, Regime::Oscillatory);
    assert_eq!(ap.evaluate(100, -1.0).unwrap().regime, Regime::Negative);
    assert_eq!(ap.evaluate(100, 1e-6).unwrap().regime, Regime::OriginWindow);
    assert!(ap.evaluate(5, 1.0).unwrap().below_n_min);
    assert!(!ap.evaluate(10, 1.0).unwrap().below_n_min);
    assert!(matches!(ap.eval_q(100, 0.0), Err(EvalError::Singular(_))));
    assert!(ap.evaluate(100, 3.999).is_err());
}

#[test]
fn negative_ray_log_magnitude() {
    let ap = laguerre(0);
    let r = ap.evaluate(200, -4.0).unwrap();
    assert!(r.log_scale > 100.0);
    let (v, l) = reference(200, -4.0);
    let ln_ref = v.abs().ln() + l;
    assert!((r.ln_abs_p() - ln_ref).abs() < 0.01 * ln_ref.abs());
}

#[test]
fn recessive_q_matches_leading_form() {
    // Q_n ~ −sqrt(2/π) (4/(ψ² − 4))^{1/4} e^{−N|ζ|} at fixed t < 0
    let ap = laguerre(1);
    let t = -4.0;
    for &n in &[100u64, 200] {
        let r = ap.eval_q(n, t).unwrap();
        let psi = ap.frame.psi(t);
        let lead = -(2.0 / PI).sqrt() * (4.0 / (psi * psi - 4.0)).powf(0.25);
        let ratio = r.q_value.re / lead;
        assert!((ratio - 1.0).abs() < 0.1, "n={n} ratio={ratio}");
        assert_eq!(r.q_value.im, 0.0);
        assert!((r.log_scale - (n as f64 + 0.5) * ap.frame.zeta_abs(t).unwrap()).abs() < 1e-9 * r.log_scale);
    }
}

#[test]
fn wronskian_magnitude_and_sign() {
    let ap = laguerre(1);
    for &z in &[0.3, 0.5, 0.7] {
        let w = ap.wronskian(200, 4.0 * z).unwrap();
        assert!((w.abs() - FRAC_2_PI).abs() < 0.02 * FRAC_2_PI, "z={z} w={w}");
        // P_{n+1}Q_n − P_nQ_{n+1} comes out negative for this pair.
        assert!(w < 0.0);
    }
    let w = ap.wronskian(200, -4.0).unwrap();
    assert!((w.abs() - FRAC_2_PI).abs() < 0.05 * FRAC_2_PI);
}

#[test]
fn wronskian_residual_shrinks_with_n() {
    let ap = laguerre(0);
    let dev: Vec<f64> = [100u64, 200, 400]
        .iter()
        .map(|&n| (ap.wronskian(n, 2.0).unwrap().abs() - FRAC_2_PI).abs())
        .collect();
    assert!(dev[1] < 0.6 * dev[0] && dev[2] < 0.6 * dev[1], "{dev:?}");
}

#[test]
fn recurrence_residual_decays() {
    // Fixed x, exact coefficients; sup over one local period in x around 2N.
    let ap = laguerre(1);
    let mut last = f64::INFINITY;
    for &n in &[50u64, 100, 200] {
        let big_n = n as f64 + 0.5;
        let period = 2.0 * PI / ap.frame.zeta_prime(2.0).unwrap().re;
        let (a, b) = exact_ab(n);
        let (mut res, mut scale) = (0.0f64, 0.0f64);
        for k in 0..9 {
            let x = big_n * (2.0 + period / big_n * (k as f64 / 8.0 - 0.5));
            let p: Vec<f64> = (n - 1..=n + 1).map(|k| ap.evaluate_at_x(k, x).unwrap().p_value).collect();
            res = res.max((p[2] - (a * x + b) * p[1] + p[0]).abs());
            scale = p.iter().fold(scale, |m, v| m.max(v.abs()));
        }
        let rel = res / scale;
        assert!(rel < last, "n={n}: {rel} !< {last}");
        last = rel;
    }
    assert!(last < 1e-5, "{last}");
}

#[test]
fn budget_orders_and_slope() {
    let mut aps = vec![laguerre(0), laguerre(1)];
    for ap in aps.iter_mut() {
        let samples: Vec<CalibrationSample> = [(50u64, 2.0), (50, -2.0)]
            .iter()
            .map(|&(n, t)| {
                let (value, log_scale) = reference(n, t);
                CalibrationSample { n, t, value, log_scale }
            })
            .collect();
        ap.calibrate(&samples).unwrap();
    }
    for &n in &[50u64, 100, 200] {
        let b0 = aps[0].error_budget(n, 1.0).unwrap();
        let b1 = aps[1].error_budget(n, 1.0).unwrap();
        assert!(b1 < b0, "n={n}");
    }
    for ap in &aps {
        let ns = [50.0f64, 100.0, 200.0, 400.0];
        let lb: Vec<f64> = ns.iter().map(|&n| ap.error_budget(n as u64, -4.0).unwrap().ln()).collect();
        let slope = fit_slope(&ns.map(f64::ln), &lb);
        let want = -(ap.order_p as f64 + 1.0);
        assert!((slope - want).abs() <= 0.15 * want.abs(), "p={} slope={slope}", ap.order_p);
    }
}

#[test]
fn budget_dominates_observed_error() {
    let mut ap = laguerre(0);
    let samples: Vec<CalibrationSample> = [(50u64, 2.0), (50, -2.0)]
        .iter()
        .map(|&(n, t)| {
            let (value, log_scale) = reference(n, t);
            CalibrationSample { n, t, value, log_scale }
        })
        .collect();
    ap.calibrate(&samples).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let n = rng.gen_range(50..=400u64);
        let t = 4.0 * rng.gen_range(-1.0..0.7);
        let r = ap.evaluate(n, t).unwrap();
        let (v, l) = reference(n, t);
        let err = (r.p_value - v * (l - r.log_scale).exp()).abs();
        assert!(r.budget.unwrap() >= err, "n={n} t={t}: {} < {err}", r.budget.unwrap());
    }
}

#[test]
fn uncalibrated_budget_is_an_error() {
    let ap = laguerre(0);
    assert!(matches!(ap.error_budget(100, 1.0), Err(EvalError::CalibrationUnavailable)));
    assert!(ap.evaluate(100, 1.0).unwrap().budget.is_none());
}

#[test]
fn parity_flipped_system_negates_odd_indices() {
    let ap = laguerre(1);
    let flipped = transition_map::RecurrenceSystem::new(
        1.0,
        ALPHA.iter().map(|v| -v).collect(),
        BETA.iter().map(|v| -v).collect(),
    )
    .unwrap();
    let fp = asymptotic_evaluator::Approximant::build(&flipped, Default::default(), 1).unwrap();
    assert!(fp.case_transform.parity_flip && !fp.case_transform.axis_flip);
    for &(n, t) in &[(100u64, 1.3), (101, 1.3), (150, -2.0)] {
        let a = ap.evaluate(n, t).unwrap();
        let b = fp.evaluate(n, t).unwrap();
        let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
        assert!((b.p_value - sign * a.p_value).abs() < 1e-12 * a.p_value.abs());
    }
    assert!(ap.case_transform.is_identity());
}

fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn q_imaginary_part_is_minus_p(n in 20u64..600, t in 0.05f64..3.8) {
        let ap = laguerre_shared();
        let r = ap.evaluate(n, t).unwrap();
        prop_assert_eq!(r.log_scale, 0.0);
        prop_assert!((r.q_value.im + r.p_value).abs() <= 1e-12 * r.p_value.abs().max(1e-300));
    }
}

fn laguerre_shared() -> &'static asymptotic_evaluator::Approximant {
    static AP: std::sync::OnceLock<asymptotic_evaluator::Approximant> = std::sync::OnceLock::new();
    AP.get_or_init(|| laguerre(1))
}
