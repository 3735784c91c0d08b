use proptest::prelude::*;
use recurrence_oracle::*;
use transition_map::{order_nu, shift_and_recast, ExactCoeffs};

const BITS60: u32 = 232;

fn constant(c: f64) -> ExactCoeffs {
    ExactCoeffs::Constant { a: 0.0, b: c }
}

fn lag(alpha: f64) -> LaguerreTypeWeight {
    LaguerreTypeWeight::new(1, alpha, 1.0).unwrap()
}

#[test]
fn double_root_gives_linear_growth() {
    let cfg = OracleConfig::forward(60, 0, 100, 0.0, 1.0);
    let tr = forward_recurrence(&cfg, &constant(2.0), 0.3).unwrap();
    for n in 0..=100u64 {
        assert_eq!(tr.get(n).unwrap().to_f64(), n as f64);
    }
    assert_eq!(tr.max_triple_residual(&constant(2.0)).unwrap(), 0.0);
}

#[test]
fn unit_coefficient_has_period_six() {
    let cfg = OracleConfig::forward(40, 0, 30, 1.0, 1.0);
    let tr = forward_recurrence(&cfg, &constant(1.0), 0.0).unwrap();
    let cycle = [1.0, 1.0, 0.0, -1.0, -1.0, 0.0];
    for n in 0..=30u64 {
        assert_eq!(tr.value_f64(n).unwrap(), cycle[(n % 6) as usize], "n={n}");
    }
}

#[test]
fn config_invariants_are_enforced() {
    let mut cfg = OracleConfig::forward(29, 0, 10, 0.0, 1.0);
    let err = forward_recurrence(&cfg, &constant(2.0), 0.0).unwrap_err();
    assert!(err.to_string().contains("precision_digits"), "{err}");
    cfg.precision_digits = 30;
    cfg.n_max = 1;
    let err = forward_recurrence(&cfg, &constant(2.0), 0.0).unwrap_err();
    assert!(err.to_string().contains("n_max"), "{err}");
    let cfg = OracleConfig::backward(60, 0);
    assert!(matches!(
        forward_recurrence(&cfg, &constant(2.0), 0.0),
        Err(OracleError::InvalidConfig(_))
    ));
}

#[test]
fn table_source_runs_out() {
    let src = ExactCoeffs::Table {
        a: vec![0.0; 5],
        b: vec![2.0; 5],
    };
    let cfg = OracleConfig::forward(40, 0, 10, 0.0, 1.0);
    assert!(matches!(
        forward_recurrence(&cfg, &src, 1.0),
        Err(OracleError::CoefficientUnavailable { n: 5 })
    ));
}

#[test]
fn miller_recovers_small_root() {
    let c = 3.0;
    let cfg = OracleConfig::backward(60, 0);
    let tr = backward_miller(&cfg, &constant(c), 0.7, 101).unwrap();
    let disc = Float::with_val(BITS60, c * c - 4.0).sqrt();
    let rho_small = (Float::with_val(BITS60, c) - disc) / 2u32;
    let ratio = Float::with_val(BITS60, tr.get(101).unwrap() / tr.get(100).unwrap());
    let rel = ((ratio - &rho_small) / &rho_small).abs().to_f64();
    assert!(rel < 1e-20, "{rel}");
    assert_eq!(tr.value_f64(0).unwrap(), 1.0);
}

#[test]
fn miller_declines_oscillatory_case() {
    let cfg = OracleConfig::backward(40, 0);
    assert!(matches!(
        backward_miller(&cfg, &constant(1.3), 0.0, 60),
        Err(OracleError::NonConvergence { .. })
    ));
}

#[test]
fn casoratian_is_constant() {
    let src = constant(2.5);
    let fwd = forward_recurrence(&OracleConfig::forward(60, 0, 120, 0.0, 1.0), &src, 0.0).unwrap();
    let bwd = backward_miller(&OracleConfig::backward(60, 0), &src, 0.0, 120).unwrap();
    let w = casoratian(&fwd, &bwd);
    assert_eq!(w.len(), 120);
    let w0 = w[0].1.clone();
    for (n, v) in &w {
        let rel = Float::with_val(BITS60, v - &w0).abs() / Float::with_val(BITS60, w0.abs_ref());
        assert!(rel.to_f64() < 1e-50, "n={n}: {}", rel.to_f64());
    }
}

#[test]
fn precision_escalation_is_stable() {
    let w = lag(0.5);
    let x = 37.25;
    let a = canonical_transform(
        &w,
        &orthonormal_trace(&OracleConfig::forward(60, 0, 200, 0.0, 0.0), &w, x).unwrap(),
    )
    .unwrap();
    let b = canonical_transform(
        &w,
        &orthonormal_trace(&OracleConfig::forward(120, 0, 200, 0.0, 0.0), &w, x).unwrap(),
    )
    .unwrap();
    for n in a.start..=a.end() {
        let (va, vb) = (a.get(n).unwrap(), b.get(n).unwrap());
        let rel = Float::with_val(400, va - vb).abs() / Float::with_val(400, vb.abs_ref());
        assert!(rel.to_f64() < 1e-50, "n={n}");
    }
}

#[test]
fn laguerre_coefficient_values() {
    let c = laguerre_coeffs(&lag(0.0), 0, BITS60);
    assert_eq!((c.a.to_f64(), c.b.to_f64(), c.truncated), (1.0, 1.0, false));
    // q dilates x: a_n, b_n scale by 1/q
    let c = laguerre_coeffs(&LaguerreTypeWeight::new(1, 0.0, 2.0).unwrap(), 3, BITS60);
    assert_eq!(c.a.to_f64(), 3.5);
    assert!((c.b.to_f64() - 2.0).abs() < 1e-15);
    assert!((lag(0.0).r_m() - 4.0).abs() < 1e-14);
    // m = 2, q = 1: r₂ = (½·2·(1/2)(3/4))^{−1/2}
    let w2 = LaguerreTypeWeight::new(2, 0.3, 1.0).unwrap();
    assert!((w2.r_m() - (8.0f64 / 3.0).sqrt()).abs() < 1e-14);
    let n = 1_000_000u64;
    let c = laguerre_coeffs(&w2, n - 1, BITS60);
    assert!(c.truncated);
    let lead = c.b.to_f64() / ((n as f64).sqrt() * w2.r_m());
    assert!((lead - 0.25).abs() < 1e-3, "{lead}");
    assert!(LaguerreTypeWeight::new(0, 0.0, 1.0).is_err());
    assert!(LaguerreTypeWeight::new(1, -1.0, 1.0).is_err());
    assert!(LaguerreTypeWeight::new(1, 0.0, 0.0).is_err());
}

/// `K_n² = Γ((n+1)/2)Γ((n+α+1)/2) / (2Γ(n/2+1)Γ((n+α)/2+1))` for m = 1.
fn k_closed_form(alpha: f64, n: u64, bits: u32) -> Float {
    let g = |v: f64| Float::with_val(bits, v).ln_gamma();
    let nf = n as f64;
    let l = g((nf + 1.0) / 2.0) + g((nf + alpha + 1.0) / 2.0)
        - g(nf / 2.0 + 1.0)
        - g((nf + alpha) / 2.0 + 1.0)
        - Float::with_val(bits, 2).ln();
    (l / 2u32).exp()
}

#[test]
fn k_normalizer_identities() {
    let w = lag(0.0);
    let n = 50;
    let k_next = k_normalizer(&w, n + 1, BITS60).unwrap();
    let k_prev = k_normalizer(&w, n - 1, BITS60).unwrap();
    let b = |k: u64| laguerre_coeffs(&w, k, BITS60).b;
    let lhs = Float::with_val(BITS60, &k_next / &k_prev);
    let rhs = b(n - 1) / b(n);
    assert!(((lhs - &rhs) / rhs).abs().to_f64() < 1e-40);

    // two truncation depths
    let shallow = k_normalizer_with_depth(&w, 37, 3, BITS60).unwrap();
    let deep = k_normalizer_with_depth(&w, 37, 3000, BITS60).unwrap();
    assert!(((shallow - &deep) / &deep).abs().to_f64() < 1e-30);

    for alpha in [0.0, 0.5, 1.5] {
        let k = k_normalizer(&lag(alpha), 25, BITS60).unwrap();
        let want = k_closed_form(alpha, 25, BITS60);
        assert!(
            ((k - &want) / &want).abs().to_f64() < 1e-50,
            "alpha={alpha}"
        );
    }

    let devs: Vec<f64> = [100u64, 1000, 10000]
        .iter()
        .map(|&n| (k_normalizer(&w, n, BITS60).unwrap().to_f64() * (n as f64).sqrt() - 1.0).abs())
        .collect();
    assert!(
        devs[0] > devs[1] && devs[1] > devs[2] && devs[2] < 1e-3,
        "{devs:?}"
    );
    assert!(k_normalizer(&w, 0, BITS60).is_err());

    // m = 2 model: ratio identity and K_n n^{1/4} → 1
    let w2 = LaguerreTypeWeight::new(2, 0.5, 1.0).unwrap();
    let lhs = k_normalizer(&w2, 41, BITS60).unwrap() / k_normalizer(&w2, 39, BITS60).unwrap();
    let b2 = |k: u64| laguerre_coeffs(&w2, k, BITS60).b;
    let rhs = b2(39) / b2(40);
    assert!(((lhs - &rhs) / rhs).abs().to_f64() < 1e-40);
    let d = k_normalizer(&w2, 100000, BITS60).unwrap().to_f64() * 100000f64.powf(0.25) - 1.0;
    assert!(d.abs() < 1e-3);
}

/// `L_n(x)` by its own three-term recurrence in f64.
fn laguerre_l(n: u64, x: f64) -> f64 {
    let (mut a, mut b) = (1.0, 1.0 - x);
    if n == 0 {
        return a;
    }
    for k in 1..n {
        let kf = k as f64;
        let c = ((2.0 * kf + 1.0 - x) * b - kf * a) / (kf + 1.0);
        a = b;
        b = c;
    }
    b
}

#[test]
fn orthonormal_trace_is_signed_laguerre() {
    let w = lag(0.0);
    let x = 3.7;
    let tr = orthonormal_trace(&OracleConfig::forward(60, 0, 40, 0.0, 0.0), &w, x).unwrap();
    assert_eq!(tr.value_f64(0).unwrap(), 1.0);
    for n in 0..=40u64 {
        let want = if n % 2 == 0 { 1.0 } else { -1.0 } * laguerre_l(n, x);
        let got = tr.value_f64(n).unwrap();
        assert!((got - want).abs() < 1e-12 * want.abs().max(1.0), "n={n}");
    }
    let at0 = orthonormal_trace(&OracleConfig::forward(60, 0, 5, 0.0, 0.0), &w, 0.0).unwrap();
    assert_eq!(at0.value_f64(0).unwrap(), 1.0);
    // γ₀ for α = 1, q = 2: (2²/Γ(2))^{1/2} = 2
    let g = gamma0(&LaguerreTypeWeight::new(1, 1.0, 2.0).unwrap(), BITS60);
    assert!((g.to_f64() - 2.0).abs() < 1e-15);
}

#[test]
fn transformed_trace_satisfies_unit_recurrence() {
    for &(alpha, x) in &[(0.0, 150.0), (0.5, 80.0), (1.5, -40.0)] {
        let w = lag(alpha);
        let raw = orthonormal_trace(&OracleConfig::forward(60, 0, 160, 0.0, 0.0), &w, x).unwrap();
        let tr = canonical_transform(&w, &raw).unwrap();
        assert!(tr.normalized && tr.start == 1);
        let res = tr.max_triple_residual(&w).unwrap();
        assert!(res <= 1e-52, "alpha={alpha}: {res}");
        let src = ExactCoeffs::Laguerre {
            m: 1,
            alpha,
            q: 1.0,
        };
        assert!(tr.max_triple_residual(&src).unwrap() <= 1e-52);
        assert!(canonical_transform(&w, &tr).is_err());
    }
    let neg = lag(-0.5);
    let raw = orthonormal_trace(&OracleConfig::forward(60, 0, 5, 0.0, 0.0), &neg, 0.0).unwrap();
    assert!(matches!(
        canonical_transform(&neg, &raw),
        Err(OracleError::Domain(_))
    ));
}

#[test]
fn normalised_coefficients_leading_terms() {
    let w = lag(0.0);
    let n = 100_000u64;
    let (a, b) = w.coeffs(n, BITS60).unwrap();
    let lead = a.to_f64() * n as f64;
    assert!((lead + 4.0 / w.r_m()).abs() < 1e-3, "{lead}");
    assert!((b.to_f64() - 2.0).abs() < 1e-8);
    assert!(w.coeffs(0, BITS60).is_err());
}

#[test]
fn forward_trace_residuals_at_working_precision() {
    let w = lag(0.0);
    for &x in &[-30.0, 10.0, 400.0] {
        let start = OracleConfig::forward(60, 0, 150, 0.0, 0.0);
        let raw = orthonormal_trace(&start, &w, x).unwrap();
        let t = canonical_transform(&w, &raw).unwrap();
        // restart a unit-trailing forward run from the first two values
        let mut cfg = OracleConfig::forward(60, 1, 150, 0.0, 0.0);
        cfg.initial = Initial::Values(t.get(1).unwrap().clone(), t.get(2).unwrap().clone());
        let fwd = forward_recurrence(&cfg, &w, x).unwrap();
        assert!(fwd.max_triple_residual(&w).unwrap() <= 1e-55);
        let rel = Float::with_val(BITS60, fwd.get(150).unwrap() - t.get(150).unwrap()).abs()
            / Float::with_val(BITS60, t.get(150).unwrap().abs_ref());
        assert!(rel.to_f64() < 1e-45, "x={x}: {}", rel.to_f64());
    }
}

/// `|ζ|` on `z < 0` for m = 1: `arccosh(1 + 2|z|) + 2 sqrt(|z|(1+|z|))`.
fn zeta_abs_closed(z: f64) -> f64 {
    let a = z.abs();
    (1.0 + 2.0 * a).acosh() + 2.0 * (a * (1.0 + a)).sqrt()
}

#[test]
fn recessive_laguerre_trace_decays_at_zeta_rate() {
    // At fixed x, ln|Q_n| falls by d/dN[N|ζ(x/(4N))|] per step.
    let w = lag(0.0);
    let n_mid = 200u64;
    let big_n = n_mid as f64 + 0.5;
    let z = -1.0;
    let x = 4.0 * big_n * z;
    let tr = backward_miller(&OracleConfig::backward(60, 1), &w, x, 260).unwrap();
    let ln = |n: u64| tr.sign_ln_abs(n).unwrap().1;
    let slope = (ln(n_mid + 10) - ln(n_mid - 10)) / 20.0;
    let h = 1e-4;
    let phase = |bn: f64| bn * zeta_abs_closed(x / (4.0 * bn));
    let want = -(phase(big_n + h) - phase(big_n - h)) / (2.0 * h);
    assert!(((slope - want) / want).abs() < 0.05, "{slope} vs {want}");
}

#[test]
fn extracted_series_matches_known_laguerre_values() {
    let sys = laguerre_system(&lag(0.0), 5).unwrap();
    let alpha = [-1.0, 0.5, -0.125, -0.0625, 0.0390625];
    let beta = [2.0, 0.0, -0.25, 0.25, -0.015625];
    for k in 0..5 {
        assert!((sys.alpha_series[k] - alpha[k]).abs() < 1e-12, "alpha_{k}");
        assert!((sys.beta_series[k] - beta[k]).abs() < 1e-12, "beta_{k}");
    }
    assert_eq!(sys.beta_series[1], 0.0);
    assert!(matches!(
        sys.exact_coeffs,
        Some(ExactCoeffs::Laguerre { m: 1, .. })
    ));
    for a in [0.5, 1.5] {
        let s = laguerre_system(&lag(a), 5).unwrap();
        let r = shift_and_recast(&s).unwrap();
        assert!((r.tau0 - (a + 1.0) / 2.0).abs() < 1e-12);
        let nu = order_nu(s.theta, r.beta_prime[2]).unwrap();
        assert!((nu.nu() - a).abs() < 1e-10, "alpha={a}");
    }
    assert!(laguerre_system(&lag(0.0), 2).is_err());
}

#[test]
fn connection_fit_recovers_mixtures() {
    let samples = |c1: f64, c2: f64| -> Vec<ConnectionSample> {
        (0..8)
            .map(|k| {
                let ph = 0.9 * k as f64 + 0.2;
                let (p, q) = (ph.cos(), ph.sin());
                ConnectionSample {
                    n: 100 + k,
                    p,
                    q,
                    target: c1 * p + c2 * q,
                }
            })
            .collect()
    };
    let f = fit_connection(&samples(2.0, 0.0)).unwrap();
    assert!((f.c1 - 2.0).abs() < 1e-12 && f.c2.abs() < 1e-12);
    let f = fit_connection(&samples(1.0, 0.001)).unwrap();
    assert!((f.c1 - 1.0).abs() < 1e-2 && (f.c2 - 0.001).abs() < 1e-5);
    assert!(matches!(
        fit_connection(&samples(1.0, 0.0)[..3]),
        Err(OracleError::TooFewSamples { needed: 4, got: 3 })
    ));
    let parallel: Vec<ConnectionSample> = samples(1.0, 0.0)
        .into_iter()
        .map(|s| ConnectionSample { q: 2.0 * s.p, ..s })
        .collect();
    assert!(matches!(
        fit_connection(&parallel),
        Err(OracleError::IllConditioned(_))
    ));
}

#[test]
fn csv_export_round_trips() {
    let cfg = OracleConfig::forward(40, 0, 60, 0.0, 1.0);
    let tr = forward_recurrence(&cfg, &constant(3.0), 0.0).unwrap();
    let mut buf = Vec::new();
    tr.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,mantissa,exp10,provenance"));
    for (i, line) in lines.enumerate() {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f.len(), 4);
        assert_eq!(f[0].parse::<u64>().unwrap(), i as u64);
        assert_eq!(f[3], "forward@40");
        let mant: f64 = f[1].parse().unwrap();
        let e: i32 = f[2].parse().unwrap();
        assert!(mant == 0.0 || (1.0..10.0).contains(&mant.abs()), "{line}");
        let v = mant * 10f64.powi(e);
        let want = tr.value_f64(i as u64).unwrap();
        assert!((v - want).abs() <= 1e-14 * want.abs(), "{line}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn constant_case_is_chebyshev(c in -1.9f64..1.9, n in 2u64..200) {
        // P₀ = 0, P₁ = 1: P_n = sin(nφ)/sin φ with c = 2cos φ
        let cfg = OracleConfig::forward(40, 0, n, 0.0, 1.0);
        let tr = forward_recurrence(&cfg, &constant(c), 0.0).unwrap();
        let phi = Float::with_val(300, c / 2.0).acos();
        let want = Float::with_val(300, &phi * n).sin() / phi.sin();
        let got = tr.get(n).unwrap();
        let err = Float::with_val(300, got - &want).abs().to_f64();
        prop_assert!(err <= 1e-25 * (n as f64).powi(2) / (1.0 - c * c / 4.0).sqrt());
    }
}

#[test]
fn single_value_matches_transformed_trace() {
    let w = lag(0.5);
    let x = 21.5;
    let tr = canonical_transform(
        &w,
        &orthonormal_trace(&OracleConfig::forward(60, 0, 30, 0.0, 0.0), &w, x).unwrap(),
    )
    .unwrap();
    for n in [1u64, 2, 17, 30] {
        let v = canonical_value(&w, n, x, 60).unwrap();
        assert_eq!(&v, tr.get(n).unwrap(), "n={n}");
    }
    assert!(canonical_value(&w, 0, x, 60).is_err());
}
