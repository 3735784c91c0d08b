use numerics::{integrate, integrate_power_weight, ChebFun, ChebOptions, Jet64, QuadOptions};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exp_ln_round_trip(x0 in 0.1f64..5.0, a in -2.0f64..2.0) {
        let x = Jet64::variable(x0, 8);
        let f = (&x * &x).add_scalar(a * a + 1.0);
        let back = f.ln().exp();
        for k in 0..=8 {
            prop_assert!((back.coeff(k) - f.coeff(k)).abs() < 1e-11 * (1.0 + f.coeff(k).abs()));
        }
    }

    #[test]
    fn powf_matches_repeated_product(x0 in 0.2f64..3.0) {
        let x = Jet64::variable(x0, 6);
        let cube = &(&x * &x) * &x;
        let p = x.powf(3.0);
        for k in 0..=6 {
            prop_assert!((p.coeff(k) - cube.coeff(k)).abs() < 1e-12 * (1.0 + cube.coeff(k).abs()));
        }
    }

    #[test]
    fn quadrature_of_monomials(n in 0i32..12, b in 0.1f64..4.0) {
        let r = integrate(|x| x.powi(n), 0.0, b, QuadOptions::default()).unwrap();
        let exact = b.powi(n + 1) / (n as f64 + 1.0);
        prop_assert!((r.value - exact).abs() <= 1e-12 * exact.abs().max(1.0));
    }

    #[test]
    fn power_weight_beta_integrals(a in -0.9f64..3.0) {
        // ∫₀¹ v^a (1 − v) dv = 1/((a+1)(a+2))
        let r = integrate_power_weight(|v| 1.0 - v, a, QuadOptions::default()).unwrap();
        let exact = 1.0 / ((a + 1.0) * (a + 2.0));
        prop_assert!((r.value - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn cheb_antiderivative_inverts_derivative(w in 0.5f64..6.0, x in 0.0f64..3.0) {
        let f = ChebFun::build(|t| (w * t).sin(), &[0.0, 3.0], ChebOptions::default()).unwrap();
        let g = f.antiderivative();
        let exact = (1.0 - (w * x).cos()) / w;
        prop_assert!((g.eval(x) - exact).abs() < 1e-9);
        let d = f.derivative();
        prop_assert!((d.eval(x) - w * (w * x).cos()).abs() < 1e-7 * w * w);
    }
}
