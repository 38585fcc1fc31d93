use bsc_exponents::scalar::{h2, AlphaTauPair};
use bsc_exponents::spectrum::*;
use proptest::prelude::*;

/// `(α, τ, ω)` with `ω` strictly inside `(0, G)`.
fn interior() -> impl Strategy<Value = SpectrumArgs> {
    (0.02f64..=0.5, 0.02f64..0.98, 0.02f64..0.98).prop_map(|(alpha, tf, wf)| {
        let pair = AlphaTauPair::new(alpha, alpha * tf).unwrap();
        SpectrumArgs::from_pair(pair, pair.g() * wf).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn quadrature_matches_closed_form(args in interior()) {
        let q = mu_integral(&args).unwrap().value;
        prop_assert!((q - mu_closed(&args).unwrap()).abs() <= 1e-8);
    }

    #[test]
    fn half_form_matches_quadrature(tf in 0.02f64..0.98, wf in 0.02f64..0.98) {
        let pair = AlphaTauPair::new(0.5, 0.5 * tf).unwrap();
        let args = SpectrumArgs::from_pair(pair, pair.g() * wf).unwrap();
        let q = mu_integral(&args).unwrap().value;
        prop_assert!((q - mu_half(args.rate, args.omega).unwrap()).abs() <= 1e-8);
        prop_assert!((mu_closed(&args).unwrap() - mu_half(args.rate, args.omega).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn convex_in_distance(args in interior()) {
        let g = args.g();
        let h = 1e-3 * args.omega.min(g - args.omega);
        // second difference taken on the derivative to keep it above roundoff
        let d = |w: f64| mu_domega(&SpectrumArgs { omega: w, ..args }).unwrap();
        let second = d(args.omega + h) - d(args.omega - h);
        // positive curvature, so W = ω/2·log(1/4pq) − μ is concave
        prop_assert!(second > 0.0, "derivative difference {second}");
    }

    #[test]
    fn increasing_in_weight(rate in 0.6f64..0.9, af in 0.1f64..0.9, wf in 0.05f64..0.95) {
        // μ at fixed (R, ω) over weights whose G still exceeds ω
        let lo = bsc_exponents::scalar::delta_gv(rate).unwrap();
        let alpha = lo + (0.5 - lo) * af;
        let g = AlphaTauPair::for_rate(rate, alpha).unwrap().g();
        let omega = g * wf;
        let step = (0.5 - alpha) / 8.0;
        let values: Vec<f64> = (0..=8)
            .map(|k| mu(&SpectrumArgs::new(rate, alpha + step * k as f64, omega).unwrap()).unwrap())
            .collect();
        prop_assert!(values.windows(2).all(|w| w[1] > w[0]), "{values:?}");
    }

    #[test]
    fn top_distance_identity_through_quadrature(alpha in 0.02f64..=0.5, tf in 0.0f64..0.98) {
        let pair = AlphaTauPair::new(alpha, alpha * tf).unwrap();
        let args = SpectrumArgs::at_g(pair);
        let q = mu_integral(&args).unwrap().value;
        prop_assert!((l_func(args.omega).unwrap() - (q - args.rate + 1.0)).abs() <= 1e-8);
    }

    #[test]
    fn closed_form_aux_identities(alpha in 0.02f64..=0.5, tf in 0.02f64..0.98) {
        let pair = AlphaTauPair::new(alpha, alpha * tf).unwrap();
        let args = SpectrumArgs::at_g(pair);
        let aux = ClosedFormAux::new(&args).unwrap();
        prop_assert!(aux.b > aux.a && aux.a >= 0.0);
        prop_assert!((2.0 * aux.a1 - (aux.b * aux.b - aux.a * aux.a)).abs() <= 1e-13);
        let s = (pair.tau * (1.0 - pair.tau)).sqrt();
        prop_assert!((aux.v - (1.0 + 2.0 * s)).abs() <= 1e-10);
        prop_assert!((aux.v - aux.a1 / args.omega).abs() <= 1e-10);
        prop_assert!((aux.v_minus_b() - 2.0 * (pair.tau * aux.v).sqrt()).abs() <= 1e-10);
    }
}

#[test]
fn zero_distance_is_zero() {
    let args = SpectrumArgs::new(0.4, 0.3, 0.0).unwrap();
    assert_eq!(mu(&args).unwrap(), 0.0);
    assert_eq!(mu_integral(&args).unwrap().value, 0.0);
}

#[test]
fn reference_point_cross_method() {
    let args = SpectrumArgs::new(0.4, 0.45, 0.1).unwrap();
    let q = mu_integral(&args).unwrap().value;
    assert!((q - mu_closed(&args).unwrap()).abs() <= 1e-8);
}

#[test]
fn half_weight_identity_grid() {
    for j in 1..=49 {
        let tau = j as f64 / 100.0;
        let r = h2(tau).unwrap();
        let g = 0.5 - (tau * (1.0 - tau)).sqrt();
        let expect = r + h2(g).unwrap() - 1.0;
        assert!((mu_half(r, g).unwrap() - expect).abs() <= 1e-10, "tau = {tau}");
    }
}

#[test]
fn half_weight_derivative_forms_agree() {
    for (r, w) in [(0.2, 0.1), (0.45, 0.05), (0.1, 0.25)] {
        let args = SpectrumArgs::new(r, 0.5, w).unwrap();
        let d1 = mu_domega(&args).unwrap();
        let d2 = mu_domega_integrand_form(&args).unwrap();
        assert!((d1 - d2).abs() < 1e-10);
    }
}

#[test]
fn domega_matches_quadrature_differences() {
    for (r, a, w) in [(0.4, 0.45, 0.1), (0.7, 0.3, 0.05), (0.2, 0.5, 0.2), (0.55, 0.4, 0.12)] {
        let args = SpectrumArgs::new(r, a, w).unwrap();
        let h = 1e-5;
        let f = |x: f64| {
            mu_integral_tol(&SpectrumArgs { omega: x, ..args }, 1e-14)
                .unwrap()
                .value
        };
        let fd = (8.0 * (f(w + h) - f(w - h)) - (f(w + 2.0 * h) - f(w - 2.0 * h))) / (12.0 * h);
        assert!((mu_domega(&args).unwrap() - fd).abs() < 1e-6);
    }
}

#[test]
fn weight_monotonicity_breaks_at_low_rate() {
    // at small R the value drops as alpha moves toward 1/2
    let rate = 0.05;
    let lo = bsc_exponents::scalar::delta_gv(rate).unwrap();
    let alpha = lo + (0.5 - lo) * 0.2;
    let omega = 0.05 * AlphaTauPair::for_rate(rate, alpha).unwrap().g();
    let start = mu(&SpectrumArgs::new(rate, alpha, omega).unwrap()).unwrap();
    let end = mu(&SpectrumArgs::new(rate, 0.5, omega).unwrap()).unwrap();
    assert!(end < start, "{start} -> {end}");
    assert!((start - 9.5676437561838e-4).abs() < 1e-10 && (end - 7.2974547137116e-4).abs() < 1e-10);
}
