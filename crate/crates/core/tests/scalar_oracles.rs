use bsc_exponents::bounds::sphere_packing_exponent;
use bsc_exponents::numeric::bisect;
use bsc_exponents::scalar::*;
use num_bigint::BigUint;
use proptest::prelude::*;

fn ch(p: f64) -> ChannelParam {
    ChannelParam::new(p).unwrap()
}

fn log2_big(x: &BigUint) -> f64 {
    // exact enough for counts below 2^1000
    let bits = x.bits();
    if bits <= 52 {
        return (x.to_u64_digits().first().copied().unwrap_or(0) as f64).log2();
    }
    let shift = bits - 52;
    let top = (x >> shift).to_u64_digits()[0] as f64;
    top.log2() + shift as f64
}

fn binom(n: u64, k: u64) -> BigUint {
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #[test]
    fn entropy_inverse_round_trip(x in 0.0f64..=0.5) {
        let y = h2(x).unwrap();
        prop_assert!((h2_inv(y).unwrap() - x).abs() <= 1e-10);
    }

    #[test]
    fn divergence_nonnegative(x in 0.0f64..=1.0, y in 0.001f64..0.999) {
        let d = kl_div(x, y).unwrap();
        prop_assert!(d >= -1e-15);
    }

    #[test]
    fn c_is_decreasing_below_elias_radius(omega in 0.01f64..0.9, p in 0.001f64..0.45, frac in 0.05f64..0.95) {
        let c = ch(p);
        let t2 = t2(omega, c).unwrap();
        let t = omega / 2.0 + frac * (t2 - omega / 2.0);
        prop_assert!(c_dt(omega, t, c) <= 0.0);
        let h = 1e-6 * (t - omega / 2.0);
        let slope = (c_func(omega, t + h, c).unwrap() - c_func(omega, t - h, c).unwrap()) / (2.0 * h);
        prop_assert!(slope <= 1e-9);
    }
}

#[test]
fn divergence_examples() {
    assert_eq!(kl_div(0.3, 0.3).unwrap(), 0.0);
    assert!((kl_div(0.0, 0.25).unwrap() - (1.0f64 / 0.75).log2()).abs() < 1e-15);
    let d = delta_gv(0.5).unwrap();
    assert!((kl_div(d, 0.01).unwrap() - sphere_packing_exponent(0.5, ch(0.01)).unwrap()).abs() < 1e-14);
    assert!(kl_div(0.2, 0.0).is_err());
}

#[test]
fn g_forms_agree_on_grid() {
    for i in 0..=40 {
        let alpha = 0.5 * i as f64 / 40.0;
        for j in 0..=24 {
            let tau = alpha * j as f64 / 24.0;
            let a = g_func(alpha, tau).unwrap();
            let b = g_func_completed_square(alpha, tau).unwrap();
            assert!((a - b).abs() <= 1e-13, "({alpha}, {tau}): {a} {b}");
        }
    }
    for j in 0..=100 {
        let tau = 0.5 * j as f64 / 100.0;
        let g = g_func(0.5, tau).unwrap();
        assert!((g - (0.5 - (tau * (1.0 - tau)).sqrt())).abs() <= 1e-13);
    }
    assert_eq!(g_func(0.3, 0.3).unwrap(), 0.0);
    assert!(g_func(0.2, 0.3).is_err());
}

#[test]
fn gv_radius_round_trip() {
    assert_eq!(delta_gv(1.0).unwrap(), 0.0);
    assert_eq!(delta_gv(0.0).unwrap(), 0.5);
    assert!((h2(delta_gv(0.30524).unwrap()).unwrap() - 0.69476).abs() < 1e-9);
    for k in 0..=100 {
        let r = k as f64 / 100.0;
        assert!((h2(delta_gv(r).unwrap()).unwrap() - (1.0 - r)).abs() < 1e-12);
    }
}

#[test]
fn radii_cross_at_omega1() {
    let c = ch(0.01);
    let w1 = omega1(c);
    // independent root of t1 − t2
    let root = bisect("t1 - t2", |w| t1(w).unwrap() - t2(w, c).unwrap(), 1e-6, 0.5, 1e-15).unwrap();
    assert!((root - w1).abs() < 1e-12);
    let (sp, sq) = (0.01f64.sqrt(), 0.99f64.sqrt());
    assert!((t1(w1).unwrap() - sp / (sp + sq)).abs() < 1e-12);
    assert!((t2(w1, c).unwrap() - t1(w1).unwrap()).abs() < 1e-12);
    for k in 0..=500 {
        let w = 0.5 * k as f64 / 500.0;
        let t = t_radius(w, c).unwrap();
        let expect = if w <= root { t1(w).unwrap() } else { t2(w, c).unwrap() };
        assert!((t - expect).abs() < 1e-12);
    }
}

#[test]
fn omega1_monotone_with_limits() {
    let grid: Vec<f64> = (1..500).map(|k| omega1(ch(k as f64 / 1000.0))).collect();
    assert!(grid.windows(2).all(|w| w[0] < w[1]));
    assert!(omega1(ch(1e-12)) < 1e-5);
    assert!((omega1(ch(0.5 - 1e-12)) - 0.5).abs() < 1e-9);
}

#[test]
fn u_within_binomial_band() {
    for n in [16u64, 20, 24] {
        let band = 2.0 / n as f64 * ((n as f64 + 2.0) / 2.0).log2();
        for wn in (0..n).step_by(2) {
            for tn in wn / 2..=n / 2 {
                let exact = binom(n - wn, tn - wn / 2) * binom(wn, wn / 2);
                let lhs = log2_big(&exact) / n as f64;
                let u = u_func(tn as f64 / n as f64, wn as f64 / n as f64).unwrap();
                let gap = u - lhs;
                assert!(
                    (-1e-12..=band + 1e-12).contains(&gap),
                    "n={n} tn={tn} wn={wn}: gap {gap}, band {band}"
                );
            }
        }
    }
}

#[test]
fn u_examples() {
    for w in [0.0, 0.2, 0.6] {
        assert!((u_func(w / 2.0, w).unwrap() - w).abs() < 1e-15);
        assert!((u_func(0.5, w).unwrap() - 1.0).abs() < 1e-15);
    }
    assert!(u_func(0.05, 0.2).is_err());
}

#[test]
fn c_minimum_sits_at_elias_radius() {
    for i in 1..=50 {
        let omega = 0.9 * i as f64 / 51.0;
        for j in 1..=50 {
            let c = ch(0.45 * j as f64 / 51.0);
            let lo = omega / 2.0;
            let hi = 1.0 - omega / 2.0;
            let grid: Vec<f64> = (0..=2000).map(|k| lo + (hi - lo) * k as f64 / 2000.0).collect();
            let best = grid
                .iter()
                .min_by(|a, b| {
                    c_func(omega, **a, c)
                        .unwrap()
                        .total_cmp(&c_func(omega, **b, c).unwrap())
                })
                .unwrap();
            let t2 = t2(omega, c).unwrap();
            let nearest = grid
                .iter()
                .min_by(|a, b| (**a - t2).abs().total_cmp(&(**b - t2).abs()))
                .unwrap();
            assert_eq!(best, nearest, "omega={omega} p={}", c.p());
            let min_value = 0.5 * omega * c.log_inv_4pq();
            assert!((c_func(omega, t2, c).unwrap() - min_value).abs() < 1e-12);
        }
    }
}

#[test]
fn c_recomposed_from_entropy() {
    let c = ch(0.05);
    let (omega, t): (f64, f64) = (0.2, 0.15);
    let inner = (2.0 * t - omega) / (2.0 * (1.0 - omega));
    let h = -inner * inner.log2() - (1.0 - inner) * (1.0 - inner).log2();
    let expect = t * (0.95f64 / 0.05).log2() - 0.95f64.log2() - omega - (1.0 - omega) * h;
    assert!((c_func(omega, t, c).unwrap() - expect).abs() < 1e-14);
}

fn fd(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (8.0 * (f(x + h) - f(x - h)) - (f(x + 2.0 * h) - f(x - 2.0 * h))) / (12.0 * h)
}

#[test]
fn derivative_closed_forms() {
    let c = ch(0.07);
    for (t, omega) in [(0.2, 0.1), (0.35, 0.3), (0.45, 0.05), (0.3, 0.5)] {
        let h = 1e-4;
        let u_t = |x: f64| u_func(x, omega).unwrap();
        let u_w = |x: f64| u_func(t, x).unwrap();
        assert!((u_dt(t, omega) - fd(u_t, t, h)).abs() < 1e-6);
        assert!((u_domega(t, omega) - fd(u_w, omega, h)).abs() < 1e-6);
        assert!((u_dtt(t, omega) - fd(|x| u_dt(x, omega), t, h)).abs() < 1e-6);
        assert!((u_domega2(t, omega) - fd(|x| u_domega(t, x), omega, h)).abs() < 1e-6);
        assert!(u_dtt(t, omega) <= 0.0 && u_domega2(t, omega) <= 0.0);
        let c_t = |x: f64| c_func(omega, x, c).unwrap();
        assert!((c_dt(omega, t, c) - fd(c_t, t, h)).abs() < 1e-6);
    }
}
