//! Elementary functions and channel geometry: binary entropy and its
//! inverse, divergence, the `G(α, τ)` function, Gilbert-Varshamov radius, the
//! two decoding radii `t₁`, `t₂`, and the sphere-intersection exponents `u`
//! and `c`.
//!
//! All public values are in bits (base-2 logarithms).

use serde::Serialize;

use crate::error::{clamp_to, Error, Result};
use crate::numeric::MAX_BISECTION_STEPS;

/// Binary symmetric channel with crossover probability `p`, `0 < p < 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelParam {
    p: f64,
    q: f64,
}

impl ChannelParam {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 0.5) {
            return Err(Error::Domain {
                name: "p",
                value: p,
                constraint: "0 < p < 1/2",
            });
        }
        Ok(Self { p, q: 1.0 - p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `C(p) = 1 - h₂(p)`.
    pub fn capacity(&self) -> f64 {
        1.0 - entropy(self.p)
    }

    /// `√(pq)`.
    pub fn sqrt_pq(&self) -> f64 {
        (self.p * self.q).sqrt()
    }

    /// `log₂(1/(4pq))`, the slope of the pairwise-ambiguity minimum in `ω`.
    pub fn log_inv_4pq(&self) -> f64 {
        -(4.0 * self.p * self.q).log2()
    }

    /// `log₂(q/p)`.
    pub fn log_q_over_p(&self) -> f64 {
        (self.q / self.p).log2()
    }
}

/// A code rate together with its Gilbert-Varshamov radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatePoint {
    pub rate: f64,
    pub delta_gv: f64,
}

impl RatePoint {
    pub fn new(rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate < 1.0) {
            return Err(Error::Domain {
                name: "R",
                value: rate,
                constraint: "0 < R < 1",
            });
        }
        Ok(Self {
            rate,
            delta_gv: entropy_inv(1.0 - rate),
        })
    }
}

/// Weight `α` and inner radius `τ` with `0 ≤ τ ≤ α ≤ 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaTauPair {
    pub alpha: f64,
    pub tau: f64,
}

impl AlphaTauPair {
    pub fn new(alpha: f64, tau: f64) -> Result<Self> {
        let alpha = clamp_to("alpha", alpha, 0.0, 0.5, "0 <= alpha <= 1/2")?;
        let tau = clamp_to("tau", tau, 0.0, 0.5, "0 <= tau <= 1/2")?;
        if tau > alpha + crate::error::BOUNDARY_SLACK {
            return Err(Error::Domain {
                name: "tau",
                value: tau,
                constraint: "tau <= alpha",
            });
        }
        Ok(Self {
            alpha,
            tau: tau.min(alpha),
        })
    }

    /// The pair bound to rate `R`: `τ = h₂⁻¹(h₂(α) − 1 + R)`, which needs
    /// `α ≥ δ_GV(R)`.
    pub fn for_rate(rate: f64, alpha: f64) -> Result<Self> {
        let rate = clamp_to("R", rate, 0.0, 1.0, "0 <= R <= 1")?;
        let alpha = clamp_to("alpha", alpha, 0.0, 0.5, "0 <= alpha <= 1/2")?;
        let y = entropy(alpha) - 1.0 + rate;
        let y = clamp_to("alpha", y, 0.0, 1.0, "delta_GV(R) <= alpha").map_err(|_| Error::Domain {
            name: "alpha",
            value: alpha,
            constraint: "delta_GV(R) <= alpha <= 1/2",
        })?;
        Ok(Self {
            alpha,
            tau: entropy_inv(y).min(alpha),
        })
    }

    /// `R = 1 − h₂(α) + h₂(τ)`.
    pub fn rate(&self) -> f64 {
        1.0 - entropy(self.alpha) + entropy(self.tau)
    }

    pub fn g(&self) -> f64 {
        g_raw(self.alpha, self.tau)
    }
}

#[inline]
pub(crate) fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Unchecked binary entropy; the argument is clamped into `[0, 1]`.
#[inline]
pub(crate) fn entropy(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    -xlog2x(x) - xlog2x(1.0 - x)
}

/// Unchecked inverse of the entropy on `[0, 1/2]`, by bisection run to full
/// binary64 resolution.
pub(crate) fn entropy_inv(y: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    if y >= 1.0 {
        return 0.5;
    }
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    for _ in 0..MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if entropy(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Binary entropy `h₂(x)` in bits.
pub fn h2(x: f64) -> Result<f64> {
    let x = clamp_to("x", x, 0.0, 1.0, "0 <= x <= 1")?;
    Ok(entropy(x))
}

/// The unique `x ∈ [0, 1/2]` with `h₂(x) = y`.
pub fn h2_inv(y: f64) -> Result<f64> {
    let y = clamp_to("y", y, 0.0, 1.0, "0 <= y <= 1")?;
    Ok(entropy_inv(y))
}

/// Binary Kullback-Leibler divergence `D(x‖y)` in bits.
pub fn kl_div(x: f64, y: f64) -> Result<f64> {
    let x = clamp_to("x", x, 0.0, 1.0, "0 <= x <= 1")?;
    if !(y > 0.0 && y < 1.0) {
        return Err(Error::Domain {
            name: "y",
            value: y,
            constraint: "0 < y < 1",
        });
    }
    Ok(kl_raw(x, y))
}

pub(crate) fn kl_raw(x: f64, y: f64) -> f64 {
    let a = if x > 0.0 { x * (x / y).log2() } else { 0.0 };
    let b = if x < 1.0 {
        (1.0 - x) * ((1.0 - x) / (1.0 - y)).log2()
    } else {
        0.0
    };
    a + b
}

/// `G(α, τ) = 2(α(1−α) − τ(1−τ)) / (1 + 2√(τ(1−τ)))`.
pub fn g_func(alpha: f64, tau: f64) -> Result<f64> {
    let pair = AlphaTauPair::new(alpha, tau)?;
    Ok(pair.g())
}

#[inline]
pub(crate) fn g_raw(alpha: f64, tau: f64) -> f64 {
    // α(1−α) − τ(1−τ) factors as (α−τ)(1−α−τ)
    2.0 * (alpha - tau) * (1.0 - alpha - tau) / (1.0 + 2.0 * (tau * (1.0 - tau)).sqrt())
}

/// The completed-square form `1/2 − √(τ(1−τ)) − (1−2α)²/(2(1+2√(τ(1−τ))))`.
pub fn g_func_completed_square(alpha: f64, tau: f64) -> Result<f64> {
    let pair = AlphaTauPair::new(alpha, tau)?;
    let s = (pair.tau * (1.0 - pair.tau)).sqrt();
    let a = 1.0 - 2.0 * pair.alpha;
    Ok(0.5 - s - a * a / (2.0 * (1.0 + 2.0 * s)))
}

/// Gilbert-Varshamov radius: `δ ≤ 1/2` with `h₂(δ) = 1 − R`.
pub fn delta_gv(rate: f64) -> Result<f64> {
    let rate = clamp_to("R", rate, 0.0, 1.0, "0 <= R <= 1")?;
    Ok(entropy_inv(1.0 - rate))
}

/// `t₁(ω) = (1 − √(1−2ω))/2`.
pub fn t1(omega: f64) -> Result<f64> {
    let omega = clamp_to("omega", omega, 0.0, 0.5, "0 <= omega <= 1/2")?;
    Ok(t1_raw(omega))
}

#[inline]
pub(crate) fn t1_raw(omega: f64) -> f64 {
    // rationalized to avoid cancellation at small ω
    omega / (1.0 + (1.0 - 2.0 * omega).max(0.0).sqrt())
}

/// Elias radius `t₂(ω, p) = ω/2 + (1−ω)p`.
pub fn t2(omega: f64, ch: ChannelParam) -> Result<f64> {
    let omega = clamp_to("omega", omega, 0.0, 1.0, "0 <= omega <= 1")?;
    Ok(t2_raw(omega, ch))
}

#[inline]
pub(crate) fn t2_raw(omega: f64, ch: ChannelParam) -> f64 {
    0.5 * omega + (1.0 - omega) * ch.p
}

/// `ω₁(p) = 2√(pq)/(1 + 2√(pq))`, where `t₁` and `t₂` cross.
pub fn omega1(ch: ChannelParam) -> f64 {
    let s = 2.0 * ch.sqrt_pq();
    s / (1.0 + s)
}

/// `t(ω, p) = min{t₁(ω), t₂(ω, p)}`.
pub fn t_radius(omega: f64, ch: ChannelParam) -> Result<f64> {
    let omega = clamp_to("omega", omega, 0.0, 0.5, "0 <= omega <= 1/2")?;
    Ok(t_radius_raw(omega, ch))
}

#[inline]
pub(crate) fn t_radius_raw(omega: f64, ch: ChannelParam) -> f64 {
    t1_raw(omega).min(t2_raw(omega, ch))
}

fn check_sphere_pair(t: f64, omega: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&omega) {
        return Err(Error::Domain {
            name: "omega",
            value: omega,
            constraint: "0 <= omega < 1",
        });
    }
    let t = clamp_to("t", t, 0.5 * omega, 1.0 - 0.5 * omega, "omega/2 <= t <= 1 - omega/2")?;
    Ok((t, omega))
}

/// Exponent of `|Z(t, ω)|`: `u(t, ω) = ω + (1−ω) h₂((2t−ω)/(2(1−ω)))`.
pub fn u_func(t: f64, omega: f64) -> Result<f64> {
    let (t, omega) = check_sphere_pair(t, omega)?;
    Ok(u_raw(t, omega))
}

#[inline]
pub(crate) fn u_raw(t: f64, omega: f64) -> f64 {
    omega + (1.0 - omega) * entropy((2.0 * t - omega) / (2.0 * (1.0 - omega)))
}

/// Pairwise-ambiguity exponent `c(ω, t, p) = t log(q/p) − log q − u(t, ω)`.
pub fn c_func(omega: f64, t: f64, ch: ChannelParam) -> Result<f64> {
    let (t, omega) = check_sphere_pair(t, omega)?;
    Ok(c_raw(omega, t, ch))
}

#[inline]
pub(crate) fn c_raw(omega: f64, t: f64, ch: ChannelParam) -> f64 {
    t * ch.log_q_over_p() - ch.q.log2() - u_raw(t, omega)
}

/// `∂u/∂t = log((2−2t−ω)/(2t−ω))`.
pub fn u_dt(t: f64, omega: f64) -> f64 {
    ((2.0 - 2.0 * t - omega) / (2.0 * t - omega)).log2()
}

/// `∂²u/∂t² = −4(1−ω)/((2t−ω)(2−2t−ω) ln 2)`.
pub fn u_dtt(t: f64, omega: f64) -> f64 {
    -4.0 * (1.0 - omega) / ((2.0 * t - omega) * (2.0 - 2.0 * t - omega) * std::f64::consts::LN_2)
}

/// `∂u/∂ω = −½ log((1−ω)²/((2t−ω)(2−2t−ω)))`.
pub fn u_domega(t: f64, omega: f64) -> f64 {
    let w1 = 1.0 - omega;
    -0.5 * (w1 * w1 / ((2.0 * t - omega) * (2.0 - 2.0 * t - omega))).log2()
}

/// `∂²u/∂ω² = −(1−2t)²/((1−ω)(2t−ω)(2−2t−ω) ln 2)`.
pub fn u_domega2(t: f64, omega: f64) -> f64 {
    let a = 1.0 - 2.0 * t;
    -a * a / ((1.0 - omega) * (2.0 * t - omega) * (2.0 - 2.0 * t - omega) * std::f64::consts::LN_2)
}

/// `∂c/∂t = log(q(2t−ω)/(p(2−2t−ω)))`, non-positive for `t ≤ t₂(ω, p)`.
pub fn c_dt(omega: f64, t: f64, ch: ChannelParam) -> f64 {
    (ch.q * (2.0 * t - omega) / (ch.p * (2.0 - 2.0 * t - omega))).log2()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(p: f64) -> ChannelParam {
        ChannelParam::new(p).unwrap()
    }

    #[test]
    fn entropy_special_values() {
        assert_eq!(h2(0.5).unwrap(), 1.0);
        assert_eq!(h2(0.0).unwrap(), 0.0);
        assert_eq!(h2(1.0).unwrap(), 0.0);
        let direct = -0.11 * 0.11_f64.log2() - 0.89 * 0.89_f64.log2();
        let v = h2(0.11).unwrap();
        assert!((v - direct).abs() < 1e-15);
        assert!((v - h2(0.89).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn entropy_domain() {
        assert!(h2(-0.1).is_err());
        assert!(h2(1.5).is_err());
        // within slack: clamped
        assert_eq!(h2(-1e-13).unwrap(), 0.0);
        assert!(h2_inv(1.2).is_err());
    }

    #[test]
    fn entropy_inverse() {
        assert_eq!(h2_inv(1.0).unwrap(), 0.5);
        assert_eq!(h2_inv(0.0).unwrap(), 0.0);
        let y = h2(0.11).unwrap();
        assert!((h2_inv(y).unwrap() - 0.11).abs() < 1e-10);
    }

    #[test]
    fn divergence() {
        assert_eq!(kl_div(0.3, 0.3).unwrap(), 0.0);
        let v = kl_div(0.0, 0.25).unwrap();
        assert!((v - (1.0 / 0.75_f64).log2()).abs() < 1e-15);
        assert!(kl_div(0.2, 0.0).is_err());
        assert!(kl_div(0.2, 1.0).is_err());
    }

    #[test]
    fn g_function_cases() {
        for a in [0.0, 0.1, 0.37, 0.5] {
            assert_eq!(g_func(a, a).unwrap(), 0.0);
        }
        for tau in [0.0, 0.05, 0.2, 0.5] {
            let v = g_func(0.5, tau).unwrap();
            assert!((v - (0.5 - (tau * (1.0 - tau)).sqrt())).abs() < 1e-13);
        }
        let a = g_func(0.3, 0.1).unwrap();
        let b = g_func_completed_square(0.3, 0.1).unwrap();
        let by_hand = 2.0 * (0.3 * 0.7 - 0.1 * 0.9) / (1.0 + 2.0 * 0.09_f64.sqrt());
        assert!((a - b).abs() < 1e-13);
        assert!((a - by_hand).abs() < 1e-15);
        assert!(g_func(0.2, 0.3).is_err());
    }

    #[test]
    fn gv_radius() {
        assert_eq!(delta_gv(1.0).unwrap(), 0.0);
        assert_eq!(delta_gv(0.0).unwrap(), 0.5);
        let d = delta_gv(0.30524).unwrap();
        assert!((h2(d).unwrap() - 0.69476).abs() < 1e-9);
    }

    #[test]
    fn radii() {
        assert_eq!(t1(0.0).unwrap(), 0.0);
        assert_eq!(t1(0.5).unwrap(), 0.5);
        assert!(t1(0.6).is_err());
        let c = ch(0.01);
        assert_eq!(t2(0.0, c).unwrap(), 0.01);
        assert_eq!(t2(1.0, c).unwrap(), 0.5);
        let w1 = omega1(c);
        let expect = c.p().sqrt() / (c.q().sqrt() + c.p().sqrt());
        assert!((t1(w1).unwrap() - expect).abs() < 1e-12);
        assert!((t2(w1, c).unwrap() - t1(w1).unwrap()).abs() < 1e-12);
        // 2t₁ − ω = 2t₁²
        for w in [0.01, 0.2, 0.45] {
            let t = t1(w).unwrap();
            assert!((2.0 * t - w - 2.0 * t * t).abs() < 1e-15);
        }
    }

    #[test]
    fn t_radius_switches_at_omega1() {
        let c = ch(0.01);
        assert_eq!(t_radius(0.0, c).unwrap(), 0.0);
        let w1 = omega1(c);
        assert!((t1(w1).unwrap() - t2(w1, c).unwrap()).abs() < 1e-12);
        assert_eq!(t_radius(w1 * 0.9, c).unwrap(), t1(w1 * 0.9).unwrap());
        assert_eq!(t_radius(w1 * 1.1, c).unwrap(), t2(w1 * 1.1, c).unwrap());
    }

    #[test]
    fn omega1_limits() {
        assert!(omega1(ch(1e-12)) < 1e-5);
        assert!((omega1(ch(0.5 - 1e-9)) - 0.5).abs() < 1e-9);
        let mut prev = 0.0;
        for i in 1..100 {
            let w = omega1(ch(0.005 * i as f64));
            assert!(w > prev);
            prev = w;
        }
    }

    #[test]
    fn u_special_points() {
        for w in [0.0, 0.1, 0.4] {
            assert!((u_func(w / 2.0, w).unwrap() - w).abs() < 1e-15);
            assert!((u_func(0.5, w).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!(u_func(0.04, 0.1).is_err());
    }

    #[test]
    fn c_minimum_at_elias_radius() {
        let c = ch(0.05);
        let w = 0.2;
        let t = t2(w, c).unwrap();
        let m = c_func(w, t, c).unwrap();
        assert!((m - 0.5 * w * c.log_inv_4pq()).abs() < 1e-12);
        assert!(c_dt(w, t - 0.01, c) < 0.0);
        let direct = 0.15 * (0.95_f64 / 0.05).log2() - 0.95_f64.log2() - (0.2 + 0.8 * h2((0.3 - 0.2) / 1.6).unwrap());
        assert!((c_func(0.2, 0.15, c).unwrap() - direct).abs() < 1e-14);
    }
}
