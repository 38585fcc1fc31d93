//! Critical rates and the linear-programming distance bound.
//!
//! `ω_R = min_α G(α, τ_R(α))` over `α ∈ [δ_GV(R), 1/2]` is the first
//! linear-programming bound on relative minimum distance. The thresholds
//! `R_crit`, `R₁`, `R₂`, `R_min` and the constants `τ₀`, `R₀`, `p₀`, `p₁` all
//! derive from it and from the sphere-packing tangency.

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{bisect, golden_max, grid_then_golden_min};
use crate::scalar::{entropy, entropy_inv, g_raw, t1_raw, AlphaTauPair, ChannelParam};

/// Argument tolerance for the 1-D root finds.
pub const ROOT_TOL: f64 = 1e-13;

/// Optimizer of the linear-programming bound at rate `R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LpBoundPoint {
    pub rate: f64,
    /// `ω_R = G(α_R, τ_R)`.
    pub omega_r: f64,
    pub alpha_r: f64,
    pub tau_r: f64,
}

/// `dG(α, τ_R(α))/dα` at fixed rate, in the natural-log form
/// `2A/D − (B/2s)(1 − A²/D²) ln((1−α)/α)/ln((1−τ)/τ)` with `A = 1−2α`,
/// `B = 1−2τ`, `s = √(τ(1−τ))`, `D = 1 + 2s`.
pub fn dg_dalpha(alpha: f64, tau: f64) -> Result<f64> {
    let pair = AlphaTauPair::new(alpha, tau)?;
    if !(pair.tau > 0.0 && pair.alpha < 0.5) {
        return Err(Error::Domain {
            name: "tau",
            value: tau,
            constraint: "0 < tau <= alpha < 1/2",
        });
    }
    let (alpha, tau) = (pair.alpha, pair.tau);
    let a = 1.0 - 2.0 * alpha;
    Ok(a * stationarity(alpha, tau))
}

/// `dG/dα` divided by `1 − 2α`. Same sign as the derivative on `α < 1/2`
/// and finite at `α = 1/2`, where it reduces to the `τ₀` equation.
pub fn stationarity(alpha: f64, tau: f64) -> f64 {
    if tau <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let s = (tau * (1.0 - tau)).sqrt();
    let d = 1.0 + 2.0 * s;
    let a = 1.0 - 2.0 * alpha;
    let b = 1.0 - 2.0 * tau;
    // ln((1−α)/α)/(1−2α) = 2 atanh(A)/A → 2 as A → 0
    let log_ratio = if a.abs() < 1e-8 {
        2.0 + 2.0 * a * a / 3.0
    } else {
        2.0 * a.atanh() / a
    };
    2.0 / d - b / (2.0 * s) * (1.0 - a * a / (d * d)) * log_ratio / ((1.0 - tau) / tau).ln()
}

/// `ω_R(α) = G(α, τ_R(α))` with `τ_R(α) = h₂⁻¹(h₂(α) − 1 + R)`.
pub fn omega_r_alpha(rate: f64, alpha: f64) -> Result<f64> {
    Ok(AlphaTauPair::for_rate(rate, alpha)?.g())
}

/// Left-hand side of the `τ₀` equation,
/// `(1−2τ)(1 + 1/(2√(τ(1−τ)))) − ln((1−τ)/τ)` (natural log).
pub fn r0_equation(tau: f64) -> f64 {
    let s = (tau * (1.0 - tau)).sqrt();
    (1.0 - 2.0 * tau) * (1.0 + 0.5 / s) - ((1.0 - tau) / tau).ln()
}

/// Rate-independent thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GlobalConstants {
    /// Root of [`r0_equation`] in `(0, 0.2)`.
    pub tau0: f64,
    /// `R₀ = h₂(τ₀)`: below it the LP minimum sits at `α = 1/2`.
    pub r0: f64,
    /// Crossover probability where `R₂` and `R₁` merge (both equal `R₀`).
    pub p0: f64,
    /// Crossover probability where `R₁ = R_crit`.
    pub p1: f64,
    /// `|r0_equation(τ₀)|`.
    pub tau0_residual: f64,
}

static CONSTANTS: OnceLock<Result<GlobalConstants>> = OnceLock::new();

/// `τ₀, R₀, p₀, p₁`, computed on first use and cached.
pub fn global_constants() -> Result<GlobalConstants> {
    CONSTANTS.get_or_init(compute_constants).clone()
}

fn compute_constants() -> Result<GlobalConstants> {
    let tau0 = bisect("tau0 equation", r0_equation, 1e-6, 0.2, 1e-16)?;
    let r0 = entropy(tau0);
    // r2 − r1 vanishes identically beyond p0, so the merge point is located
    // through R₁(p₀) = R₀ instead
    let p0 = bisect("R1(p) - R0", |p| r1_raw(p) - r0, 1e-3, 0.2, 1e-16)?;
    let p1 = bisect("R1(p) - Rcrit(p)", |p| r1_raw(p) - r_crit_raw(p), 1e-3, 0.05, 1e-16)?;
    Ok(GlobalConstants {
        tau0,
        r0,
        p0,
        p1,
        tau0_residual: r0_equation(tau0).abs(),
    })
}

fn r0() -> Result<f64> {
    global_constants().map(|c| c.r0)
}

/// Solves the linear-programming bound at rate `R`, `0 ≤ R < 1`.
///
/// Below `R₀` the optimum is `α = 1/2`, `ω_R = 1/2 − √(τ(1−τ))` with
/// `τ = h₂⁻¹(R)`. Above it the optimal weight is the root of `dG/dα = 0`
/// along the rate constraint.
pub fn omega_lp(rate: f64) -> Result<LpBoundPoint> {
    if !(0.0..1.0).contains(&rate) {
        return Err(Error::Domain {
            name: "R",
            value: rate,
            constraint: "0 <= R < 1",
        });
    }
    if rate <= r0()? {
        let tau = entropy_inv(rate);
        return Ok(LpBoundPoint {
            rate,
            omega_r: g_raw(0.5, tau),
            alpha_r: 0.5,
            tau_r: tau,
        });
    }
    let delta = entropy_inv(1.0 - rate);
    let objective = |alpha: f64| {
        let y = (entropy(alpha) - 1.0 + rate).max(0.0);
        stationarity(alpha, entropy_inv(y))
    };
    let lo = (delta + 1e-12).min(0.5);
    let alpha = bisect("dG/dalpha along the rate constraint", objective, lo, 0.5, ROOT_TOL)?;
    let pair = AlphaTauPair::for_rate(rate, alpha)?;
    Ok(LpBoundPoint {
        rate,
        omega_r: pair.g(),
        alpha_r: pair.alpha,
        tau_r: pair.tau,
    })
}

/// `τ_R` recovered from `(ω_R, α_R)` by the explicit radical
/// `½{1 − √(1 − [√((1−ω)² − (1−2α)²) − ω]²)}`.
pub fn tau_r_radical(omega: f64, alpha: f64) -> f64 {
    let a = 1.0 - 2.0 * alpha;
    let inner = ((1.0 - omega).powi(2) - a * a).max(0.0).sqrt() - omega;
    0.5 * (1.0 - (1.0 - inner * inner).max(0.0).sqrt())
}

fn r_crit_raw(p: f64) -> f64 {
    let (sp, sq) = (p.sqrt(), (1.0 - p).sqrt());
    1.0 - entropy(sp / (sp + sq))
}

/// Critical rate `1 − h₂(√p/(√p + √q))`: above it the sphere-packing
/// exponent is exact.
pub fn r_crit(ch: ChannelParam) -> f64 {
    r_crit_raw(ch.p())
}

fn tau1_raw(p: f64) -> f64 {
    let f = 4.0 * p * (1.0 - p);
    let r = f.sqrt();
    (1.0 - r.sqrt()).powi(2) / (2.0 * (1.0 + r))
}

/// `τ₁(p) = (1 − (4pq)^{1/4})² / (2(1 + √(4pq)))`, the radius with
/// `G(1/2, τ₁) = ω₁(p)`.
pub fn tau1(ch: ChannelParam) -> f64 {
    tau1_raw(ch.p())
}

fn r1_raw(p: f64) -> f64 {
    entropy(tau1_raw(p))
}

/// `R₁(p) = h₂(τ₁(p))`.
pub fn r1(ch: ChannelParam) -> f64 {
    r1_raw(ch.p())
}

/// `R_min(p) = 1 − h₂(ω₁(p))`, where the expurgated branch of the lower
/// envelope meets the straight line.
pub fn r_min(ch: ChannelParam) -> f64 {
    1.0 - entropy(crate::scalar::omega1(ch))
}

/// `R₂(p)`: the rate with `ω_R = ω₁(p)`, by bisection on the decreasing
/// map `R ↦ ω_R`.
pub fn r2(ch: ChannelParam) -> Result<f64> {
    // at or below R₀ the optimum weight is 1/2 and G(1/2, τ₁) = ω₁, so R₂ = R₁
    let r1 = r1_raw(ch.p());
    if r1 <= r0()? {
        return Ok(r1);
    }
    let target = crate::scalar::omega1(ch);
    let f = |rate: f64| match omega_lp(rate) {
        Ok(pt) => pt.omega_r - target,
        Err(_) => f64::NAN,
    };
    // R₂ < R_crit < C, so ω_C already lies below ω₁
    bisect("omega_R - omega1(p)", f, 0.0, ch.capacity(), ROOT_TOL)
}

/// `R₂(p) = 1 − max{h₂(α) − h₂(τ) : G(α, τ) = ω₁(p)}`, maximized over
/// `α ∈ [t₁(ω₁), 1/2]` with `τ` solved from the constraint.
pub fn r2_max_form(ch: ChannelParam) -> Result<f64> {
    let w1 = crate::scalar::omega1(ch);
    let lo = t1_raw(w1);
    let tau_on_level = |alpha: f64| -> f64 {
        // G(α, ·) decreases from 2α(1−α) ≥ ω₁ to 0 on [0, α]
        if g_raw(alpha, 0.0) <= w1 {
            return 0.0;
        }
        bisect("G(alpha, tau) - omega1", |t| g_raw(alpha, t) - w1, 0.0, alpha, 1e-16).unwrap_or(f64::NAN)
    };
    let objective = |alpha: f64| entropy(alpha) - entropy(tau_on_level(alpha));
    let coarse = grid_then_golden_min(|a| -objective(a), lo, 0.5, 200, 1e-13);
    let best = golden_max(objective, (coarse.x - 1e-3).max(lo), (coarse.x + 1e-3).min(0.5), 1e-14);
    let value = best.value.max(-coarse.value);
    if !value.is_finite() {
        return Err(Error::NoConvergence {
            method: "max-form R2",
            iterations: 0,
            estimate: value,
            residual: f64::NAN,
        });
    }
    Ok(1.0 - value)
}

/// The rate thresholds of one channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalRates {
    pub p: f64,
    pub capacity: f64,
    pub r_crit: f64,
    pub r1: f64,
    pub r2: f64,
    pub r_min: f64,
}

impl CriticalRates {
    pub fn compute(ch: ChannelParam) -> Result<Self> {
        Ok(Self {
            p: ch.p(),
            capacity: ch.capacity(),
            r_crit: r_crit(ch),
            r1: r1(ch),
            r2: r2(ch)?,
            r_min: r_min(ch),
        })
    }
}

/// One point of the weight-parametrized description of `R₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub alpha: f64,
    /// Root of `dG/dα = 0` below `α`.
    pub tau: f64,
    /// `R(α) = 1 − h₂(α) + h₂(τ(α))`.
    pub rate: f64,
    /// `G(α, τ(α))`.
    pub omega: f64,
    /// Crossover probability with `ω₁(p) = ω(α)`, so that `R₂(p) = R(α)`.
    pub p: f64,
}

/// `α ↦ (τ(α), R(α), ω(α), p(α))` for `0 < α < 1/2`.
pub fn parametric_sweep(alpha: f64) -> Result<SweepPoint> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::Domain {
            name: "alpha",
            value: alpha,
            constraint: "0 < alpha < 1/2",
        });
    }
    let hi = alpha * (1.0 - 1e-9);
    let lo = 1e-14_f64.min(0.5 * hi);
    let tau = bisect(
        "dG/dalpha in tau",
        |t| stationarity(alpha, t),
        lo,
        hi,
        1e-18_f64.max(alpha * 1e-16),
    )?;
    let g = g_raw(alpha, tau);
    Ok(SweepPoint {
        alpha,
        tau,
        rate: 1.0 - entropy(alpha) + entropy(tau),
        omega: g,
        p: p_for_omega1(g),
    })
}

/// Inverse of `ω₁(p)`: `(1 − G − √(1−2G))/(2(1−G))`, evaluated as
/// `G²/(2(1−G)(1−G+√(1−2G)))`.
pub fn p_for_omega1(g: f64) -> f64 {
    let x = 1.0 - g;
    g * g / (2.0 * x * (x + (1.0 - 2.0 * g).max(0.0).sqrt()))
}
