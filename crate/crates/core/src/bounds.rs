//! Envelopes of the reliability function `E(R, p)`.
//!
//! * `E_sp(R) = D(δ_GV(R) ‖ p)` is exact on `[R_crit, C]`.
//! * The lower envelope `E_low` follows the expurgated bound up to `R_min`,
//!   the straight line `1 − log(1 + 2√(pq)) − R` up to `R_crit`, then `E_sp`.
//! * The upper envelope `E_up` coincides with `E_low` on `[R₂, C]`; below
//!   `R₂` it is driven by the spectrum exponent `μ`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{clamp_to, Error, Result};
use crate::numeric::{golden_max, grid_then_golden_min, Extremum};
use crate::rates::{global_constants, omega_lp, CriticalRates};
use crate::scalar::{c_raw, entropy, entropy_inv, kl_raw, t_radius_raw, AlphaTauPair, ChannelParam};
use crate::spectrum::{l_raw, mu, mu_domega, SpectrumArgs};

/// Grid size of the outer minimization over the weight `α`.
pub const ALPHA_GRID: usize = 200;
/// Bracket tolerance of the golden-section refinements.
pub const GOLDEN_TOL: f64 = 1e-10;

/// Which piece of the upper envelope is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    #[serde(rename = "below_R2")]
    BelowR2,
    #[serde(rename = "straight_line")]
    StraightLine,
    #[serde(rename = "sphere_packing")]
    SpherePacking,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::BelowR2 => "below_R2",
            Region::StraightLine => "straight_line",
            Region::SpherePacking => "sphere_packing",
        }
    }
}

fn check_rate(rate: f64, ch: ChannelParam) -> Result<f64> {
    clamp_to("R", rate, 0.0, ch.capacity(), "0 <= R <= C(p)")
}

/// Sphere-packing exponent `D(δ_GV(R) ‖ p)`.
pub fn sphere_packing_exponent(rate: f64, ch: ChannelParam) -> Result<f64> {
    let rate = check_rate(rate, ch)?;
    Ok(sphere_packing_raw(rate, ch))
}

fn sphere_packing_raw(rate: f64, ch: ChannelParam) -> f64 {
    if rate >= ch.capacity() {
        return 0.0;
    }
    let delta = entropy_inv(1.0 - rate);
    if delta <= ch.p() {
        return 0.0;
    }
    kl_raw(delta, ch.p())
}

/// `1 − log₂(1 + 2√(pq)) − R`.
pub fn straight_line(rate: f64, ch: ChannelParam) -> f64 {
    1.0 - (1.0 + 2.0 * ch.sqrt_pq()).log2() - rate
}

/// `(ω/2) log₂(1/(4pq)) − h₂(τ) − h₂(ω) + 1` with `R = h₂(τ)`,
/// `ω = 1/2 − √(τ(1−τ))`.
pub fn half_weight_bound(rate: f64, ch: ChannelParam) -> Result<f64> {
    let rate = clamp_to("R", rate, 0.0, 1.0, "0 <= R <= 1")?;
    let tau = entropy_inv(rate);
    let omega = 0.5 - (tau * (1.0 - tau)).sqrt();
    Ok(0.5 * omega * ch.log_inv_4pq() - rate - entropy(omega) + 1.0)
}

/// Lower envelope of `E(R, p)`.
pub fn e_low(rate: f64, ch: ChannelParam) -> Result<f64> {
    let rate = check_rate(rate, ch)?;
    let r_min = crate::rates::r_min(ch);
    let r_crit = crate::rates::r_crit(ch);
    Ok(if rate <= r_min {
        -entropy_inv(1.0 - rate) * (2.0 * ch.sqrt_pq()).log2()
    } else if rate <= r_crit {
        straight_line(rate, ch)
    } else {
        sphere_packing_raw(rate, ch)
    })
}

/// `1 − R + min_α {G/2 · log₂(1/(4pq)) − L(G)}` over `α ∈ [δ_GV(R), 1/2]`,
/// `G = G(α, τ_R(α))`.
pub fn spectrum_min_form(rate: f64, ch: ChannelParam) -> Result<Extremum> {
    let rate = clamp_to("R", rate, 0.0, 1.0, "0 <= R <= 1")?;
    let k = ch.log_inv_4pq();
    let lo = entropy_inv(1.0 - rate);
    let f = |alpha: f64| match AlphaTauPair::for_rate(rate, alpha) {
        Ok(pair) => {
            let g = pair.g();
            0.5 * g * k - l_raw(g)
        }
        Err(_) => f64::INFINITY,
    };
    let best = grid_then_golden_min(f, lo, 0.5, ALPHA_GRID, GOLDEN_TOL);
    Ok(Extremum {
        x: best.x,
        value: 1.0 - rate + best.value,
    })
}

/// The relaxation `1 − R + ω_R/2 · log₂(1/(4pq)) − L(ω_R)`.
pub fn spectrum_relaxed_form(rate: f64, ch: ChannelParam) -> Result<f64> {
    let pt = omega_lp(rate)?;
    Ok(1.0 - rate + 0.5 * pt.omega_r * ch.log_inv_4pq() - l_raw(pt.omega_r))
}

/// Critical rates of one channel together with `R₀`; all envelope queries
/// for that channel go through it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopeContext {
    pub ch: ChannelParam,
    pub rates: CriticalRates,
    pub r0: f64,
}

impl EnvelopeContext {
    pub fn new(ch: ChannelParam) -> Result<Self> {
        Ok(Self {
            ch,
            rates: CriticalRates::compute(ch)?,
            r0: global_constants()?.r0,
        })
    }

    pub fn region(&self, rate: f64) -> Region {
        if rate >= self.rates.r_crit {
            Region::SpherePacking
        } else if rate >= self.rates.r2 {
            Region::StraightLine
        } else {
            Region::BelowR2
        }
    }

    pub fn e_low(&self, rate: f64) -> Result<f64> {
        e_low(rate, self.ch)
    }

    pub fn e_up(&self, rate: f64) -> Result<f64> {
        let rate = check_rate(rate, self.ch)?;
        match self.region(rate) {
            Region::SpherePacking => Ok(sphere_packing_raw(rate, self.ch)),
            Region::StraightLine => Ok(straight_line(rate, self.ch)),
            Region::BelowR2 if rate <= self.r0 => half_weight_bound(rate, self.ch),
            Region::BelowR2 => spectrum_min_form(rate, self.ch).map(|e| e.value),
        }
    }

    /// Upper envelope with the region below `R₂` relaxed to the `ω_R` form.
    pub fn e_up_relaxed(&self, rate: f64) -> Result<f64> {
        let rate = check_rate(rate, self.ch)?;
        match self.region(rate) {
            Region::BelowR2 => spectrum_relaxed_form(rate, self.ch),
            _ => self.e_up(rate),
        }
    }
}

/// Upper envelope of `E(R, p)`. Builds a fresh [`EnvelopeContext`]; reuse
/// one when evaluating many rates.
pub fn e_up(rate: f64, ch: ChannelParam) -> Result<f64> {
    EnvelopeContext::new(ch)?.e_up(rate)
}

/// Arguments of `W(ω, α, R, p) = (ω/2) log₂(1/(4pq)) − μ(R, α, ω)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WArgs {
    pub spectrum: SpectrumArgs,
    pub ch: ChannelParam,
}

impl WArgs {
    pub fn new(omega: f64, alpha: f64, rate: f64, ch: ChannelParam) -> Result<Self> {
        Ok(Self {
            spectrum: SpectrumArgs::new(rate, alpha, omega)?,
            ch,
        })
    }
}

pub fn w_func(args: &WArgs) -> Result<f64> {
    Ok(0.5 * args.spectrum.omega * args.ch.log_inv_4pq() - mu(&args.spectrum)?)
}

/// `∂W/∂ω` from the closed-form `∂μ/∂ω`.
pub fn w_domega(args: &WArgs) -> Result<f64> {
    Ok(0.5 * args.ch.log_inv_4pq() - mu_domega(&args.spectrum)?)
}

/// `∂W/∂ω` at `ω = G`: `log₂(G/(√(4pq)(1−G)))`.
pub fn w_domega_at_g(g: f64, ch: ChannelParam) -> f64 {
    (g / (2.0 * ch.sqrt_pq() * (1.0 - g))).log2()
}

/// Inner maximum over `δ ∈ [0, G(α, τ)]` of
/// `c(δ, t(δ, p), p) − μ(R, α, δ)`; concave in `δ`.
pub fn proposition1_inner(rate: f64, alpha: f64, ch: ChannelParam) -> Result<Extremum> {
    let pair = AlphaTauPair::for_rate(rate, alpha)?;
    let g = pair.g();
    let objective = |delta: f64| -> f64 {
        let t = t_radius_raw(delta, ch);
        let args = SpectrumArgs {
            rate,
            alpha: pair.alpha,
            omega: delta.min(g),
            tau: pair.tau,
        };
        match mu(&args) {
            Ok(m) => c_raw(delta, t, ch) - m,
            Err(_) => f64::NEG_INFINITY,
        }
    };
    let best = golden_max(objective, 0.0, g, GOLDEN_TOL);
    if !best.value.is_finite() {
        return Err(Error::NoConvergence {
            method: "inner maximum over delta",
            iterations: 0,
            estimate: best.x,
            residual: best.value,
        });
    }
    Ok(best)
}

/// Outer minimum over `α ∈ [δ_GV(R), 1/2]` of [`proposition1_inner`].
/// `x` of the result is the minimizing weight.
pub fn proposition1_bound(rate: f64, ch: ChannelParam) -> Result<Extremum> {
    let rate = check_rate(rate, ch)?;
    if rate >= ch.capacity() {
        return Err(Error::Domain {
            name: "R",
            value: rate,
            constraint: "0 <= R < C(p)",
        });
    }
    let lo = entropy_inv(1.0 - rate);
    let f = |alpha: f64| {
        proposition1_inner(rate, alpha, ch)
            .map(|e| e.value)
            .unwrap_or(f64::INFINITY)
    };
    let best = grid_then_golden_min(f, lo, 0.5, ALPHA_GRID, GOLDEN_TOL);
    if !best.value.is_finite() {
        return Err(Error::NoConvergence {
            method: "outer minimum over alpha",
            iterations: ALPHA_GRID,
            estimate: best.x,
            residual: best.value,
        });
    }
    Ok(best)
}

/// One sampled rate of a [`BoundCurve`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundRow {
    pub rate: f64,
    pub e_low: f64,
    pub e_up: f64,
    pub region: Region,
}

/// Both envelopes sampled on `[0, C(p)]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCurve {
    pub p: f64,
    pub rates: CriticalRates,
    pub rows: Vec<BoundRow>,
}

/// Samples `n_points` uniform rates on `[0, C]` plus the seams
/// `R_min, R₂, R_crit`. Rows are strictly increasing in `R`.
pub fn bound_curve(ch: ChannelParam, n_points: usize) -> Result<BoundCurve> {
    if n_points < 2 {
        return Err(Error::Domain {
            name: "n_points",
            value: n_points as f64,
            constraint: "n_points >= 2",
        });
    }
    let ctx = EnvelopeContext::new(ch)?;
    let cap = ch.capacity();
    let mut grid: Vec<f64> = (0..n_points)
        .map(|i| {
            if i + 1 == n_points {
                cap
            } else {
                cap * i as f64 / (n_points - 1) as f64
            }
        })
        .collect();
    grid.extend([ctx.rates.r_min, ctx.rates.r2, ctx.rates.r_crit]);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let rows = grid
        .par_iter()
        .map(|&rate| {
            Ok(BoundRow {
                rate,
                e_low: ctx.e_low(rate)?,
                e_up: ctx.e_up(rate)?,
                region: ctx.region(rate),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundCurve {
        p: ch.p(),
        rates: ctx.rates,
        rows,
    })
}
