//! One-dimensional numerical kernels: bracketed bisection, golden-section
//! search and adaptive Simpson quadrature.
//!
//! Every target in this crate is monotone or unimodal on the interval it is
//! searched over, so these plain bracketing methods are globally convergent.

use crate::error::{Error, Result};

/// Hard cap on bisection steps. Halving a unit bracket reaches one ulp long
/// before this.
pub const MAX_BISECTION_STEPS: usize = 200;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Finds a root of `f` on `[lo, hi]` by bisection.
///
/// The endpoints must carry opposite signs (a zero at either endpoint is
/// returned directly). Iteration stops when the bracket is narrower than `tol`
/// or can no longer be split in binary64.
pub fn bisect<F>(target: &'static str, f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = (lo, hi);
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.is_nan() || f_hi.is_nan() || f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket {
            target,
            lo,
            hi,
            f_lo,
            f_hi,
        });
    }
    for _ in 0..MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let mid = 0.5 * (lo + hi);
    Err(Error::NoConvergence {
        method: "bisection",
        iterations: MAX_BISECTION_STEPS,
        estimate: mid,
        residual: f(mid),
    })
}

/// Location and value of an optimum found by a 1-D search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub x: f64,
    pub value: f64,
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
///
/// The endpoints are compared against the interior estimate at the end, so
/// maxima sitting on the boundary are reported exactly.
pub fn golden_max<F>(f: F, lo: f64, hi: f64, tol: f64) -> Extremum
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut steps = 0;
    while (b - a) > tol && steps < MAX_BISECTION_STEPS {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        steps += 1;
    }
    let mut best = if fc >= fd {
        Extremum { x: c, value: fc }
    } else {
        Extremum { x: d, value: fd }
    };
    for x in [lo, hi] {
        let fx = f(x);
        if fx > best.value {
            best = Extremum { x, value: fx };
        }
    }
    best
}

/// Golden-section search for the minimum of a unimodal `f`.
pub fn golden_min<F>(f: F, lo: f64, hi: f64, tol: f64) -> Extremum
where
    F: Fn(f64) -> f64,
{
    let e = golden_max(|x| -f(x), lo, hi, tol);
    Extremum {
        x: e.x,
        value: -e.value,
    }
}

/// Uniform grid scan followed by golden-section refinement around the best
/// grid cell.
pub fn grid_then_golden_min<F>(f: F, lo: f64, hi: f64, grid: usize, tol: f64) -> Extremum
where
    F: Fn(f64) -> f64,
{
    let grid = grid.max(3);
    let step = (hi - lo) / (grid - 1) as f64;
    let mut best_i = 0;
    let mut best = f64::INFINITY;
    for i in 0..grid {
        let x = if i + 1 == grid { hi } else { lo + step * i as f64 };
        let v = f(x);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let left = lo + step * best_i.saturating_sub(1) as f64;
    let right = (lo + step * (best_i + 1) as f64).min(hi);
    let refined = golden_min(&f, left, right, tol);
    let grid_x = if best_i + 1 == grid {
        hi
    } else {
        lo + step * best_i as f64
    };
    if refined.value <= best {
        refined
    } else {
        Extremum { x: grid_x, value: best }
    }
}

/// Result of a numerical integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Accumulated Richardson error estimate over accepted panels.
    pub error_estimate: f64,
    pub evaluations: usize,
}

const SIMPSON_MAX_DEPTH: u32 = 40;
const FALLBACK_MAX_PANELS: usize = 1 << 22;

struct SimpsonState<'a, F> {
    f: &'a F,
    evaluations: usize,
    error: f64,
    hit_depth: bool,
}

impl<F: Fn(f64) -> f64> SimpsonState<'_, F> {
    #[allow(clippy::too_many_arguments)]
    fn recurse(&mut self, a: f64, fa: f64, m: f64, fm: f64, b: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = (self.f)(lm);
        let frm = (self.f)(rm);
        self.evaluations += 2;
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        // roundoff floor: once the panels agree to a few ulps there is nothing left to refine
        let floor = 8.0 * f64::EPSILON * (left.abs() + right.abs());
        if delta.abs() <= 15.0 * tol.max(floor) {
            self.error += delta.abs() / 15.0;
            return left + right + delta / 15.0;
        }
        if depth >= SIMPSON_MAX_DEPTH {
            self.hit_depth = true;
            self.error += delta.abs() / 15.0;
            return left + right + delta / 15.0;
        }
        self.recurse(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1)
            + self.recurse(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1)
    }
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance
/// `tol`.
///
/// If the recursion bottoms out somewhere and the accumulated error estimate
/// exceeds `tol`, the integral is recomputed by composite Simpson with a
/// doubling panel count until two successive estimates agree to `tol`.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, tol: f64) -> Result<Quadrature>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut state = SimpsonState {
        f: &f,
        evaluations: 3,
        error: 0.0,
        hit_depth: false,
    };
    let value = state.recurse(a, fa, m, fm, b, fb, whole, tol, 0);
    if value.is_finite() && (!state.hit_depth || state.error <= tol) {
        return Ok(Quadrature {
            value,
            error_estimate: state.error,
            evaluations: state.evaluations,
        });
    }
    composite_doubling(&f, a, b, tol, state.evaluations)
}

fn composite_doubling<F>(f: &F, a: f64, b: f64, tol: f64, spent: usize) -> Result<Quadrature>
where
    F: Fn(f64) -> f64,
{
    let mut panels = 1024;
    let mut evaluations = spent;
    let mut previous = composite_simpson(f, a, b, panels);
    evaluations += panels + 1;
    let mut last_error = f64::INFINITY;
    while panels < FALLBACK_MAX_PANELS {
        panels *= 2;
        let current = composite_simpson(f, a, b, panels);
        evaluations += panels + 1;
        last_error = (current - previous).abs() / 15.0;
        if last_error <= tol && current.is_finite() {
            return Ok(Quadrature {
                value: current,
                error_estimate: last_error,
                evaluations,
            });
        }
        previous = current;
    }
    Err(Error::Quadrature {
        value: previous,
        error_estimate: last_error,
        tolerance: tol,
    })
}

fn composite_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut sum = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + h * i as f64);
    }
    sum * h / 3.0
}
