use thiserror::Error;

/// Errors raised by the bound and exponent computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the region where the quantity is defined.
    #[error("{name} = {value} is outside its domain ({constraint})")]
    Domain {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// A bracketing root finder was handed an interval without a sign change.
    #[error("bracket [{lo}, {hi}] does not enclose a root of {target} (f(lo) = {f_lo:e}, f(hi) = {f_hi:e})")]
    Bracket {
        target: &'static str,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// An iterative method ran out of iterations.
    #[error("{method} did not converge after {iterations} iterations (estimate {estimate}, residual {residual:e})")]
    NoConvergence {
        method: &'static str,
        iterations: usize,
        estimate: f64,
        residual: f64,
    },

    /// Quadrature could not meet the requested tolerance.
    #[error("quadrature missed tolerance {tolerance:e}: value {value}, error estimate {error_estimate:e}")]
    Quadrature {
        value: f64,
        error_estimate: f64,
        tolerance: f64,
    },

    /// A combinatorial count was requested at non-integral lattice points.
    #[error("{0}")]
    Integrality(String),

    /// A code handed to the constant-weight checks has mixed weights.
    #[error("word {index} has weight {found}, expected constant weight {expected}")]
    NotConstantWeight { index: usize, expected: u32, found: u32 },

    #[error("invalid code: {0}")]
    InvalidCode(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Inputs this close to a domain boundary are snapped onto it.
pub const BOUNDARY_SLACK: f64 = 1e-12;

/// Checks `lo <= x <= hi`, clamping values within [`BOUNDARY_SLACK`] of an end.
pub(crate) fn clamp_to(name: &'static str, x: f64, lo: f64, hi: f64, constraint: &'static str) -> Result<f64> {
    if x.is_nan() || x < lo - BOUNDARY_SLACK || x > hi + BOUNDARY_SLACK {
        return Err(Error::Domain {
            name,
            value: x,
            constraint,
        });
    }
    Ok(x.clamp(lo, hi))
}
