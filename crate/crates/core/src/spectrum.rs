//! The spectrum exponent `μ(R, α, ω)`: the guaranteed growth rate of the
//! number of codeword pairs at relative distance `ω` for a code of rate `R`
//! after restriction to a constant-weight `αn` subcode.
//!
//! Three independent evaluations are provided:
//!
//! * [`mu_integral`] integrates the defining integrand by adaptive Simpson;
//! * [`mu_closed`] uses the Euler-substitution antiderivative;
//! * [`mu_half`] is the dedicated `α = 1/2` closed form.
//!
//! They agree to ~1e-12 on the admissible region and are cross-checked in the
//! test suites.

use std::cell::Cell;
use std::f64::consts::{E, LN_2};

use serde::Serialize;

use crate::error::{clamp_to, Error, Result, BOUNDARY_SLACK};
use crate::numeric::{adaptive_simpson, Quadrature};
use crate::scalar::{entropy, entropy_inv, t1_raw, AlphaTauPair};

/// Default absolute tolerance handed to the quadrature.
pub const MU_QUADRATURE_TOL: f64 = 1e-12;

/// Discriminant values this far below zero are treated as the double root.
const DISCRIMINANT_SLACK: f64 = 1e-13;

/// Arguments of `μ`: rate, weight, distance and the induced radius `τ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumArgs {
    pub rate: f64,
    pub alpha: f64,
    pub omega: f64,
    /// `τ = h₂⁻¹(h₂(α) − 1 + R)`.
    pub tau: f64,
}

impl SpectrumArgs {
    /// Validates `δ_GV(R) ≤ α ≤ 1/2` and `0 ≤ ω ≤ G(α, τ)`.
    pub fn new(rate: f64, alpha: f64, omega: f64) -> Result<Self> {
        let pair = AlphaTauPair::for_rate(rate, alpha)?;
        let mut args = Self::from_pair(pair, omega)?;
        args.rate = rate;
        Ok(args)
    }

    /// Builds the arguments from an explicit `(α, τ)`; the rate is
    /// `1 − h₂(α) + h₂(τ)`.
    pub fn from_pair(pair: AlphaTauPair, omega: f64) -> Result<Self> {
        let g = pair.g();
        let omega = clamp_to("omega", omega, 0.0, g, "0 <= omega <= G(alpha, tau)")?;
        Ok(Self {
            rate: pair.rate(),
            alpha: pair.alpha,
            omega,
            tau: pair.tau,
        })
    }

    /// Arguments at the upper end of the admissible distance range, `ω = G(α, τ)`.
    pub fn at_g(pair: AlphaTauPair) -> Self {
        Self {
            rate: pair.rate(),
            alpha: pair.alpha,
            omega: pair.g(),
            tau: pair.tau,
        }
    }

    pub fn g(&self) -> f64 {
        crate::scalar::g_raw(self.alpha, self.tau)
    }

    fn s(&self) -> f64 {
        (self.tau * (1.0 - self.tau)).sqrt()
    }

    /// `a₁ = 2(α(1−α) − τ(1−τ))`.
    fn a1(&self) -> f64 {
        2.0 * (self.alpha - self.tau) * (1.0 - self.alpha - self.tau)
    }

    /// `B²ω² − 2a₁ω + a₁²` in the factored form
    /// `(1+2s)(G−ω)(a₁ − (1−2s)ω)`, `s = √(τ(1−τ))`.
    fn discriminant(&self) -> Result<f64> {
        let s = self.s();
        let d = (1.0 + 2.0 * s) * (self.g() - self.omega) * (self.a1() - (1.0 - 2.0 * s) * self.omega);
        if d < -DISCRIMINANT_SLACK {
            return Err(Error::Domain {
                name: "omega",
                value: self.omega,
                constraint: "omega <= G(alpha, tau) (negative discriminant)",
            });
        }
        Ok(d.max(0.0))
    }
}

/// Auxiliary quantities of the non-integral representation of `μ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormAux {
    /// `1 − 2α`
    pub a: f64,
    /// `1 − 2τ`
    pub b: f64,
    /// `2[α(1−α) − τ(1−τ)]`
    pub a1: f64,
    /// Euler-substitution variable `(√(B²ω² − 2a₁ω + a₁²) + a₁)/ω`.
    pub v: f64,
    /// `v − 1`, computed without cancellation.
    pub v_minus_1: f64,
    /// `v² − B²`, computed without cancellation.
    pub v2_minus_b2: f64,
}

impl ClosedFormAux {
    pub fn new(args: &SpectrumArgs) -> Result<Self> {
        let omega = args.omega;
        if omega <= 0.0 {
            return Err(Error::Domain {
                name: "omega",
                value: omega,
                constraint: "omega > 0 for the closed form (mu(R, alpha, 0) = 0)",
            });
        }
        let a1 = args.a1();
        let root = args.discriminant()?.sqrt();
        let v = (root + a1) / omega;
        Ok(Self {
            a: 1.0 - 2.0 * args.alpha,
            b: 1.0 - 2.0 * args.tau,
            a1,
            v,
            v_minus_1: (root + a1 - omega) / omega,
            v2_minus_b2: 2.0 * a1 * (a1 - omega + root) / (omega * omega),
        })
    }

    /// `v − B` via `(v² − B²)/(v + B)`.
    pub fn v_minus_b(&self) -> f64 {
        self.v2_minus_b2 / (self.v + self.b)
    }

    /// `T(A, B, ω)` in bits.
    pub fn t_term(&self, omega: f64) -> f64 {
        let Self {
            a,
            b,
            a1,
            v,
            v_minus_1,
            v2_minus_b2,
        } = *self;
        // (v² − A²)/(v² − B²) = 1 + (B² − A²)/(v² − B²), and B² − A² = 2a₁
        let ratio_log = (2.0 * a1 / v2_minus_b2).ln_1p() / LN_2;
        let b_log = (2.0 * b / self.v_minus_b()).ln_1p() / LN_2;
        let a_log = if a > 0.0 {
            let v_minus_a = (v2_minus_b2 + 2.0 * a1) / (v + a);
            a * (2.0 * a / v_minus_a).ln_1p() / LN_2
        } else {
            0.0
        };
        omega * v_minus_1.log2() - (1.0 - omega) * ratio_log + b * b_log
            - a_log
            - v_minus_1 * 2.0 * a1 / (v2_minus_b2 * LN_2)
    }
}

/// `μ` by adaptive quadrature of the defining integral, with error estimate.
pub fn mu_integral(args: &SpectrumArgs) -> Result<Quadrature> {
    mu_integral_tol(args, MU_QUADRATURE_TOL)
}

/// [`mu_integral`] with an explicit absolute tolerance on the integral.
pub fn mu_integral_tol(args: &SpectrumArgs, tol: f64) -> Result<Quadrature> {
    let SpectrumArgs { alpha, omega, tau, .. } = *args;
    if omega == 0.0 {
        return Ok(Quadrature {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let p0 = (alpha - tau) * (1.0 - alpha - tau);
    let worst = Cell::new(0.0_f64);
    let integrand = |y: f64| {
        let p = p0 - y * (1.0 - 2.0 * y);
        let q = (alpha - y) * (1.0 - alpha - y);
        let d = p * p - 4.0 * q * y * y;
        if d < worst.get() {
            worst.set(d);
        }
        ((p + d.max(0.0).sqrt()) / q).log2()
    };
    let quad = adaptive_simpson(integrand, 0.0, 0.5 * omega, tol)?;
    if worst.get() < -BOUNDARY_SLACK {
        return Err(Error::Domain {
            name: "omega",
            value: omega,
            constraint: "P^2 - 4Qy^2 >= 0 on the integration range",
        });
    }
    let tail = (1.0 - omega) * entropy((alpha - 0.5 * omega) / (1.0 - omega));
    Ok(Quadrature {
        value: entropy(alpha) - 2.0 * quad.value - tail,
        error_estimate: 2.0 * quad.error_estimate,
        evaluations: quad.evaluations,
    })
}

/// `μ` via the non-integral (Euler-substitution) representation. Requires
/// `ω > 0`.
pub fn mu_closed(args: &SpectrumArgs) -> Result<f64> {
    let aux = ClosedFormAux::new(args)?;
    let omega = args.omega;
    let head = (1.0 - omega) * entropy((args.alpha - 0.5 * omega) / (1.0 - omega)) - entropy(args.alpha)
        + 2.0 * entropy(omega)
        + omega * (2.0 * omega / E).log2();
    Ok(head - aux.t_term(omega))
}

/// `μ` with the `ω = 0` limit (zero) filled in; closed form elsewhere.
pub fn mu(args: &SpectrumArgs) -> Result<f64> {
    if args.omega == 0.0 {
        Ok(0.0)
    } else {
        mu_closed(args)
    }
}

/// `μ(R, 1/2, ω)` from its dedicated closed form with
/// `g = (1 − 2τ + √((1−2τ)² − 4ω(1−ω)))/2`, `τ = h₂⁻¹(R)`.
pub fn mu_half(rate: f64, omega: f64) -> Result<f64> {
    let rate = clamp_to("R", rate, 0.0, 1.0, "0 <= R <= 1")?;
    let tau = entropy_inv(rate);
    let s = (tau * (1.0 - tau)).sqrt();
    if omega.is_nan() || omega <= 0.0 {
        return Err(Error::Domain {
            name: "omega",
            value: omega,
            constraint: "omega > 0",
        });
    }
    // (1−2τ)² − 4ω(1−ω) = (1−2ω−2s)(1−2ω+2s)
    let disc = (1.0 - 2.0 * omega - 2.0 * s) * (1.0 - 2.0 * omega + 2.0 * s);
    if disc < -BOUNDARY_SLACK {
        return Err(Error::Domain {
            name: "omega",
            value: omega,
            constraint: "omega <= G(1/2, tau) (negative discriminant of g)",
        });
    }
    let b = 1.0 - 2.0 * tau;
    let root = disc.max(0.0).sqrt();
    let g = 0.5 * (b + root);
    let x = 1.0 - omega;
    // −log τ + log(1 − ω − (1−2τ)g) = log(8x²(1−τ)/(2x − B² + B√disc))
    let merged = (8.0 * x * x * (1.0 - tau) / (2.0 * x - b * b + b * root)).log2();
    let value = -2.0 * x * x.log2() - 2.0 * (1.0 - tau) * (1.0 - tau).log2() + b * (tau - omega + g).log2() + merged
        - 2.0 * omega * g.log2()
        - 2.0;
    Ok(value)
}

/// `L(ω) = 2h₂(t₁(ω)) − ω − (1−ω) h₂((2t₁(ω) − ω)/(2(1−ω)))`.
pub fn l_func(omega: f64) -> Result<f64> {
    let omega = clamp_to("omega", omega, 0.0, 0.5, "0 <= omega <= 1/2")?;
    Ok(l_raw(omega))
}

pub(crate) fn l_raw(omega: f64) -> f64 {
    let t = t1_raw(omega);
    2.0 * entropy(t) - omega - (1.0 - omega) * entropy((2.0 * t - omega) / (2.0 * (1.0 - omega)))
}

fn check_domega(args: &SpectrumArgs) -> Result<()> {
    if args.omega >= 2.0 * args.alpha {
        return Err(Error::Domain {
            name: "omega",
            value: args.omega,
            constraint: "omega < 2 alpha",
        });
    }
    Ok(())
}

/// Closed-form `∂μ/∂ω`:
/// `log[(1−ω)√((2α−ω)(2−2α−ω)) / (a₁ − ω(1−ω) + √(B²ω² − 2a₁ω + a₁²))]`.
pub fn mu_domega(args: &SpectrumArgs) -> Result<f64> {
    check_domega(args)?;
    let w = args.omega;
    let a = args.alpha;
    let num = (1.0 - w) * ((2.0 * a - w) * (2.0 - 2.0 * a - w)).sqrt();
    let den = args.a1() - w * (1.0 - w) + args.discriminant()?.sqrt();
    Ok((num / den).log2())
}

/// `∂μ/∂ω` in the integrand form
/// `½ log((1−ω)²/((α−ω/2)(1−α−ω/2))) − log((P + √(P² − Qω²))/Q)` at `y = ω/2`.
pub fn mu_domega_integrand_form(args: &SpectrumArgs) -> Result<f64> {
    check_domega(args)?;
    let w = args.omega;
    let a = args.alpha;
    let y = 0.5 * w;
    let p = 0.5 * args.a1() - y * (1.0 - 2.0 * y);
    let q = (a - y) * (1.0 - a - y);
    let d = (p * p - q * w * w).max(0.0);
    Ok(0.5 * ((1.0 - w) * (1.0 - w) / q).log2() - ((p + d.sqrt()) / q).log2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{g_raw, h2};

    #[test]
    fn zero_distance_is_zero() {
        let args = SpectrumArgs::new(0.4, 0.45, 0.0).unwrap();
        assert_eq!(mu_integral(&args).unwrap().value, 0.0);
        assert_eq!(mu(&args).unwrap(), 0.0);
        assert!(mu_closed(&args).is_err());
    }

    #[test]
    fn cross_method_interior_point() {
        let args = SpectrumArgs::new(0.4, 0.45, 0.1).unwrap();
        let q = mu_integral(&args).unwrap();
        let c = mu_closed(&args).unwrap();
        assert!((q.value - c).abs() < 1e-8, "{} vs {}", q.value, c);
        assert!(q.error_estimate <= 1e-10);
    }

    #[test]
    fn half_forms_agree() {
        for (r, w) in [(0.4, 0.1), (0.2, 0.2), (0.05, 0.3), (0.6, 0.05)] {
            let args = SpectrumArgs::new(r, 0.5, w).unwrap();
            let c = mu_closed(&args).unwrap();
            let h = mu_half(r, w).unwrap();
            let q = mu_integral(&args).unwrap().value;
            assert!((c - h).abs() < 1e-10, "R={r} w={w}: {c} {h}");
            assert!((q - h).abs() < 1e-8);
        }
    }

    #[test]
    fn half_form_small_omega_tends_to_zero() {
        let v = mu_half(0.3, 1e-8).unwrap();
        assert!(v.abs() < 1e-6);
    }

    #[test]
    fn half_form_rejects_large_omega() {
        let tau = entropy_inv(0.3);
        let g = 0.5 - (tau * (1.0 - tau)).sqrt();
        assert!(mu_half(0.3, g + 1e-3).is_err());
        assert!(mu_half(0.3, g).is_ok());
        assert!(mu_half(0.3, 0.0).is_err());
    }

    #[test]
    fn useful_formula_at_g() {
        for tau in [0.01, 0.1, 0.3, 0.49] {
            let r = h2(tau).unwrap();
            let g = g_raw(0.5, tau);
            let expect = r + h2(g).unwrap() - 1.0;
            assert!((mu_half(r, g).unwrap() - expect).abs() < 1e-10);
            let args = SpectrumArgs::at_g(AlphaTauPair::new(0.5, tau).unwrap());
            assert!((mu_integral(&args).unwrap().value - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn top_distance_point() {
        let pair = AlphaTauPair::new(0.3, 0.1).unwrap();
        let args = SpectrumArgs::at_g(pair);
        let expect = l_func(args.omega).unwrap() + pair.rate() - 1.0;
        assert!((mu_closed(&args).unwrap() - expect).abs() < 1e-10);
    }

    #[test]
    fn l_endpoints() {
        assert_eq!(l_func(0.0).unwrap(), 0.0);
        assert!((l_func(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!(l_func(0.6).is_err());
    }

    #[test]
    fn aux_identities_at_g() {
        let pair = AlphaTauPair::new(0.35, 0.07).unwrap();
        let args = SpectrumArgs::at_g(pair);
        let aux = ClosedFormAux::new(&args).unwrap();
        assert!((2.0 * aux.a1 - (aux.b * aux.b - aux.a * aux.a)).abs() < 1e-13);
        let s = (pair.tau * (1.0 - pair.tau)).sqrt();
        assert!((aux.v - (1.0 + 2.0 * s)).abs() < 1e-10);
        assert!((aux.v - aux.a1 / args.omega).abs() < 1e-10);
        assert!((aux.v_minus_b() - 2.0 * (pair.tau * aux.v).sqrt()).abs() < 1e-10);
        assert!(aux.b > aux.a && aux.a >= 0.0);
    }

    #[test]
    fn derivative_forms_agree() {
        for (r, a, w) in [(0.4, 0.45, 0.1), (0.7, 0.3, 0.05), (0.2, 0.5, 0.2)] {
            let args = SpectrumArgs::new(r, a, w).unwrap();
            let d1 = mu_domega(&args).unwrap();
            let d2 = mu_domega_integrand_form(&args).unwrap();
            assert!((d1 - d2).abs() < 1e-10);
        }
    }

    #[test]
    fn inadmissible_omega_rejected() {
        assert!(SpectrumArgs::new(0.4, 0.45, 0.4).is_err());
        assert!(SpectrumArgs::new(0.4, 0.05, 0.1).is_err());
    }
}
