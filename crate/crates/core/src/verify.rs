//! Self-check suites: analytic identities, reference constants, the
//! combinatorial oracles and cross-method agreement.
//!
//! Every suite is deterministic for a given seed and thread count
//! independent.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{w_domega_at_g, w_func, WArgs};
use crate::combinatorics::{hamming_7_4, lemma2_random_suite, spectrum, z_count_enumerate, z_count_exact};
use crate::error::Result;
use crate::numeric::golden_min;
use crate::rates::{dg_dalpha, global_constants, omega_lp, parametric_sweep, r0_equation, tau_r_radical};
use crate::scalar::{entropy, entropy_inv, g_raw, AlphaTauPair, ChannelParam};
use crate::spectrum::{l_raw, mu, mu_closed, mu_domega, mu_half, mu_integral, mu_integral_tol, SpectrumArgs};

/// Reference values of the global constants and their tolerances.
pub const REFERENCE_CONSTANTS: [(&str, f64, f64); 4] = [
    ("tau0", 0.054507, 1e-5),
    ("R0", 0.30524, 1e-5),
    ("p0", 0.036587, 1e-5),
    ("p1", 0.0078176, 1e-6),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Constants,
    Lemma2,
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Identities, Suite::Constants, Suite::Lemma2, Suite::Oracle];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Constants => "constants",
            Suite::Lemma2 => "lemma2",
            Suite::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One residual family inside a suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: &str, residuals: &[f64], tolerance: f64) -> Self {
        // NaN residuals count as failures
        let max_residual = residuals.iter().fold(
            0.0_f64,
            |m, &r| if r.is_nan() || m.is_nan() { f64::NAN } else { m.max(r) },
        );
        Self {
            name: name.to_string(),
            cases: residuals.len(),
            max_residual,
            tolerance,
            passed: !residuals.is_empty() && max_residual <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub cases: usize,
    /// Worst absolute residual over all checks.
    pub max_residual: f64,
    pub passed: bool,
    pub seeds: Vec<u64>,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    fn from_checks(suite: Suite, seeds: Vec<u64>, checks: Vec<Check>) -> Self {
        Self {
            suite,
            cases: checks.iter().map(|c| c.cases).sum(),
            max_residual: checks.iter().fold(0.0_f64, |m, c| {
                if c.max_residual.is_nan() {
                    f64::NAN
                } else {
                    m.max(c.max_residual)
                }
            }),
            passed: checks.iter().all(|c| c.passed),
            seeds,
            checks,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Replaces every per-check tolerance when set.
    pub tol: Option<f64>,
    pub lemma2_codes: usize,
    pub oracle_points: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 42,
            tol: None,
            lemma2_codes: 10_000,
            oracle_points: 1000,
        }
    }
}

impl VerifyOptions {
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

pub fn run(suite: Suite, opts: &VerifyOptions) -> Result<VerifyReport> {
    match suite {
        Suite::Identities => identities(opts),
        Suite::Constants => constants(opts),
        Suite::Lemma2 => lemma2(opts),
        Suite::Oracle => oracle(opts),
    }
}

/// `|μ_half(h₂(τ), G) − (h₂(τ) + h₂(G) − 1)|` at `α = 1/2`, `ω = G(1/2, τ)`.
pub fn half_identity_residuals() -> Result<Vec<f64>> {
    (1..=49)
        .map(|j| {
            let tau = j as f64 / 100.0;
            let r = entropy(tau);
            let g = g_raw(0.5, tau);
            Ok((mu_half(r, g)? - (r + entropy(g) - 1.0)).abs())
        })
        .collect()
}

/// `|μ(R, α, G) − (L(G) + R − 1)|` on `α_i = i/80`, `τ_j = α_i j/41`,
/// `i, j = 1..=40`.
pub fn top_distance_residuals() -> Result<Vec<f64>> {
    let grid: Vec<(f64, f64)> = (1..=40)
        .flat_map(|i| {
            let alpha = 0.0125 * i as f64;
            (1..=40).map(move |j| (alpha, alpha * j as f64 / 41.0))
        })
        .collect();
    grid.par_iter()
        .map(|&(alpha, tau)| {
            let pair = AlphaTauPair::new(alpha, tau)?;
            let args = SpectrumArgs::at_g(pair);
            Ok((mu_closed(&args)? - (l_raw(args.omega) + args.rate - 1.0)).abs())
        })
        .collect()
}

/// Along the weight sweep, with `p = p(α)` so that `G = ω₁(p)`:
/// `|μ(R, α, ω₁) − ((ω₁/2) log₂(1/(4pq)) + R + log₂(1 + 2√(pq)) − 1)|`.
pub fn sweep_identity_residuals() -> Result<Vec<f64>> {
    (2..=49)
        .map(|i| {
            let pt = parametric_sweep(i as f64 / 100.0)?;
            let ch = ChannelParam::new(pt.p)?;
            let pair = AlphaTauPair::new(pt.alpha, pt.tau)?;
            let args = SpectrumArgs::at_g(pair);
            let expect = 0.5 * pt.omega * ch.log_inv_4pq() + pt.rate + (1.0 + 2.0 * ch.sqrt_pq()).log2() - 1.0;
            Ok((mu(&args)? - expect).abs())
        })
        .collect()
}

fn identities(opts: &VerifyOptions) -> Result<VerifyReport> {
    let checks = vec![
        Check::new("half-weight identity at G", &half_identity_residuals()?, opts.tol(1e-9)),
        Check::new(
            "mu(R, alpha, G) = L(G) + R - 1",
            &top_distance_residuals()?,
            opts.tol(1e-9),
        ),
        Check::new(
            "sweep identity at omega1(p)",
            &sweep_identity_residuals()?,
            opts.tol(1e-8),
        ),
    ];
    Ok(VerifyReport::from_checks(Suite::Identities, vec![], checks))
}

fn constants(opts: &VerifyOptions) -> Result<VerifyReport> {
    let c = global_constants()?;
    let values = [c.tau0, c.r0, c.p0, c.p1];
    let mut checks: Vec<Check> = REFERENCE_CONSTANTS
        .iter()
        .zip(values)
        .map(|(&(name, reference, tol), v)| Check::new(name, &[(v - reference).abs()], opts.tol(tol)))
        .collect();
    checks.push(Check::new(
        "tau0 equation residual",
        &[r0_equation(c.tau0).abs()],
        opts.tol(1e-12),
    ));
    Ok(VerifyReport::from_checks(Suite::Constants, vec![], checks))
}

/// Mismatches between the closed-form `|Z|` and enumeration over all
/// admissible `(tn, ωn)` with `n ≤ max_n`.
pub fn z_count_mismatches(max_n: u32) -> (usize, usize) {
    let cases: Vec<(u32, u32, u32)> = (1..=max_n)
        .flat_map(|n| {
            (0..=n)
                .step_by(2)
                .flat_map(move |wn| (wn / 2..=n).map(move |tn| (n, tn, wn)))
        })
        .collect();
    let bad = cases
        .par_iter()
        .filter(|&&(n, tn, wn)| {
            let exact = z_count_exact(n.into(), tn.into(), wn.into()).expect("admissible by construction");
            exact != z_count_enumerate(n, tn, wn).into()
        })
        .count();
    (cases.len(), bad)
}

fn lemma2(opts: &VerifyOptions) -> Result<VerifyReport> {
    let hamming = spectrum(&hamming_7_4());
    let expect = [1.0, 0.0, 0.0, 7.0, 7.0, 0.0, 0.0, 1.0];
    let hamming_res: Vec<f64> = hamming.b_all().iter().zip(expect).map(|(b, e)| (b - e).abs()).collect();
    let (z_cases, z_bad) = z_count_mismatches(12);
    let suite = lemma2_random_suite(opts.seed, opts.lemma2_codes)?;
    let counted = |name: &str, cases: usize, bad: usize| Check {
        name: name.to_string(),
        cases,
        max_residual: bad as f64,
        tolerance: 0.0,
        passed: bad == 0,
    };
    let checks = vec![
        Check::new("Hamming [7,4] distance distribution", &hamming_res, 0.0),
        counted("sphere intersection count vs enumeration (n <= 12)", z_cases, z_bad),
        counted(
            &format!(
                "counterexamples to M <= omega/a ({} premise cases)",
                suite.premise_cases
            ),
            suite.codes,
            suite.violations,
        ),
        counted("average distance above 2t(1-t)n", suite.codes, suite.plotkin_violations),
    ];
    let report = VerifyReport::from_checks(Suite::Lemma2, vec![opts.seed], checks);
    Ok(report)
}

/// A random interior point `(α, τ, ω)` with `ω ∈ [0.02G, 0.98G]`.
fn random_args(rng: &mut ChaCha8Rng, half: bool) -> Result<SpectrumArgs> {
    let alpha = if half { 0.5 } else { rng.gen_range(0.02..=0.5) };
    let tau = alpha * rng.gen_range(0.02..0.98);
    let pair = AlphaTauPair::new(alpha, tau)?;
    SpectrumArgs::from_pair(pair, pair.g() * rng.gen_range(0.02..0.98))
}

/// `max |μ_integral − μ_closed|` and, at `α = 1/2`, `max |μ_integral − μ_half|`.
pub fn mu_cross_method(seed: u64, points: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let general: Vec<SpectrumArgs> = (0..points)
        .map(|_| random_args(&mut rng, false))
        .collect::<Result<_>>()?;
    let half: Vec<SpectrumArgs> = (0..points)
        .map(|_| random_args(&mut rng, true))
        .collect::<Result<_>>()?;
    let closed = general
        .par_iter()
        .map(|a| Ok((mu_integral(a)?.value - mu_closed(a)?).abs()))
        .collect::<Result<Vec<_>>>()?;
    let halves = half
        .par_iter()
        .map(|a| Ok((mu_integral(a)?.value - mu_half(a.rate, a.omega)?).abs()))
        .collect::<Result<Vec<_>>>()?;
    Ok((closed, halves))
}

/// Brute-force `ω_R`: 4000-point grid of `G(α, τ_R(α))` over
/// `[δ_GV(R), 1/2]`, then golden-section refinement around the best cell.
pub fn omega_lp_grid(rate: f64) -> Result<f64> {
    const GRID: usize = 4000;
    let lo = entropy_inv(1.0 - rate);
    let f = |alpha: f64| {
        AlphaTauPair::for_rate(rate, alpha)
            .map(|p| p.g())
            .unwrap_or(f64::INFINITY)
    };
    let step = (0.5 - lo) / GRID as f64;
    let best = (0..=GRID)
        .map(|i| (i, f(lo + step * i as f64)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let a = lo + step * best.saturating_sub(1) as f64;
    let b = (lo + step * (best + 1) as f64).min(0.5);
    Ok(golden_min(f, a, b, 1e-12).value.min(f(lo + step * best as f64)))
}

/// `|ω_lp(R) − brute force|` at `n` rates spread over `(R₀, 0.95)`.
pub fn omega_lp_residuals(n: usize) -> Result<Vec<f64>> {
    let r0 = global_constants()?.r0;
    (0..n)
        .into_par_iter()
        .map(|k| {
            let rate = r0 + (0.95 - r0) * (k as f64 + 0.5) / n as f64;
            Ok((omega_lp(rate)?.omega_r - omega_lp_grid(rate)?).abs())
        })
        .collect()
}

/// `|τ_R − radical(ω_R, α_R)|` on the same rates.
pub fn tau_radical_residuals(n: usize) -> Result<Vec<f64>> {
    (0..n)
        .map(|k| {
            let pt = omega_lp(0.95 * (k as f64 + 0.5) / n as f64)?;
            Ok((pt.tau_r - tau_r_radical(pt.omega_r, pt.alpha_r)).abs())
        })
        .collect()
}

/// Five-point central difference.
pub fn central_difference<F: Fn(f64) -> Result<f64>>(f: F, x: f64, h: f64) -> Result<f64> {
    Ok((8.0 * (f(x + h)? - f(x - h)?) - (f(x + 2.0 * h)? - f(x - 2.0 * h)?)) / (12.0 * h))
}

/// Left derivative at an endpoint where `f` carries `(x₀ − x)^{k/2}` terms:
/// backward quotients at `h, h/4, h/16, …` with Richardson elimination of
/// the `h^{1/2}, h, h^{3/2}, …` error terms.
pub fn one_sided_derivative<F: Fn(f64) -> Result<f64>>(f: F, x0: f64, h: f64, levels: usize) -> Result<f64> {
    let f0 = f(x0)?;
    let mut table = (0..levels)
        .map(|k| {
            let hk = h / 4f64.powi(k as i32);
            Ok((f0 - f(x0 - hk)?) / hk)
        })
        .collect::<Result<Vec<f64>>>()?;
    for order in 1..levels {
        let w = 2f64.powi(order as i32);
        for k in 0..levels - order {
            table[k] = (w * table[k + 1] - table[k]) / (w - 1.0);
        }
    }
    Ok(table[0])
}

/// `∂μ/∂ω` against central differences of the quadrature, step `1e-5`.
pub fn mu_derivative_residuals(seed: u64, points: usize) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let args: Vec<SpectrumArgs> = (0..points)
        .map(|_| random_args(&mut rng, false))
        .collect::<Result<_>>()?;
    args.par_iter()
        .map(|a| {
            let h = 1e-5_f64.min(0.25 * a.omega.min(a.g() - a.omega));
            let f = |w: f64| mu_integral_tol(&SpectrumArgs { omega: w, ..*a }, 1e-14).map(|q| q.value);
            Ok((mu_domega(a)? - central_difference(f, a.omega, h)?).abs())
        })
        .collect()
}

/// `dG(α, τ_R(α))/dα` against central differences along the rate constraint.
pub fn dg_dalpha_residuals(seed: u64, points: usize) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..points)
        .map(|_| {
            let rate = rng.gen_range(0.05..0.9);
            let lo = entropy_inv(1.0 - rate);
            let alpha = lo + (0.5 - lo) * rng.gen_range(0.05..0.95);
            let pair = AlphaTauPair::for_rate(rate, alpha)?;
            let h = 1e-3 * (alpha - lo).min(0.5 - alpha);
            let f = |a: f64| AlphaTauPair::for_rate(rate, a).map(|p| p.g());
            Ok((dg_dalpha(pair.alpha, pair.tau)? - central_difference(f, alpha, h)?).abs())
        })
        .collect()
}

/// `∂W/∂ω` at `ω = G` against the extrapolated one-sided difference.
pub fn w_derivative_residuals(seed: u64, points: usize) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..points)
        .map(|_| {
            let ch = ChannelParam::new(rng.gen_range(0.001..0.2))?;
            let rate = rng.gen_range(0.05..0.9);
            let lo = entropy_inv(1.0 - rate);
            let alpha = lo + (0.5 - lo) * rng.gen_range(0.05..0.95);
            let pair = AlphaTauPair::for_rate(rate, alpha)?;
            let g = pair.g();
            let f = |w: f64| {
                let spectrum = SpectrumArgs {
                    omega: w.min(g),
                    ..SpectrumArgs::at_g(pair)
                };
                w_func(&WArgs { spectrum, ch })
            };
            let fd = one_sided_derivative(f, g, 0.05 * g, 6)?;
            Ok((w_domega_at_g(g, ch) - fd).abs())
        })
        .collect()
}

fn oracle(opts: &VerifyOptions) -> Result<VerifyReport> {
    let (closed, half) = mu_cross_method(opts.seed, opts.oracle_points)?;
    let derivative_seed = opts.seed.wrapping_add(1);
    let checks = vec![
        Check::new("mu: quadrature vs closed form", &closed, opts.tol(1e-8)),
        Check::new("mu: quadrature vs half-weight form", &half, opts.tol(1e-8)),
        Check::new("omega_R vs brute-force grid", &omega_lp_residuals(20)?, opts.tol(1e-6)),
        Check::new("tau_R radical", &tau_radical_residuals(20)?, opts.tol(1e-10)),
        Check::new(
            "d mu / d omega",
            &mu_derivative_residuals(derivative_seed, 100)?,
            opts.tol(1e-6),
        ),
        Check::new("dG/dalpha", &dg_dalpha_residuals(derivative_seed, 100)?, opts.tol(1e-6)),
        Check::new(
            "dW/domega at G",
            &w_derivative_residuals(derivative_seed, 100)?,
            opts.tol(1e-6),
        ),
    ];
    Ok(VerifyReport::from_checks(
        Suite::Oracle,
        vec![opts.seed, derivative_seed],
        checks,
    ))
}
