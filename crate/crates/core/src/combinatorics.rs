//! Exact combinatorics on small binary codes: distance distributions,
//! sphere-intersection counts and the Johnson-type bound for
//! constant-weight codes.
//!
//! Words are packed into `u64`, so block lengths up to 64 are supported.

use num_bigint::BigUint;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// A binary code of length `n ≤ 64` with distinct codewords.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BinaryCode {
    n: usize,
    words: Vec<u64>,
}

impl BinaryCode {
    pub fn new(n: usize, words: Vec<u64>) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::InvalidCode(format!("block length {n} not in 1..=64")));
        }
        if words.is_empty() {
            return Err(Error::InvalidCode("empty code".into()));
        }
        if n < 64 {
            if let Some(i) = words.iter().position(|&w| w >> n != 0) {
                return Err(Error::InvalidCode(format!("word {i} has bits beyond length {n}")));
            }
        }
        let mut sorted = words.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCode("repeated codeword".into()));
        }
        Ok(Self { n, words })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Cardinality `M`.
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// The common weight if all codewords have the same weight.
    pub fn constant_weight(&self) -> Result<u32> {
        let w = self.words[0].count_ones();
        match self.words.iter().position(|x| x.count_ones() != w) {
            None => Ok(w),
            Some(index) => Err(Error::NotConstantWeight {
                index,
                expected: w,
                found: self.words[index].count_ones(),
            }),
        }
    }
}

/// Distance distribution: `pair_counts[i]` is the number of ordered pairs at
/// distance `i`, so `B_i = pair_counts[i] / M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodeSpectrum {
    pub m: u64,
    pub pair_counts: Vec<u64>,
}

impl CodeSpectrum {
    /// `B_i` as a float.
    pub fn b(&self, i: usize) -> f64 {
        self.pair_counts[i] as f64 / self.m as f64
    }

    pub fn b_all(&self) -> Vec<f64> {
        (0..self.pair_counts.len()).map(|i| self.b(i)).collect()
    }

    /// Ordered pairs with `0 < d < limit`.
    pub fn close_pairs(&self, limit: usize) -> u64 {
        self.pair_counts.iter().take(limit).skip(1).sum()
    }
}

/// Exact distance distribution by pairwise XOR popcounts.
pub fn spectrum(code: &BinaryCode) -> CodeSpectrum {
    let mut counts = vec![0u64; code.n + 1];
    counts[0] = code.len() as u64;
    for (i, &x) in code.words.iter().enumerate() {
        for &y in &code.words[i + 1..] {
            counts[(x ^ y).count_ones() as usize] += 2;
        }
    }
    CodeSpectrum {
        m: code.len() as u64,
        pair_counts: counts,
    }
}

/// `C(n, k)` by the multiplicative recurrence.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `|Z|` for integer radius `tn` and distance `wn`:
/// `C(n − wn, tn − wn/2) · C(wn, wn/2)`.
pub fn z_count_exact(n: u64, tn: u64, wn: u64) -> Result<BigUint> {
    if wn % 2 != 0 || wn > n || 2 * tn < wn || tn > n {
        return Err(Error::Integrality(format!(
            "need even distance {wn} <= n = {n} and radius {tn} >= {wn}/2"
        )));
    }
    Ok(binomial(n - wn, tn - wn / 2) * binomial(wn, wn / 2))
}

fn lattice(name: &str, x: f64, n: usize) -> Result<u64> {
    let scaled = x * n as f64;
    let r = scaled.round();
    if r < 0.0 || (scaled - r).abs() > 1e-9 {
        return Err(Error::Integrality(format!(
            "{name}·n = {scaled} is not a non-negative integer"
        )));
    }
    Ok(r as u64)
}

/// Number of points at distance `tn` from both of two words at distance
/// `ωn`. `tn`, `ωn`, `ωn/2` must be integers.
pub fn z_count(n: usize, t: f64, omega: f64) -> Result<BigUint> {
    let tn = lattice("t", t, n)?;
    let wn = lattice("omega", omega, n)?;
    z_count_exact(n as u64, tn, wn)
}

/// `|Z|` by enumerating all `2ⁿ` points against `0…0` and the word with
/// `wn` leading ones. For `n ≤ 24`.
pub fn z_count_enumerate(n: u32, tn: u32, wn: u32) -> u64 {
    assert!(n <= 24 && wn <= n);
    let x2 = (1u64 << wn) - 1;
    (0..1u64 << n)
        .filter(|&y| y.count_ones() == tn && (y ^ x2).count_ones() == tn)
        .count() as u64
}

/// The [7,4] Hamming code, generator rows `1000110, 0100101, 0010011, 0001111`.
pub fn hamming_7_4() -> BinaryCode {
    let rows = [0b1000110u64, 0b0100101, 0b0010011, 0b0001111];
    let words = (0..16u32)
        .map(|m| (0..4).filter(|i| m >> i & 1 == 1).fold(0u64, |acc, i| acc ^ rows[i]))
        .collect();
    BinaryCode::new(7, words).expect("Hamming code is valid")
}

/// `m` distinct uniformly random words of weight `w`.
pub fn random_constant_weight_code<R: Rng>(rng: &mut R, n: usize, w: usize, m: usize) -> Result<BinaryCode> {
    let available = binomial(n as u64, w as u64);
    if BigUint::from(m) > available {
        return Err(Error::InvalidCode(format!(
            "only {available} words of weight {w} at length {n}"
        )));
    }
    let mut words = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::with_capacity(m);
    while words.len() < m {
        let word = sample(rng, n, w).iter().fold(0u64, |acc, i| acc | 1 << i);
        if seen.insert(word) {
            words.push(word);
        }
    }
    BinaryCode::new(n, words)
}

/// Outcome of checking the Johnson-type bound on one constant-weight code.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma2Verdict {
    pub n: usize,
    pub m: u64,
    pub weight: u32,
    pub omega: f64,
    pub delta: f64,
    pub a: f64,
    /// Ordered pairs at distance `0 < d < ωn`.
    pub close_pairs: u64,
    /// `close_pairs ≤ δM²`.
    pub spectrum_hypothesis: bool,
    /// `t ≤ (1 − √(1 − 2(1−δ)ω + 2a))/2`.
    pub radius_hypothesis: bool,
    /// `M ≤ ω/a`.
    pub conclusion: bool,
    /// `n Σ d(x, y) ≤ 2w(n − w)M²` over ordered pairs, in exact integers.
    pub plotkin_holds: bool,
}

impl Lemma2Verdict {
    pub fn premise(&self) -> bool {
        self.spectrum_hypothesis && self.radius_hypothesis
    }

    /// False only for a counterexample: premise true, conclusion false.
    pub fn consistent(&self) -> bool {
        !self.premise() || self.conclusion
    }
}

/// Evaluates hypothesis and conclusion of the Johnson-type bound for a
/// constant-weight code of weight `tn ≤ n/2`.
pub fn lemma2_check(code: &BinaryCode, omega: f64, delta: f64, a: f64) -> Result<Lemma2Verdict> {
    let weight = code.constant_weight()?;
    let n = code.n();
    if 2 * weight as usize > n {
        return Err(Error::Domain {
            name: "t",
            value: weight as f64 / n as f64,
            constraint: "constant weight tn with t <= 1/2",
        });
    }
    if a.is_nan() || a <= 0.0 {
        return Err(Error::Domain {
            name: "a",
            value: a,
            constraint: "a > 0",
        });
    }
    let spec = spectrum(code);
    let m = spec.m;
    // distances i with i < ωn
    let limit = (omega * n as f64 - 1e-9).ceil().max(0.0) as usize;
    let close_pairs = spec.close_pairs(limit.min(n + 1));
    let m2 = (m * m) as f64;
    let t = weight as f64 / n as f64;
    let disc = 1.0 - 2.0 * (1.0 - delta) * omega + 2.0 * a;
    let radius_hypothesis = disc >= 0.0 && t <= 0.5 * (1.0 - disc.sqrt());
    let distance_sum: u128 = spec
        .pair_counts
        .iter()
        .enumerate()
        .map(|(i, &c)| i as u128 * c as u128)
        .sum();
    let (w, nn, mm) = (weight as u128, n as u128, m as u128);
    Ok(Lemma2Verdict {
        n,
        m,
        weight,
        omega,
        delta,
        a,
        close_pairs,
        spectrum_hypothesis: close_pairs as f64 <= delta * m2,
        radius_hypothesis,
        conclusion: m as f64 * a <= omega,
        plotkin_holds: nn * distance_sum <= 2 * w * (nn - w) * mm * mm,
    })
}

/// Totals of a randomized Johnson-bound run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma2Suite {
    pub seed: u64,
    pub codes: usize,
    /// Codes for which a premise-satisfying `(ω, δ, a)` was drawn.
    pub premise_cases: usize,
    pub violations: usize,
    pub plotkin_violations: usize,
    /// First counterexample found, if any.
    pub first_violation: Option<Lemma2Verdict>,
}

/// One random case: a constant-weight code with `n ∈ [8, 24]` and
/// parameters drawn so that the premise holds whenever the code admits it.
/// Case `i` of a run uses seed `seed + i`.
pub fn lemma2_random_case(seed: u64) -> Result<Lemma2Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = None;
    // most random codes admit no threshold satisfying both hypotheses, so
    // redraw until one does
    for _ in 0..64 {
        let n = rng.gen_range(8..=24usize);
        let w = rng.gen_range(1..=n / 2);
        let cap = binomial(n as u64, w as u64);
        let max_m = if cap > BigUint::from(40u32) {
            40
        } else {
            cap.to_u64_digits().first().copied().unwrap_or(1) as usize
        };
        // log-uniform size, so that small codes with sparse spectra are common
        let m = ((max_m as f64).ln() * rng.gen::<f64>()).exp().floor().max(1.0) as usize;
        let code = random_constant_weight_code(&mut rng, n, w, m)?;
        let spec = spectrum(&code);
        let t = w as f64 / n as f64;
        let spread = 2.0 * t * (1.0 - t);
        let m2 = (m * m) as f64;
        // thresholds ωn = d for which some δ ≥ δ_min leaves room for a > 0
        let feasible: Vec<(f64, f64, f64)> = (1..=n)
            .filter_map(|d| {
                let omega = d as f64 / n as f64;
                let delta_min = spec.close_pairs(d) as f64 / m2;
                let slack = (1.0 - delta_min) * omega - spread;
                (slack > 0.0).then_some((omega, delta_min, slack))
            })
            .collect();
        if feasible.is_empty() {
            last = Some(code);
            continue;
        }
        let (omega, delta_min, slack) = feasible[rng.gen_range(0..feasible.len())];
        // spend a random part of the slack on δ, the rest bounds a
        let delta = delta_min + rng.gen_range(0.0..0.5) * slack / omega;
        // a ≤ (1−δ)ω − 2t(1−t) is the radius condition, and a ≥ (1−δ)ω − 1/2
        // keeps its square root real
        let room = (1.0 - delta) * omega - spread;
        let floor = ((1.0 - delta) * omega - 0.5).max(0.0);
        let a = floor + (room - floor) * rng.gen_range(0.05..0.95);
        return lemma2_check(&code, omega, delta, a);
    }
    lemma2_check(&last.expect("at least one attempt"), 1.0, 0.0, 1.0)
}

/// Runs `codes` random cases in parallel; results do not depend on the
/// thread count.
pub fn lemma2_random_suite(seed: u64, codes: usize) -> Result<Lemma2Suite> {
    let verdicts = (0..codes as u64)
        .into_par_iter()
        .map(|i| lemma2_random_case(seed.wrapping_add(i)))
        .collect::<Result<Vec<_>>>()?;
    let first_violation = verdicts.iter().find(|v| !v.consistent()).cloned();
    Ok(Lemma2Suite {
        seed,
        codes,
        premise_cases: verdicts.iter().filter(|v| v.premise()).count(),
        violations: verdicts.iter().filter(|v| !v.consistent()).count(),
        plotkin_violations: verdicts.iter().filter(|v| !v.plotkin_holds).count(),
        first_violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_spectra() {
        let single = BinaryCode::new(5, vec![0b10110]).unwrap();
        assert_eq!(spectrum(&single).b_all(), vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let rep = BinaryCode::new(6, vec![0, 0b111111]).unwrap();
        assert_eq!(spectrum(&rep).b_all(), vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn hamming_spectrum_is_weight_distribution() {
        let code = hamming_7_4();
        let s = spectrum(&code);
        assert_eq!(s.b_all(), vec![1.0, 0.0, 0.0, 7.0, 7.0, 0.0, 0.0, 1.0]);
        let mut weights = vec![0u64; 8];
        for w in code.words() {
            weights[w.count_ones() as usize] += 1;
        }
        assert_eq!(weights, vec![1, 0, 0, 7, 7, 0, 0, 1]);
    }

    #[test]
    fn invalid_codes() {
        assert!(BinaryCode::new(3, vec![1, 1]).is_err());
        assert!(BinaryCode::new(3, vec![8]).is_err());
        assert!(BinaryCode::new(0, vec![0]).is_err());
        assert!(BinaryCode::new(65, vec![0]).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), BigUint::from(120u32));
        assert_eq!(binomial(5, 7), BigUint::from(0u32));
        assert_eq!(binomial(64, 32).to_string(), "1832624140942590534");
    }

    #[test]
    fn z_small_case() {
        assert_eq!(z_count(4, 0.5, 0.5).unwrap(), BigUint::from(4u32));
        assert_eq!(z_count_enumerate(4, 2, 2), 4);
        assert_eq!(z_count(10, 0.3, 0.0).unwrap(), binomial(10, 3));
        assert!(z_count(10, 0.33, 0.2).is_err());
        assert!(z_count(10, 0.3, 0.1).is_err());
    }

    #[test]
    fn lemma2_single_word() {
        let code = BinaryCode::new(8, vec![0b1111]).unwrap();
        let v = lemma2_check(&code, 0.5, 0.0, 0.25).unwrap();
        assert!(v.conclusion && v.plotkin_holds);
        let mixed = BinaryCode::new(8, vec![0b1, 0b11]).unwrap();
        assert!(matches!(
            lemma2_check(&mixed, 0.5, 0.0, 0.1),
            Err(Error::NotConstantWeight { .. })
        ));
    }

    #[test]
    fn random_suite_is_deterministic_and_clean() {
        let a = lemma2_random_suite(7, 300).unwrap();
        let b = lemma2_random_suite(7, 300).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.violations, 0);
        assert_eq!(a.plotkin_violations, 0);
        assert!(a.premise_cases > 200, "{}", a.premise_cases);
    }
}
