//! Weighted word sums over `L_n` and `G_n`, finite-scale pressure estimates,
//! and cylinder-measure ratios.
//!
//! A word `ω` carries the weight `c_ω^t = (c0^{#0s} · c1^{#1s})^t`. The sum
//! of these weights over the allowable words of length `n` grows like
//! `e^{n·P(t)}`; the exponent's zero in `t` is what [`crate::solver`]
//! brackets. Everything here is a plain double-precision computation over
//! the same DP transitions as [`crate::language`], accumulated in order of
//! increasing word length.

use core::fmt;

use alloc::vec;

use crate::fmath;
use crate::gaps::GapSet;
use crate::language::{is_allowable, DpContext};
use crate::word::{RunProfile, Word};

/// Two-sided contraction ratios `(c0, c̄0, c1, c̄1)` of a hyperbolic IFS.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionPair {
    pub c0_lower: f64,
    pub c0_upper: f64,
    pub c1_lower: f64,
    pub c1_upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractionError {
    /// Each ratio must satisfy `0 < lower ≤ upper < 1`.
    BadRatio,
}

impl fmt::Display for ContractionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "contraction ratios must satisfy 0 < lower <= upper < 1")
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ContractionError {}

impl ContractionPair {
    pub fn new(
        c0_lower: f64,
        c0_upper: f64,
        c1_lower: f64,
        c1_upper: f64,
    ) -> Result<Self, ContractionError> {
        let ordered = |lo: f64, hi: f64| lo > 0.0 && lo <= hi && hi < 1.0;
        if !ordered(c0_lower, c0_upper) || !ordered(c1_lower, c1_upper) {
            return Err(ContractionError::BadRatio);
        }
        Ok(ContractionPair { c0_lower, c0_upper, c1_lower, c1_upper })
    }

    /// Equal lower and upper ratios (exact similarities).
    pub fn uniform(c0: f64, c1: f64) -> Result<Self, ContractionError> {
        ContractionPair::new(c0, c0, c1, c1)
    }
}

/// Which word family a pressure estimate sums over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumKind {
    /// All allowable words `L_n`.
    Language,
    /// Core words `G_n` (every block `0^s 1`, `s ∈ S`).
    Core,
}

/// One finite-scale pressure sample: `pressure = ln(weighted_sum) / n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureSample {
    pub n: usize,
    pub t: f64,
    pub weighted_sum: f64,
    pub pressure: f64,
}

fn assert_ratio(c: f64) {
    assert!(c > 0.0 && c < 1.0, "contraction ratio must lie in (0, 1), got {c}");
}

fn run_weighted_dp(ctx: &DpContext, start: (bool, usize), steps: usize, w0: f64, w1: f64) -> f64 {
    let mut cur = vec![0.0f64; ctx.state_count()];
    cur[ctx.state_index(start.0, start.1)] = 1.0;
    let mut next = vec![0.0f64; ctx.state_count()];
    for _ in 0..steps {
        next.iter_mut().for_each(|v| *v = 0.0);
        for seen in [false, true] {
            for run in 0..ctx.state_count() / 2 {
                let v = cur[ctx.state_index(seen, run)];
                if v == 0.0 {
                    continue;
                }
                for (letter, w) in [(0u8, w0), (1u8, w1)] {
                    if let Some((ns, nr)) = ctx.step(seen, run, letter) {
                        next[ctx.state_index(ns, nr)] += v * w;
                    }
                }
            }
        }
        core::mem::swap(&mut cur, &mut next);
    }
    cur.iter().sum()
}

/// `Σ_{ω ∈ L_n} c_ω^t`, by the membership DP with per-letter weights
/// `c0^t` and `c1^t`. At `t = 0` this equals `|L_n|`.
pub fn weighted_language_sum(n: usize, t: f64, c0: f64, c1: f64, s: &GapSet) -> f64 {
    assert_ratio(c0);
    assert_ratio(c1);
    let ctx = DpContext::new(s, n);
    run_weighted_dp(&ctx, (false, 0), n, fmath::powf(c0, t), fmath::powf(c1, t))
}

/// `g(n, t) = Σ_{ω ∈ G_n} c_ω^t` via the renewal recurrence
/// `g(n, t) = Σ_{s ∈ S, s+1 ≤ n} c0^{s·t} · c1^t · g(n−s−1, t)`, `g(0, t) = 1`.
pub fn weighted_core_sum(n: usize, t: f64, c0: f64, c1: f64, s: &GapSet) -> f64 {
    assert_ratio(c0);
    assert_ratio(c1);
    let w0 = fmath::powf(c0, t);
    let w1 = fmath::powf(c1, t);
    let svals = s.enumerate_up_to(n.saturating_sub(1) as u64);
    let mut g = vec![0.0f64; n + 1];
    g[0] = 1.0;
    for m in 1..=n {
        let mut acc = 0.0;
        for &sv in &svals {
            let block = sv as usize + 1;
            if block <= m {
                // c0^{s·t} computed as (c0^t)^s keeps the recurrence cheap
                acc += powi(w0, sv as usize) * w1 * g[m - block];
            }
        }
        g[m] = acc;
    }
    g[n]
}

fn powi(base: f64, mut exp: usize) -> f64 {
    let mut acc = 1.0;
    let mut b = base;
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= b;
        }
        b *= b;
        exp >>= 1;
    }
    acc
}

/// Finite-scale pressure `(1/n)·ln(Σ c_ω^t)`. Returns `None` when the
/// weighted sum vanishes (sparse gap sets leave many `G_n` empty; callers
/// skip those `n`).
pub fn pressure_estimate(
    n: usize,
    t: f64,
    c0: f64,
    c1: f64,
    s: &GapSet,
    kind: SumKind,
) -> Option<PressureSample> {
    assert!(n >= 1, "pressure needs n >= 1");
    let weighted_sum = match kind {
        SumKind::Language => weighted_language_sum(n, t, c0, c1, s),
        SumKind::Core => weighted_core_sum(n, t, c0, c1, s),
    };
    if weighted_sum <= 0.0 {
        return None;
    }
    Some(PressureSample { n, t, weighted_sum, pressure: fmath::ln(weighted_sum) / n as f64 })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CylinderError {
    /// The base word is not in the language (its cylinder is empty).
    WordNotAllowable,
}

impl fmt::Display for CylinderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cylinder base word is not allowable")
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CylinderError {}

/// Finite-`n` cylinder-measure ratio
/// `ν_n([[ω]]) = (Σ_{ωτ ∈ L_{n+ℓ(ω)}} c_{ωτ}^t) / (Σ_{τ ∈ L_{n+ℓ(ω)}} c_τ^t)`.
///
/// The numerator continues the membership DP from the exact state reached
/// after reading `ω`, so the ratio is exact (up to rounding), not sampled.
/// Satisfies `ν_n([[ω0]]) + ν_n([[ω1]]) = ν_{n+1}([[ω]])` with children of
/// empty cylinders contributing zero, and `ν_n([[ε]]) = 1`.
pub fn cylinder_measure_estimate(
    w: &Word,
    n: usize,
    t: f64,
    c0: f64,
    c1: f64,
    s: &GapSet,
) -> Result<f64, CylinderError> {
    assert!(n >= 1, "cylinder estimate needs n >= 1");
    if !is_allowable(w, s) {
        return Err(CylinderError::WordNotAllowable);
    }
    let profile = RunProfile::of(w);
    let start = if profile.ones == 0 { (false, w.len()) } else { (true, profile.trailing) };
    let w0 = fmath::powf(c0, t);
    let w1 = fmath::powf(c1, t);
    let ctx = DpContext::new(s, start.1 + n);
    let continuations = run_weighted_dp(&ctx, start, n, w0, w1);
    let word_weight = powi(w0, w.count_zeros()) * powi(w1, w.count_ones());
    let denominator = weighted_language_sum(n + w.len(), t, c0, c1, s);
    Ok(word_weight * continuations / denominator)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::{count_core, count_language, enumerate_core, enumerate_language, sample_word};

    fn nats(offset: u64) -> GapSet {
        GapSet::naturals_from(offset)
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn zero_exponent_recovers_counts() {
        for s in [nats(1), GapSet::primes(), GapSet::finite(vec![2, 5]).unwrap()] {
            for n in 1..=12 {
                let lang = weighted_language_sum(n, 0.0, 0.5, 0.7, &s);
                assert_eq!(lang, count_language(n, &s).unwrap() as f64, "set {s} n {n}");
                let core = weighted_core_sum(n, 0.0, 0.3, 0.9, &s);
                assert_eq!(core, count_core(n, &s).unwrap() as f64, "set {s} n {n}");
            }
        }
    }

    #[test]
    fn weighted_sum_examples() {
        // three allowable words of length 2 in the golden-mean shift, each 1/4
        assert!(close(weighted_language_sum(2, 1.0, 0.5, 0.5, &nats(1)), 0.75, 1e-15));
        // both single letters allowable in the full shift
        let v = weighted_language_sum(1, 2.0, 0.5, 1.0 / 3.0, &nats(0));
        assert!(close(v, 0.25 + 1.0 / 9.0, 1e-15));
        // single core word "01" of length 2 for S = {1}
        let s1 = GapSet::finite(vec![1]).unwrap();
        assert!(close(weighted_core_sum(2, 1.0, 0.5, 0.5, &s1), 0.25, 1e-15));
        assert_eq!(weighted_core_sum(5, 0.7, 0.5, 0.5, &s1), 0.0);
    }

    #[test]
    fn sums_match_direct_enumeration() {
        let t = 0.73;
        let (c0, c1) = (0.45f64, 0.61f64);
        for s in [nats(1), nats(0), GapSet::primes(), GapSet::finite(vec![1, 3]).unwrap()] {
            for n in 1..=12usize {
                let direct: f64 = enumerate_language(n, &s, u64::MAX)
                    .map(|w| {
                        crate::fmath::powf(
                            c0.powi(w.count_zeros() as i32) * c1.powi(w.count_ones() as i32),
                            t,
                        )
                    })
                    .sum();
                let dp = weighted_language_sum(n, t, c0, c1, &s);
                assert!(
                    close(dp, direct, 1e-12 * direct.max(1.0)),
                    "language set {s} n {n}: dp {dp} direct {direct}"
                );

                let direct_core: f64 = enumerate_core(n, &s, usize::MAX)
                    .iter()
                    .map(|w| {
                        crate::fmath::powf(
                            c0.powi(w.count_zeros() as i32) * c1.powi(w.count_ones() as i32),
                            t,
                        )
                    })
                    .sum();
                let dp_core = weighted_core_sum(n, t, c0, c1, &s);
                assert!(
                    close(dp_core, direct_core, 1e-12 * direct_core.max(1.0)),
                    "core set {s} n {n}: dp {dp_core} direct {direct_core}"
                );
            }
        }
    }

    #[test]
    fn full_shift_pressure_closed_form() {
        // |L_n| = 2^n with uniform weights: pressure = ln 2 + t·ln c exactly
        let s = nats(0);
        for &(t, c) in &[(0.3, 0.5), (1.0, 0.25), (2.5, 0.8)] {
            for n in 1..=20 {
                let p = pressure_estimate(n, t, c, c, &s, SumKind::Language).unwrap();
                let expect = core::f64::consts::LN_2 + t * c.ln();
                assert!(
                    close(p.pressure, expect, 1e-12),
                    "t {t} c {c} n {n}: {} vs {expect}",
                    p.pressure
                );
            }
        }
    }

    #[test]
    fn pressure_undefined_on_empty_core() {
        let s = GapSet::finite(vec![1]).unwrap();
        assert!(pressure_estimate(5, 0.5, 0.5, 0.5, &s, SumKind::Core).is_none());
        assert!(pressure_estimate(4, 0.5, 0.5, 0.5, &s, SumKind::Core).is_some());
    }

    #[test]
    fn language_sums_are_submultiplicative() {
        // factorial language: ln Σ_{n+m} ≤ ln Σ_n + ln Σ_m
        let (c0, c1) = (0.4, 0.55);
        for s in [nats(1), GapSet::primes(), GapSet::finite(vec![2, 5]).unwrap()] {
            for &t in &[0.2, 0.5, 1.0] {
                for n in 1..=12usize {
                    for m in 1..=12usize {
                        let whole = weighted_language_sum(n + m, t, c0, c1, &s);
                        let parts = weighted_language_sum(n, t, c0, c1, &s)
                            * weighted_language_sum(m, t, c0, c1, &s);
                        assert!(
                            whole <= parts * (1.0 + 1e-12),
                            "set {s} t {t} n {n} m {m}: {whole} > {parts}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn core_sums_are_supermultiplicative() {
        // concatenations of core words are core words
        let (c0, c1) = (0.4, 0.55);
        for s in [nats(1), GapSet::primes(), GapSet::finite(vec![1, 3]).unwrap()] {
            for &t in &[0.2, 0.5, 1.0] {
                for n in 1..=10usize {
                    for m in 1..=10usize {
                        let whole = weighted_core_sum(n + m, t, c0, c1, &s);
                        let parts = weighted_core_sum(n, t, c0, c1, &s)
                            * weighted_core_sum(m, t, c0, c1, &s);
                        assert!(
                            whole >= parts * (1.0 - 1e-12),
                            "set {s} t {t} n {n} m {m}: {whole} < {parts}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn core_powers_stay_below_language_sums() {
        // k-fold products of G_n words are words of L_{nk}
        let (c0, c1) = (0.5, 1.0 / 3.0);
        for s in [nats(1), nats(0), GapSet::primes(), GapSet::finite(vec![1, 3]).unwrap()] {
            for &t in &[0.2, 0.5, 1.0] {
                for n in 1..=6usize {
                    for k in 1..=6usize {
                        let core_pow = powi(weighted_core_sum(n, t, c0, c1, &s), k);
                        let lang = weighted_language_sum(n * k, t, c0, c1, &s);
                        assert!(
                            core_pow <= lang * (1.0 + 1e-12),
                            "set {s} t {t} n {n} k {k}: {core_pow} > {lang}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn sums_strictly_decrease_in_t() {
        let (c0, c1) = (0.5, 0.7);
        for s in [nats(1), GapSet::finite(vec![0, 2]).unwrap()] {
            for n in 1..=10usize {
                let mut prev_lang = f64::INFINITY;
                let mut prev_core = f64::INFINITY;
                for i in 0..=20 {
                    let t = 0.1 + 0.2 * i as f64;
                    let lang = weighted_language_sum(n, t, c0, c1, &s);
                    assert!(lang < prev_lang, "set {s} n {n} t {t}");
                    prev_lang = lang;
                    let core = weighted_core_sum(n, t, c0, c1, &s);
                    if core > 0.0 {
                        assert!(core < prev_core, "core: set {s} n {n} t {t}");
                        prev_core = core;
                    }
                }
            }
        }
    }

    #[test]
    fn cylinder_of_empty_word_is_one() {
        for n in 1..=6 {
            let v = cylinder_measure_estimate(&Word::empty(), n, 0.8, 0.5, 0.6, &nats(1)).unwrap();
            assert!(close(v, 1.0, 1e-14));
        }
    }

    #[test]
    fn cylinder_full_shift_example() {
        let w: Word = "1".parse().unwrap();
        let v = cylinder_measure_estimate(&w, 1, 1.0, 0.5, 0.5, &nats(0)).unwrap();
        assert!(close(v, 0.5, 1e-15));
    }

    #[test]
    fn cylinder_rejects_disallowed_words() {
        let w: Word = "11".parse().unwrap();
        assert_eq!(
            cylinder_measure_estimate(&w, 3, 1.0, 0.5, 0.5, &nats(1)),
            Err(CylinderError::WordNotAllowable)
        );
    }

    #[test]
    fn cylinder_children_add_up() {
        let (c0, c1) = (0.5, 1.0 / 3.0);
        let t = 0.42;
        for s in [nats(1), nats(0), GapSet::primes(), GapSet::finite(vec![1, 3]).unwrap()] {
            for seed in 0..12u64 {
                let len = 1 + (seed as usize % 6);
                let w = sample_word(len, &s, seed);
                for n in [1usize, 3, 7] {
                    let parent =
                        cylinder_measure_estimate(&w, n + 1, t, c0, c1, &s).unwrap();
                    let mut children = 0.0;
                    for letter in [0u8, 1u8] {
                        let mut letters = w.letters().to_vec();
                        letters.push(letter);
                        let child = Word::from_letters(letters).unwrap();
                        if is_allowable(&child, &s) {
                            children +=
                                cylinder_measure_estimate(&child, n, t, c0, c1, &s).unwrap();
                        }
                    }
                    assert!(
                        close(children, parent, 1e-12),
                        "set {s} word {w} n {n}: {children} vs {parent}"
                    );
                }
            }
        }
    }

    #[test]
    fn cylinder_values_lie_in_unit_interval() {
        let s = GapSet::primes();
        for seed in 0..20u64 {
            let w = sample_word(1 + (seed as usize % 8), &s, seed);
            let v = cylinder_measure_estimate(&w, 6, 0.9, 0.55, 0.44, &s).unwrap();
            assert!((0.0..=1.0 + 1e-12).contains(&v), "{v}");
        }
    }
}
