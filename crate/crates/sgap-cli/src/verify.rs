//! The built-in verification battery.
//!
//! Twelve checks tie the solver outputs to independent routes: closed-form
//! roots, the spectral cross-check, brute-force language enumeration, word
//! sums evaluated at solved roots, exact cylinder-measure identities, grid
//! box-dimension estimates of generated point clouds, and randomized bound
//! ordering. Each check records the compared numbers, its tolerance, and
//! its runtime; runtime budgets are part of the pass condition.

use std::time::Instant;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sgap_core::{
    box_counts, count_language, cross_check_golden_mean, cylinder_measure_estimate,
    dimension_bounds, dyadic_scales, estimate_box_dimension, generate_points, is_allowable,
    sample_word, solve_dimension_root, solve_entropy, verify_bounds, weighted_core_sum,
    weighted_language_sum, ContractionPair, Dimension, GapSet, Similarity, SimilarityIfs,
    SolverOptions, Word,
};

/// One verification item: the compared numbers plus the verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub expected: f64,
    pub got: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Check {
    pub fn format_line(&self) -> String {
        format!(
            "{:<44} {}  expected {:.9}, got {:.9}, tol {:.1e}  [{:.2}s] {}",
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.expected,
            self.got,
            self.tolerance,
            self.seconds,
            self.detail
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "name": self.name,
            "expected": self.expected,
            "got": self.got,
            "tolerance": self.tolerance,
            "pass": self.pass,
            "detail": self.detail,
            "seconds": self.seconds,
        })
    }
}

fn golden_mean_h_base3() -> f64 {
    // x = 3^{-h} solves x + x^2 = 1
    let x = (5.0f64.sqrt() - 1.0) / 2.0;
    (1.0 / x).ln() / 3.0f64.ln()
}

fn golden_mean_h_base2() -> f64 {
    let x = (5.0f64.sqrt() - 1.0) / 2.0;
    (1.0 / x).ln() / 2.0f64.ln()
}

fn battery_sets() -> Vec<GapSet> {
    vec![
        GapSet::naturals_from(0),
        GapSet::naturals_from(1),
        GapSet::primes(),
        GapSet::finite(vec![1, 3]).unwrap(),
        GapSet::finite(vec![2, 5]).unwrap(),
    ]
}

fn cantor_ifs() -> SimilarityIfs {
    SimilarityIfs::new(
        Dimension::One,
        Similarity::new(1.0 / 3.0, 0.0, [0.0, 0.0]).unwrap(),
        Similarity::new(1.0 / 3.0, 0.0, [2.0 / 3.0, 0.0]).unwrap(),
        true,
    )
    .unwrap()
}

struct Timer {
    start: Instant,
    budget: f64,
}

impl Timer {
    fn new(budget: f64) -> Self {
        Timer { start: Instant::now(), budget }
    }

    fn finish(
        self,
        name: &'static str,
        expected: f64,
        got: f64,
        tolerance: f64,
        value_pass: bool,
        mut detail: String,
    ) -> Check {
        let seconds = self.start.elapsed().as_secs_f64();
        let in_time = seconds < self.budget;
        if !in_time {
            detail = format!("{detail} OVER TIME BUDGET {}s", self.budget);
        }
        Check { name, expected, got, tolerance, pass: value_pass && in_time, detail, seconds }
    }
}

/// Golden-mean scenario, uniform ratio 1/3: the solved root must match the
/// quadratic closed form to 1e-6 with an enclosure no wider than 1e-9.
pub fn check_golden_mean_root() -> Check {
    let timer = Timer::new(1.0);
    let expected = golden_mean_h_base3();
    match solve_dimension_root(
        1.0 / 3.0,
        1.0 / 3.0,
        &GapSet::naturals_from(1),
        &SolverOptions::default(),
    ) {
        Ok(enc) => {
            let got = enc.mid();
            let ok = (got - expected).abs() <= 1e-6 && enc.width() <= 1e-9;
            timer.finish(
                "1 golden-mean dimension closed form",
                expected,
                got,
                1e-6,
                ok,
                format!("enclosure width {:.2e}", enc.width()),
            )
        }
        Err(e) => timer.finish(
            "1 golden-mean dimension closed form",
            expected,
            f64::NAN,
            1e-6,
            false,
            format!("solver error: {e}"),
        ),
    }
}

/// Series root vs spectral-radius root for three ratio pairs.
pub fn check_spectral_cross() -> Check {
    let timer = Timer::new(1.0);
    let mut worst = 0.0f64;
    let mut detail = String::new();
    let mut ok = true;
    for &(c0, c1) in &[(1.0 / 3.0, 1.0 / 3.0), (0.5, 0.25), (0.9, 0.9)] {
        match cross_check_golden_mean(c0, c1, 1e-8) {
            Ok(report) => {
                worst = worst.max(report.difference).max(report.identity_residual);
                ok &= report.pass;
                detail.push_str(&format!("({c0},{c1}) diff {:.1e}; ", report.difference));
            }
            Err(e) => {
                ok = false;
                detail.push_str(&format!("({c0},{c1}) error {e}; "));
            }
        }
    }
    timer.finish("2 spectral cross-check", 0.0, worst, 1e-8, ok, detail)
}

/// Full shift with c0 = 1/2, c1 = 1/4 reduces to the two-map equation
/// c0^h + c1^h = 1.
pub fn check_moran_reduction() -> Check {
    let timer = Timer::new(1.0);
    let expected = golden_mean_h_base2();
    match solve_dimension_root(0.5, 0.25, &GapSet::naturals_from(0), &SolverOptions::default()) {
        Ok(enc) => {
            let got = enc.mid();
            timer.finish(
                "3 moran-equation reduction",
                expected,
                got,
                1e-6,
                (got - expected).abs() <= 1e-6,
                format!("enclosure width {:.2e}", enc.width()),
            )
        }
        Err(e) => timer.finish(
            "3 moran-equation reduction",
            expected,
            f64::NAN,
            1e-6,
            false,
            format!("solver error: {e}"),
        ),
    }
}

/// With c0 = c1 = 1/2 the dimension root and the entropy root describe the
/// same number: h·ln 2 = ln(1/λ).
pub fn check_entropy_consistency() -> Check {
    let timer = Timer::new(5.0);
    let options = SolverOptions { tolerance: 1e-10, ..SolverOptions::default() };
    let sets = [
        GapSet::naturals_from(1),
        GapSet::naturals_from(0),
        GapSet::primes(),
        GapSet::finite(vec![1, 3]).unwrap(),
    ];
    let mut worst = 0.0f64;
    let mut detail = String::new();
    let mut ok = true;
    for s in &sets {
        let result = solve_dimension_root(0.5, 0.5, s, &options)
            .and_then(|h| solve_entropy(s, &options).map(|lam| (h, lam)));
        match result {
            Ok((h, lam)) => {
                let gap = (h.mid() * 2.0f64.ln() - (1.0 / lam.lambda.mid()).ln()).abs();
                worst = worst.max(gap);
                detail.push_str(&format!("{s} gap {:.1e}; ", gap));
            }
            Err(e) => {
                ok = false;
                detail.push_str(&format!("{s} error {e}; "));
            }
        }
    }
    timer.finish("4 entropy vs dimension consistency", 0.0, worst, 1e-8, ok && worst <= 1e-8, detail)
}

/// DP language counts equal brute-force enumeration of all 2^n words for
/// n ≤ 16 over seven gap sets.
pub fn check_language_oracle() -> Check {
    let timer = Timer::new(60.0);
    let sets = [
        GapSet::naturals_from(1),
        GapSet::naturals_from(0),
        GapSet::primes(),
        GapSet::finite(vec![0]).unwrap(),
        GapSet::finite(vec![1]).unwrap(),
        GapSet::finite(vec![2, 5]).unwrap(),
        GapSet::arithmetic(1, 3).unwrap(),
    ];
    let mut mismatches = 0u64;
    let mut checked = 0u64;
    for s in &sets {
        for n in 0..=16usize {
            let mut brute = 0u128;
            for mask in 0u32..(1u32 << n) {
                let letters: Vec<u8> = (0..n).map(|i| ((mask >> i) & 1) as u8).collect();
                if is_allowable(&Word::from_letters(letters).unwrap(), s) {
                    brute += 1;
                }
            }
            checked += 1;
            if count_language(n, s).unwrap() != brute {
                mismatches += 1;
            }
        }
    }
    timer.finish(
        "5 language-count oracle",
        0.0,
        mismatches as f64,
        0.0,
        mismatches == 0,
        format!("{checked} (n, S) pairs against 2^n enumeration"),
    )
}

/// At the solved root the language sums never drop below 1 (up to 1e-9)
/// and stay bounded over n ≤ 30; the observed maximum is reported.
pub fn check_root_level_sums() -> Check {
    let timer = Timer::new(10.0);
    let (c0, c1) = (0.5, 1.0 / 3.0);
    let options = SolverOptions { tolerance: 1e-12, ..SolverOptions::default() };
    let mut worst_drop = f64::NEG_INFINITY;
    let mut detail = String::new();
    let mut ok = true;
    for s in battery_sets() {
        match solve_dimension_root(c0, c1, &s, &options) {
            Ok(enc) => {
                let h = enc.mid();
                let mut min_sum = f64::INFINITY;
                let mut max_sum = 0.0f64;
                for n in 1..=30 {
                    let v = weighted_language_sum(n, h, c0, c1, &s);
                    min_sum = min_sum.min(v);
                    max_sum = max_sum.max(v);
                }
                worst_drop = worst_drop.max(1.0 - min_sum);
                ok &= max_sum.is_finite();
                detail.push_str(&format!("{s} max {:.3}; ", max_sum));
            }
            Err(e) => {
                ok = false;
                detail.push_str(&format!("{s} error {e}; "));
            }
        }
    }
    timer.finish(
        "6 word sums at the solved root",
        0.0,
        worst_drop,
        1e-9,
        ok && worst_drop <= 1e-9,
        detail,
    )
}

/// Powers of core sums never exceed the language sum of the concatenated
/// length: g(n,t)^k ≤ Σ_{L_{nk}} c_ω^t up to 1e-12 relative slack.
pub fn check_core_power_sandwich() -> Check {
    let timer = Timer::new(10.0);
    let (c0, c1) = (0.5, 1.0 / 3.0);
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0u32;
    for s in battery_sets() {
        for &t in &[0.2, 0.5, 1.0] {
            for n in 1..=6usize {
                for k in 1..=6usize {
                    let core = weighted_core_sum(n, t, c0, c1, &s);
                    let core_pow = core.powi(k as i32);
                    let lang = weighted_language_sum(n * k, t, c0, c1, &s);
                    worst = worst.max(core_pow / lang - 1.0);
                    cases += 1;
                }
            }
        }
    }
    timer.finish(
        "7 core powers under language sums",
        0.0,
        worst,
        1e-12,
        worst <= 1e-12,
        format!("{cases} (S, t, n, k) cases"),
    )
}

/// `ν_n([[ω0]]) + ν_n([[ω1]]) = ν_{n+1}([[ω]])` for 100 random allowable
/// words, with children of empty cylinders contributing 0.
pub fn check_cylinder_additivity() -> Check {
    let timer = Timer::new(30.0);
    let (c0, c1) = (0.5, 1.0 / 3.0);
    let sets = [
        GapSet::naturals_from(0),
        GapSet::naturals_from(1),
        GapSet::primes(),
        GapSet::finite(vec![1, 3]).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    let mut trials = 0u32;
    let mut ok = true;
    for s in &sets {
        let h = match solve_dimension_root(c0, c1, s, &SolverOptions::default()) {
            Ok(enc) => enc.mid(),
            Err(_) => {
                ok = false;
                continue;
            }
        };
        for _ in 0..25 {
            let len = rng.gen_range(1..=8usize);
            let n = rng.gen_range(1..=12usize);
            let w = sample_word(len, s, rng.next_u64());
            let parent = cylinder_measure_estimate(&w, n + 1, h, c0, c1, s).unwrap();
            let mut children = 0.0;
            for letter in [0u8, 1u8] {
                let mut letters = w.letters().to_vec();
                letters.push(letter);
                let child = Word::from_letters(letters).unwrap();
                if is_allowable(&child, s) {
                    children += cylinder_measure_estimate(&child, n, h, c0, c1, s).unwrap();
                }
            }
            worst = worst.max((children - parent).abs());
            trials += 1;
        }
    }
    timer.finish(
        "8 cylinder-measure additivity",
        0.0,
        worst,
        1e-12,
        ok && worst <= 1e-12,
        format!("{trials} random cylinders"),
    )
}

struct BoxRun {
    slope: f64,
    stderr: f64,
    points: usize,
}

fn box_run(s: &GapSet) -> Result<BoxRun, String> {
    let ifs = cantor_ifs();
    let cloud = generate_points(&ifs, s, 14, 200_000, 1).map_err(|e| e.to_string())?;
    let scales = dyadic_scales(4, 16);
    let series = box_counts(&cloud, &scales).map_err(|e| e.to_string())?;
    let est = estimate_box_dimension(&series, 0, 2).map_err(|e| e.to_string())?;
    Ok(BoxRun { slope: est.slope, stderr: est.stderr, points: cloud.len() })
}

/// Full-shift cloud over the middle-thirds maps: the grid estimate must sit
/// within ±0.03 of ln2/ln3.
pub fn check_box_dimension_full_shift() -> Check {
    let timer = Timer::new(60.0);
    let expected = 2.0f64.ln() / 3.0f64.ln();
    match box_run(&GapSet::naturals_from(0)) {
        Ok(run) => timer.finish(
            "9a box dimension: full-shift Cantor cloud",
            expected,
            run.slope,
            0.03,
            (run.slope - expected).abs() <= 0.03,
            format!("{} points, stderr {:.4}", run.points, run.stderr),
        ),
        Err(e) => timer.finish(
            "9a box dimension: full-shift Cantor cloud",
            expected,
            f64::NAN,
            0.03,
            false,
            e,
        ),
    }
}

/// Golden-mean subfractal of the middle-thirds maps: within ±0.05 of the
/// closed form and inside the solver's [h − 0.05, H + 0.05].
pub fn check_box_dimension_golden_mean() -> Check {
    let timer = Timer::new(60.0);
    let expected = golden_mean_h_base3();
    let gaps = GapSet::naturals_from(1);
    let pair = ContractionPair::uniform(1.0 / 3.0, 1.0 / 3.0).unwrap();
    let outcome = box_run(&gaps).and_then(|run| {
        dimension_bounds(&pair, &gaps, &SolverOptions::default())
            .map(|b| (run, b))
            .map_err(|e| e.to_string())
    });
    match outcome {
        Ok((run, bounds)) => {
            let contained = verify_bounds(run.slope, run.stderr, &bounds, 0.05);
            let ok = (run.slope - expected).abs() <= 0.05 && contained.pass;
            timer.finish(
                "9b box dimension: golden-mean subfractal",
                expected,
                run.slope,
                0.05,
                ok,
                format!(
                    "{} points, window [{:.4}, {:.4}]",
                    run.points, contained.lower_limit, contained.upper_limit
                ),
            )
        }
        Err(e) => timer.finish(
            "9b box dimension: golden-mean subfractal",
            expected,
            f64::NAN,
            0.05,
            false,
            e,
        ),
    }
}

/// Prime-gap subfractal: the grid estimate must land inside
/// [h − 0.07, H + 0.07] where h = H comes from the solver.
pub fn check_box_dimension_prime_gaps() -> Check {
    let timer = Timer::new(60.0);
    let gaps = GapSet::primes();
    let pair = ContractionPair::uniform(1.0 / 3.0, 1.0 / 3.0).unwrap();
    let outcome = box_run(&gaps).and_then(|run| {
        dimension_bounds(&pair, &gaps, &SolverOptions::default())
            .map(|b| (run, b))
            .map_err(|e| e.to_string())
    });
    match outcome {
        Ok((run, bounds)) => {
            let contained = verify_bounds(run.slope, run.stderr, &bounds, 0.07);
            timer.finish(
                "9c box dimension: prime-gap subfractal",
                bounds.lower.mid(),
                run.slope,
                0.07,
                contained.pass,
                format!(
                    "{} points, window [{:.4}, {:.4}]",
                    run.points, contained.lower_limit, contained.upper_limit
                ),
            )
        }
        Err(e) => timer.finish(
            "9c box dimension: prime-gap subfractal",
            f64::NAN,
            f64::NAN,
            0.07,
            false,
            e,
        ),
    }
}

/// 100 random ordered contraction pairs across five gap sets: the lower
/// root never exceeds the upper root.
pub fn check_bound_ordering() -> Check {
    let timer = Timer::new(30.0);
    let sets = [
        GapSet::naturals_from(0),
        GapSet::naturals_from(1),
        GapSet::primes(),
        GapSet::finite(vec![1, 3]).unwrap(),
        GapSet::arithmetic(1, 3).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(424242);
    let mut violations = 0u32;
    let mut errors = 0u32;
    for trial in 0..100 {
        let s = &sets[trial % sets.len()];
        let c0_lower: f64 = rng.gen_range(0.10..0.80);
        let c0_upper: f64 = (c0_lower + rng.gen_range(0.01..0.15)).min(0.95);
        let c1_lower: f64 = rng.gen_range(0.10..0.80);
        let c1_upper: f64 = (c1_lower + rng.gen_range(0.01..0.15)).min(0.95);
        let pair = ContractionPair::new(c0_lower, c0_upper, c1_lower, c1_upper).unwrap();
        match dimension_bounds(&pair, s, &SolverOptions::default()) {
            Ok(b) => {
                if b.lower.mid() > b.upper.mid() {
                    violations += 1;
                }
            }
            Err(_) => errors += 1,
        }
    }
    timer.finish(
        "10 bound ordering under random ratios",
        0.0,
        (violations + errors) as f64,
        0.0,
        violations == 0 && errors == 0,
        format!("100 pairs over {} gap sets, {errors} solver errors", sets.len()),
    )
}

/// Run every check in order.
pub fn run_battery() -> Vec<Check> {
    vec![
        check_golden_mean_root(),
        check_spectral_cross(),
        check_moran_reduction(),
        check_entropy_consistency(),
        check_language_oracle(),
        check_root_level_sums(),
        check_core_power_sandwich(),
        check_cylinder_additivity(),
        check_box_dimension_full_shift(),
        check_box_dimension_golden_mean(),
        check_box_dimension_prime_gaps(),
        check_bound_ordering(),
    ]
}
