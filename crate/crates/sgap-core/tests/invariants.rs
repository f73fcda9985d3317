//! Cross-module invariants tying the solver roots to the word-sum machinery.

use sgap_core::{
    pressure_estimate, solve_dimension_root, weighted_core_sum, GapSet, SolverOptions, SumKind,
};

fn test_sets() -> Vec<GapSet> {
    vec![
        GapSet::naturals_from(0),
        GapSet::naturals_from(1),
        GapSet::primes(),
        GapSet::finite(vec![1, 3]).unwrap(),
        GapSet::finite(vec![2, 5]).unwrap(),
    ]
}

#[test]
fn language_sums_at_the_root_stay_at_or_above_one() {
    // at the root h of the gap series, n·P_n(h) = ln Σ_{L_n} c_ω^h is
    // non-negative and bounded over n
    let (c0, c1) = (0.5, 1.0 / 3.0);
    let options = SolverOptions { tolerance: 1e-12, ..SolverOptions::default() };
    for s in test_sets() {
        let h = solve_dimension_root(c0, c1, &s, &options).unwrap().mid();
        let mut max_sum = 0.0f64;
        for n in 1..=30 {
            let sample = pressure_estimate(n, h, c0, c1, &s, SumKind::Language)
                .expect("language sums are positive");
            assert!(
                sample.weighted_sum >= 1.0 - 1e-9,
                "set {s} n {n}: sum {} dipped below 1",
                sample.weighted_sum
            );
            assert!(sample.pressure >= -1e-9);
            max_sum = max_sum.max(sample.weighted_sum);
        }
        assert!(max_sum.is_finite(), "set {s}: unbounded sums at the root");
    }
}

#[test]
fn core_sums_follow_the_block_generating_function() {
    // summing g(n, t) over all lengths counts core words by their block
    // count: Σ_n g(n,t) = Σ_k F(t)^k = F/(1−F) whenever F(t) < 1
    let (c0, c1) = (0.5, 0.5);
    let t = 1.0;
    let s = GapSet::finite(vec![1, 3]).unwrap();
    let f = 0.5f64.powi(2) + 0.5f64.powi(4);
    let geometric = f / (1.0 - f);
    let direct: f64 = (1..=200).map(|n| weighted_core_sum(n, t, c0, c1, &s)).sum();
    assert!(
        (direct - geometric).abs() <= 1e-10,
        "block sum {direct} vs geometric {geometric}"
    );
}
