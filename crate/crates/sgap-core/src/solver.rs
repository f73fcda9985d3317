//! Certified evaluation of the gap series and bracketing root solvers.
//!
//! The central object is `F(t) = Σ_{s∈S} c0^{s·t} · c1^t`, strictly
//! decreasing in `t > 0`. Its root `F(h) = 1` is the pressure zero that
//! bounds the subfractal dimension: lower contraction constants give `h`,
//! upper ones give `H`. The same series with `c0 = c1 = λ` at `t = 1` is the
//! gap-shift entropy equation `Σ_{s∈S} λ^{s+1} = 1`, solved here by
//! bisection in `λ`.
//!
//! Series values are returned as [`Enclosure`]s: a partial sum widened by a
//! fixed relative slack plus, for infinite sets, a geometric tail majorant
//! that dominates the discarded terms of any `S`. This is not directed
//! rounding; enclosures are certified up to the documented floating-point
//! slack. All comparisons the solvers make against 1 use enclosure endpoints
//! only, so a returned root bracket `[lo, hi]` always satisfies
//! `F(lo) ≥ 1 ≥ F(hi)` by certified comparison.

use core::fmt;

use crate::fmath;
use crate::gaps::GapSet;
use crate::pressure::ContractionPair;

/// Per-endpoint relative widening applied to every computed partial sum.
const RELATIVE_SLACK: f64 = 1e-12;

/// Hard ceiling on the number of series terms enumerated for a tail cut.
const S_CUT_BUDGET: u64 = 10_000_000;

/// A closed interval `[lo, hi]` certified to contain a true value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Enclosure {
    lo: f64,
    hi: f64,
}

impl Enclosure {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "enclosure endpoints out of order: [{lo}, {hi}]");
        Enclosure { lo, hi }
    }

    pub fn point(v: f64) -> Self {
        Enclosure { lo: v, hi: v }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Dimension bounds `h ≤ dim ≤ H` from lower/upper contraction constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionBounds {
    /// Enclosure of the lower bound `h` (lower contraction constants).
    pub lower: Enclosure,
    /// Enclosure of the upper bound `H` (upper contraction constants).
    pub upper: Enclosure,
}

/// Settings shared by the solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Target width of returned root enclosures.
    pub tolerance: f64,
    /// Bound on the series tail majorant.
    pub series_eps: f64,
    /// Cap for the upper-bracket doubling search.
    pub t_max: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tolerance: 1e-9, series_eps: 1e-12, t_max: 1024.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolveError {
    /// The series diverges: `t ≤ 0` with infinitely many terms.
    DivergentSeries { t: f64 },
    /// The tail majorant did not drop below the requested bound within the
    /// term budget.
    TailBudgetExceeded { eps: f64 },
    /// No certified bracket could be established within the search budget.
    BracketNotFound,
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::DivergentSeries { t } => {
                write!(f, "gap series diverges at t = {t} for an infinite gap set")
            }
            SolveError::TailBudgetExceeded { eps } => {
                write!(f, "series tail would not shrink below {eps} within the term budget")
            }
            SolveError::BracketNotFound => write!(f, "no certified root bracket found"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SolveError {}

fn assert_ratio(c: f64) {
    assert!(c > 0.0 && c < 1.0, "contraction ratio must lie in (0, 1), got {c}");
}

/// Enclosure of `F(t) = Σ_{s∈S} c0^{s·t} · c1^t`.
///
/// Finite sets are summed exactly and widened by the relative slack. For
/// infinite sets the partial sum over `s ≤ s_cut` is augmented by the tail
/// majorant `c1^t · c0^{(s_cut+1)·t} / (1 − c0^t)` — a full geometric series
/// over every integer beyond `s_cut`, which dominates the tail of any `S` —
/// and `s_cut` grows until the majorant is at most `eps`.
pub fn series_value(
    t: f64,
    c0: f64,
    c1: f64,
    s: &GapSet,
    eps: f64,
) -> Result<Enclosure, SolveError> {
    assert_ratio(c0);
    assert_ratio(c1);
    assert!(eps > 0.0, "series eps must be positive");

    let c1t = fmath::powf(c1, t);
    if !s.is_infinite() {
        let max = s.max_element().expect("finite set has a maximum");
        let partial: f64 = s
            .enumerate_up_to(max)
            .iter()
            .map(|&sv| fmath::powf(c0, sv as f64 * t) * c1t)
            .sum();
        return Ok(Enclosure::new(
            partial * (1.0 - RELATIVE_SLACK),
            partial * (1.0 + RELATIVE_SLACK),
        ));
    }

    if t <= 0.0 {
        return Err(SolveError::DivergentSeries { t });
    }
    let w = fmath::powf(c0, t);
    let mut s_cut: u64 = 64;
    let tail_at = |cut: u64| c1t * fmath::powf(c0, (cut + 1) as f64 * t) / (1.0 - w);
    loop {
        let tail = tail_at(s_cut);
        if tail.is_finite() && tail <= eps {
            break;
        }
        if s_cut >= S_CUT_BUDGET {
            return Err(SolveError::TailBudgetExceeded { eps });
        }
        s_cut = (s_cut * 2).min(S_CUT_BUDGET);
    }
    let tail = tail_at(s_cut);
    let partial: f64 =
        s.enumerate_up_to(s_cut).iter().map(|&sv| fmath::powf(c0, sv as f64 * t) * c1t).sum();
    Ok(Enclosure::new(partial * (1.0 - RELATIVE_SLACK), partial * (1.0 + RELATIVE_SLACK) + tail))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cmp {
    /// The whole enclosure is at or above 1.
    Above,
    /// The whole enclosure is at or below 1.
    Below,
    /// The enclosure straddles 1; no certified comparison possible.
    Straddle,
}

fn classify(e: &Enclosure) -> Cmp {
    if e.lo() >= 1.0 {
        Cmp::Above
    } else if e.hi() <= 1.0 {
        Cmp::Below
    } else {
        Cmp::Straddle
    }
}

/// Bisect a monotone enclosure-valued function against the threshold 1.
///
/// `bracket = (lo, hi)` with the root inside; `increasing` states the
/// monotonicity of `f`. Certified comparisons drive every step. When an
/// evaluation straddles 1 persistently (the value is within floating-point
/// slack of 1), the tail bound is shrunk twice and, failing that, the
/// endpoints are tightened by direct probes at `mid ± tolerance/2`; if even
/// those cannot be certified the current (possibly wider than requested)
/// bracket is returned.
fn bisect_to_one<F>(
    mut f: F,
    increasing: bool,
    mut lo: f64,
    mut hi: f64,
    tolerance: f64,
    series_eps: f64,
) -> Result<Enclosure, SolveError>
where
    F: FnMut(f64, f64) -> Result<Enclosure, SolveError>,
{
    let mut eps = series_eps;
    // for a decreasing f: Above means m is left of the root
    let apply = |cmp: Cmp, m: f64, lo: &mut f64, hi: &mut f64| match (cmp, increasing) {
        (Cmp::Above, false) | (Cmp::Below, true) => *lo = m,
        (Cmp::Below, false) | (Cmp::Above, true) => *hi = m,
        (Cmp::Straddle, _) => unreachable!("straddle handled by caller"),
    };

    while hi - lo > tolerance {
        let m = 0.5 * (lo + hi);
        let mut cmp = classify(&f(m, eps)?);
        if cmp == Cmp::Straddle {
            for _ in 0..2 {
                eps = (eps * 1e-2).max(1e-300);
                cmp = classify(&f(m, eps)?);
                if cmp != Cmp::Straddle {
                    break;
                }
            }
        }
        if cmp != Cmp::Straddle {
            apply(cmp, m, &mut lo, &mut hi);
            continue;
        }
        // f(m) is pinned to 1 within slack: m is essentially the root.
        // Tighten both sides by certified probes, then stop.
        let lo_probe = m - 0.5 * tolerance;
        if lo_probe > lo {
            let cmp = classify(&f(lo_probe, eps)?);
            if cmp != Cmp::Straddle {
                apply(cmp, lo_probe, &mut lo, &mut hi);
            }
        }
        let hi_probe = m + 0.5 * tolerance;
        if hi_probe < hi {
            let cmp = classify(&f(hi_probe, eps)?);
            if cmp != Cmp::Straddle {
                apply(cmp, hi_probe, &mut lo, &mut hi);
            }
        }
        break;
    }
    Ok(Enclosure::new(lo, hi))
}

/// Root of `F(t) = Σ_{s∈S} c0^{s·t} · c1^t = 1`, as an enclosure of width
/// at most `options.tolerance` (wider only when the root cannot be separated
/// from 1 within floating-point slack; the returned width makes that
/// visible).
///
/// Singleton gap sets are the degenerate case: `F(t) < 1` for every `t > 0`
/// and the root sits at `t = 0`, returned as the point enclosure `[0, 0]`.
pub fn solve_dimension_root(
    c0: f64,
    c1: f64,
    s: &GapSet,
    options: &SolverOptions,
) -> Result<Enclosure, SolveError> {
    assert_ratio(c0);
    assert_ratio(c1);
    if s.is_singleton() {
        return Ok(Enclosure::point(0.0));
    }

    let f = |t: f64, eps: f64| series_value(t, c0, c1, s, eps);
    let eps = options.series_eps;

    // establish a certified bracket around the root, starting at t = 1
    let start = classify(&f(1.0, eps)?);
    let mut t_lo = None;
    let mut t_hi = None;
    match start {
        Cmp::Above => t_lo = Some(1.0),
        Cmp::Below => t_hi = Some(1.0),
        Cmp::Straddle => {}
    }
    if t_hi.is_none() {
        let mut probe = 2.0;
        while probe <= options.t_max {
            match classify(&f(probe, eps)?) {
                Cmp::Below => {
                    t_hi = Some(probe);
                    break;
                }
                Cmp::Above => t_lo = Some(probe),
                Cmp::Straddle => {}
            }
            probe *= 2.0;
        }
    }
    if t_lo.is_none() {
        let mut probe = 0.5;
        for _ in 0..200 {
            match f(probe, eps) {
                Ok(enc) => match classify(&enc) {
                    Cmp::Above => {
                        t_lo = Some(probe);
                        break;
                    }
                    Cmp::Below => t_hi = Some(probe.min(t_hi.unwrap_or(f64::INFINITY))),
                    Cmp::Straddle => {}
                },
                // tails blow up as t -> 0; the bracket must sit above that
                Err(SolveError::TailBudgetExceeded { .. }) => break,
                Err(e) => return Err(e),
            }
            probe *= 0.5;
        }
    }
    let (t_lo, t_hi) = match (t_lo, t_hi) {
        (Some(lo), Some(hi)) if lo < hi => (lo, hi),
        _ => return Err(SolveError::BracketNotFound),
    };

    bisect_to_one(f, false, t_lo, t_hi, options.tolerance, options.series_eps)
}

/// Dimension bounds: the root for the lower constants and the root for the
/// upper constants of `pair`.
pub fn dimension_bounds(
    pair: &ContractionPair,
    s: &GapSet,
    options: &SolverOptions,
) -> Result<DimensionBounds, SolveError> {
    let lower = solve_dimension_root(pair.c0_lower, pair.c1_lower, s, options)?;
    let upper = solve_dimension_root(pair.c0_upper, pair.c1_upper, s, options)?;
    debug_assert!(lower.mid() <= upper.mid() + options.tolerance);
    Ok(DimensionBounds { lower, upper })
}

/// Solution of the gap-shift entropy equation `Σ_{s∈S} λ^{s+1} = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropySolution {
    pub lambda: Enclosure,
    /// `ln(1/λ)`, in nats.
    pub entropy_nats: f64,
}

/// Entropy of the gap shift: bisection in `λ` of `G(λ) = Σ_{s∈S} λ^{s+1}`,
/// which is the gap series at `t = 1` with `c0 = c1 = λ` and strictly
/// increasing in `λ`.
///
/// Sets with a single element carry entropy 0, returned with the convention
/// `λ = [1, 1]` (their equation `λ^{s+1} = 1` is solved by exactly that).
pub fn solve_entropy(s: &GapSet, options: &SolverOptions) -> Result<EntropySolution, SolveError> {
    if s.is_singleton() {
        return Ok(EntropySolution { lambda: Enclosure::point(1.0), entropy_nats: 0.0 });
    }

    let g = |lambda: f64, eps: f64| series_value(1.0, lambda, lambda, s, eps);
    let eps = options.series_eps;

    let start = classify(&g(0.5, eps)?);
    let mut lam_lo = None;
    let mut lam_hi = None;
    match start {
        // G increasing: a value above 1 bounds the root from above
        Cmp::Above => lam_hi = Some(0.5),
        Cmp::Below => lam_lo = Some(0.5),
        Cmp::Straddle => {}
    }
    if lam_lo.is_none() {
        let mut probe = 0.25;
        for _ in 0..200 {
            match classify(&g(probe, eps)?) {
                Cmp::Below => {
                    lam_lo = Some(probe);
                    break;
                }
                Cmp::Above => lam_hi = Some(probe.min(lam_hi.unwrap_or(f64::INFINITY))),
                Cmp::Straddle => {}
            }
            probe *= 0.5;
        }
    }
    if lam_hi.is_none() {
        let mut probe = 0.75;
        for _ in 0..60 {
            match classify(&g(probe, eps)?) {
                Cmp::Above => {
                    lam_hi = Some(probe);
                    break;
                }
                Cmp::Below => lam_lo = Some(probe.max(lam_lo.unwrap_or(0.0))),
                Cmp::Straddle => {}
            }
            probe = 1.0 - 0.5 * (1.0 - probe);
        }
    }
    let (lam_lo, lam_hi) = match (lam_lo, lam_hi) {
        (Some(lo), Some(hi)) if lo < hi => (lo, hi),
        _ => return Err(SolveError::BracketNotFound),
    };

    let lambda = bisect_to_one(g, true, lam_lo, lam_hi, options.tolerance, options.series_eps)?;
    Ok(EntropySolution { lambda, entropy_nats: fmath::ln(1.0 / lambda.mid()) })
}

/// Maximal eigenvalue `ρ(t) = ½(c0^t + √(c0^{2t} + 4·c0^t·c1^t))` of the
/// weighted golden-mean adjacency matrix `[[c0^t, c1^t], [c0^t, 0]]`.
pub fn golden_mean_spectral_radius(t: f64, c0: f64, c1: f64) -> f64 {
    assert_ratio(c0);
    assert_ratio(c1);
    let a = fmath::powf(c0, t);
    let b = fmath::powf(c1, t);
    0.5 * (a + fmath::sqrt(a * a + 4.0 * a * b))
}

/// Agreement report between the series root and the spectral root for the
/// golden-mean shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenMeanCheck {
    pub h_spectral: f64,
    pub h_series: Enclosure,
    /// `|h_spectral − h_series.mid()|`.
    pub difference: f64,
    /// `|c0^h + c0^h·c1^h − 1|` at `h = h_series.mid()`.
    pub identity_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Solve the golden-mean dimension two ways and compare: the gap-series root
/// for `S = {1, 2, 3, …}` against the spectral-radius root `ρ(h) = 1`, also
/// verifying the closed-form identity `c0^h + c0^h·c1^h = 1` at the series
/// root.
pub fn cross_check_golden_mean(
    c0: f64,
    c1: f64,
    tolerance: f64,
) -> Result<GoldenMeanCheck, SolveError> {
    let golden = GapSet::naturals_from(1);
    let options =
        SolverOptions { tolerance: (0.01 * tolerance).min(1e-10), ..SolverOptions::default() };
    let h_series = solve_dimension_root(c0, c1, &golden, &options)?;

    // plain sign bisection on the strictly decreasing rho(t) - 1
    let rho = |t: f64| golden_mean_spectral_radius(t, c0, c1);
    let mut hi = 1.0;
    let mut guard = 0;
    while rho(hi) > 1.0 {
        hi *= 2.0;
        guard += 1;
        if guard > 64 {
            return Err(SolveError::BracketNotFound);
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if rho(m) > 1.0 {
            lo = m;
        } else {
            hi = m;
        }
        if hi - lo <= 1e-14 * hi.max(1.0) {
            break;
        }
    }
    let h_spectral = 0.5 * (lo + hi);

    let h = h_series.mid();
    let c0h = fmath::powf(c0, h);
    let identity_residual = fmath::abs(c0h + c0h * fmath::powf(c1, h) - 1.0);
    let difference = fmath::abs(h_spectral - h);
    Ok(GoldenMeanCheck {
        h_spectral,
        h_series,
        difference,
        identity_residual,
        tolerance,
        pass: difference <= tolerance && identity_residual <= tolerance,
    })
}
