//! Concrete similarity IFSs, subfractal point clouds, and box counting.
//!
//! Words select map compositions: the letter 0 applies `map0`, the letter 1
//! applies `map1`. Compositions nest innermost-last, i.e. `f_ω = f_{ω_1} ∘ …
//! ∘ f_{ω_n}`, so that longer prefixes give smaller nested cylinders and the
//! coding map `π(ω) = lim f_{ω|n}(K)` is well defined.
//!
//! Emitted points lie exactly on the subfractal: a core word `ω` (it ends
//! in a 1) is sent to `f_ω(x₀)` where `x₀` is the fixed point of the
//! repeating tail block — `map1` itself when `0 ∈ S`, otherwise the
//! composition for `0^{min S} 1` — so the coded infinite word
//! `ω·(block)^∞` is allowable.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fmath;
use crate::gaps::GapSet;
use crate::language::{count_core, enumerate_core, sample_word, LanguageError, MAX_EXACT_LEN};
use crate::pressure::ContractionPair;
use crate::solver::DimensionBounds;
use crate::word::{RunProfile, Word};

/// Points exactly on a cell boundary belong to the lower cell; the snap
/// keeps that decision stable under floating-point rounding.
const BOX_SNAP: f64 = 1e-9;

/// Ambient dimension of the IFS (1 or 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    One,
    Two,
}

impl Dimension {
    pub fn coords(&self) -> usize {
        match self {
            Dimension::One => 1,
            Dimension::Two => 2,
        }
    }
}

/// An orientation-preserving contracting similarity: `x ↦ r·R(angle)·x + translation`.
/// In dimension 1 the angle must be zero and the second translation
/// coordinate is ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Similarity {
    pub ratio: f64,
    pub angle: f64,
    pub translation: [f64; 2],
}

impl Similarity {
    pub fn new(ratio: f64, angle: f64, translation: [f64; 2]) -> Result<Self, GeometryError> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(GeometryError::InvalidIfs("similarity ratio must lie in (0, 1)"));
        }
        Ok(Similarity { ratio, angle, translation })
    }

    pub fn apply(&self, dim: Dimension, p: [f64; 2]) -> [f64; 2] {
        match dim {
            Dimension::One => [self.ratio * p[0] + self.translation[0], 0.0],
            Dimension::Two => {
                let (sin, cos) = fmath::sin_cos(self.angle);
                [
                    self.ratio * (cos * p[0] - sin * p[1]) + self.translation[0],
                    self.ratio * (sin * p[0] + cos * p[1]) + self.translation[1],
                ]
            }
        }
    }

    /// `self ∘ inner` (apply `inner` first).
    pub fn compose(&self, dim: Dimension, inner: &Similarity) -> Similarity {
        Similarity {
            ratio: self.ratio * inner.ratio,
            angle: match dim {
                Dimension::One => 0.0,
                Dimension::Two => self.angle + inner.angle,
            },
            translation: self.apply(dim, inner.translation),
        }
    }

    /// The unique fixed point `x = f(x)`.
    pub fn fixed_point(&self, dim: Dimension) -> [f64; 2] {
        match dim {
            Dimension::One => [self.translation[0] / (1.0 - self.ratio), 0.0],
            Dimension::Two => {
                let (sin, cos) = fmath::sin_cos(self.angle);
                let a = 1.0 - self.ratio * cos;
                let b = self.ratio * sin;
                // solve (I - r R) x = t
                let det = a * a + b * b;
                let [tx, ty] = self.translation;
                [(a * tx - b * ty) / det, (b * tx + a * ty) / det]
            }
        }
    }
}

/// A two-map similarity IFS with a user-supplied open-set-condition
/// attestation. The flag records a declaration, it is never verified here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityIfs {
    pub dimension: Dimension,
    pub map0: Similarity,
    pub map1: Similarity,
    pub osc_attested: bool,
}

impl SimilarityIfs {
    pub fn new(
        dimension: Dimension,
        map0: Similarity,
        map1: Similarity,
        osc_attested: bool,
    ) -> Result<Self, GeometryError> {
        for m in [&map0, &map1] {
            if !(m.ratio > 0.0 && m.ratio < 1.0) {
                return Err(GeometryError::InvalidIfs("similarity ratio must lie in (0, 1)"));
            }
            if dimension == Dimension::One && m.angle != 0.0 {
                return Err(GeometryError::InvalidIfs("1-dimensional maps cannot rotate"));
            }
        }
        Ok(SimilarityIfs { dimension, map0, map1, osc_attested })
    }

    pub fn map(&self, letter: u8) -> &Similarity {
        if letter == 0 {
            &self.map0
        } else {
            &self.map1
        }
    }

    /// Do the map ratios lie within the contraction pair's intervals?
    pub fn consistent_with(&self, pair: &ContractionPair) -> bool {
        let within = |r: f64, lo: f64, hi: f64| r >= lo - 1e-12 && r <= hi + 1e-12;
        within(self.map0.ratio, pair.c0_lower, pair.c0_upper)
            && within(self.map1.ratio, pair.c1_lower, pair.c1_upper)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeometryError {
    InvalidIfs(&'static str),
    /// No non-empty core word set `G_n` exists for any `n ≤ depth`.
    EmptyCore { depth: usize },
    /// Point generation is limited to word lengths with exact counts.
    DepthLimit { depth: usize },
    EmptyCloud,
    BadScales(&'static str),
    /// Too few box-count entries left after dropping ends.
    NotEnoughPoints { have: usize, need: usize },
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::InvalidIfs(msg) => write!(f, "invalid similarity system: {msg}"),
            GeometryError::EmptyCore { depth } => {
                write!(f, "no core words of any length up to {depth}")
            }
            GeometryError::DepthLimit { depth } => {
                write!(f, "depth {depth} exceeds the exact-count limit {MAX_EXACT_LEN}")
            }
            GeometryError::EmptyCloud => write!(f, "point cloud is empty"),
            GeometryError::BadScales(msg) => write!(f, "bad scale ladder: {msg}"),
            GeometryError::NotEnoughPoints { have, need } => {
                write!(f, "need at least {need} box-count entries, have {have}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GeometryError {}

/// Composite map `f_ω = f_{ω_1} ∘ … ∘ f_{ω_n}` for a non-empty word.
pub fn compose_map(ifs: &SimilarityIfs, w: &Word) -> Similarity {
    assert!(!w.is_empty(), "cannot compose the empty word");
    let letters = w.letters();
    let mut acc = *ifs.map(letters[0]);
    for &letter in &letters[1..] {
        acc = acc.compose(ifs.dimension, ifs.map(letter));
    }
    acc
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

impl Aabb {
    fn of_points(points: &[[f64; 2]]) -> Aabb {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for p in points {
            for i in 0..2 {
                min[i] = min[i].min(p[i]);
                max[i] = max[i].max(p[i]);
            }
        }
        Aabb { min, max }
    }

    fn hull(&self, other: &Aabb) -> Aabb {
        Aabb {
            min: [self.min[0].min(other.min[0]), self.min[1].min(other.min[1])],
            max: [self.max[0].max(other.max[0]), self.max[1].max(other.max[1])],
        }
    }

    /// Exact bounding box of the image (affine images of boxes are spanned
    /// by corner images).
    pub fn transform(&self, sim: &Similarity, dim: Dimension) -> Aabb {
        let corners = [
            [self.min[0], self.min[1]],
            [self.min[0], self.max[1]],
            [self.max[0], self.min[1]],
            [self.max[0], self.max[1]],
        ];
        let images: Vec<[f64; 2]> = corners.iter().map(|&c| sim.apply(dim, c)).collect();
        Aabb::of_points(&images)
    }

    pub fn contains(&self, p: [f64; 2], slack: f64) -> bool {
        (0..2).all(|i| p[i] >= self.min[i] - slack && p[i] <= self.max[i] + slack)
    }

    pub fn contains_box(&self, other: &Aabb, slack: f64) -> bool {
        (0..2).all(|i| other.min[i] >= self.min[i] - slack && other.max[i] <= self.max[i] + slack)
    }

    pub fn diameter(&self, dim: Dimension) -> f64 {
        let dx = self.max[0] - self.min[0];
        match dim {
            Dimension::One => dx,
            Dimension::Two => {
                let dy = self.max[1] - self.min[1];
                fmath::sqrt(dx * dx + dy * dy)
            }
        }
    }
}

/// A box that contains the attractor: grow the hull of the two fixed points
/// under both maps until it stops moving. Growth is monotone and the maps
/// contract, so this converges.
pub fn bounding_box(ifs: &SimilarityIfs) -> Aabb {
    let dim = ifs.dimension;
    let fp0 = ifs.map0.fixed_point(dim);
    let fp1 = ifs.map1.fixed_point(dim);
    let mut b = Aabb::of_points(&[fp0, fp1]);
    for _ in 0..10_000 {
        let grown = b.hull(&b.transform(&ifs.map0, dim)).hull(&b.transform(&ifs.map1, dim));
        let moved = (0..2).any(|i| {
            (grown.min[i] - b.min[i]).abs() > 1e-13 || (grown.max[i] - b.max[i]).abs() > 1e-13
        });
        b = grown;
        if !moved {
            break;
        }
    }
    b
}

/// Points on the subfractal, one per generating word.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dimension: Dimension,
    points: Vec<[f64; 2]>,
    word_length: usize,
}

impl PointCloud {
    pub fn from_points(dimension: Dimension, points: Vec<[f64; 2]>, word_length: usize) -> Self {
        PointCloud { dimension, points, word_length }
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn word_length(&self) -> usize {
        self.word_length
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The repeating tail block whose fixed point anchors every emitted point:
/// `1` when `0 ∈ S`, otherwise `0^{min S} 1`.
fn anchor_block(s: &GapSet) -> Word {
    let mut w = Word::empty();
    if !s.contains(0) {
        w.push_zeros(s.min_element() as usize);
    }
    w.push(1);
    w
}

/// Extend an allowable word so that it ends in 1 and stays allowable when
/// followed by the anchor tail: a trailing 0-run is stretched to the next
/// element of `S` and closed with a 1; all-zero words just gain a 1.
fn completed_word(w: &Word, s: &GapSet) -> Word {
    let profile = RunProfile::of(w);
    let mut out = w.clone();
    if profile.ones == 0 {
        out.push(1);
        return out;
    }
    if profile.trailing == 0 {
        return out;
    }
    let gap = s
        .next_at_least(profile.trailing as u64)
        .expect("allowable trailing runs extend to an element of S");
    out.push_zeros(gap as usize - profile.trailing);
    out.push(1);
    out
}

/// Generate a subfractal point cloud.
///
/// Uses the largest `n ≤ depth` with a non-empty core word set `G_n`. When
/// `|G_n| ≤ cap` every core word is emitted (the seed is then unused);
/// otherwise `cap` pseudo-random allowable words are drawn, completed, and
/// emitted. Identical inputs give identical clouds.
pub fn generate_points(
    ifs: &SimilarityIfs,
    s: &GapSet,
    depth: usize,
    cap: usize,
    seed: u64,
) -> Result<PointCloud, GeometryError> {
    assert!(depth >= 1, "depth must be at least 1");
    if depth > MAX_EXACT_LEN {
        return Err(GeometryError::DepthLimit { depth });
    }
    let count_at = |n: usize| -> u128 {
        match count_core(n, s) {
            Ok(c) => c,
            Err(LanguageError::LengthLimit { .. }) | Err(LanguageError::Overflow) => u128::MAX,
        }
    };
    let used_depth = (1..=depth)
        .rev()
        .find(|&n| count_at(n) > 0)
        .ok_or(GeometryError::EmptyCore { depth })?;

    let anchor = compose_map(ifs, &anchor_block(s)).fixed_point(ifs.dimension);
    let mut points = Vec::new();
    if count_at(used_depth) <= cap as u128 {
        for w in enumerate_core(used_depth, s, cap) {
            points.push(compose_map(ifs, &w).apply(ifs.dimension, anchor));
        }
    } else {
        let mut master = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..cap {
            let w = sample_word(used_depth, s, master.next_u64());
            let w = completed_word(&w, s);
            points.push(compose_map(ifs, &w).apply(ifs.dimension, anchor));
        }
    }
    Ok(PointCloud { dimension: ifs.dimension, points, word_length: used_depth })
}

/// One `(scale, occupied cells)` entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxCount {
    pub scale: f64,
    pub count: u64,
}

/// Box counts over a strictly decreasing scale ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxCountSeries {
    entries: Vec<BoxCount>,
}

impl BoxCountSeries {
    pub fn new(entries: Vec<BoxCount>) -> Result<Self, GeometryError> {
        for pair in entries.windows(2) {
            if pair[1].scale >= pair[0].scale {
                return Err(GeometryError::BadScales("scales must be strictly decreasing"));
            }
        }
        for e in &entries {
            if !(e.scale > 0.0 && e.scale <= 1.0) {
                return Err(GeometryError::BadScales("scales must lie in (0, 1]"));
            }
            if e.count == 0 {
                return Err(GeometryError::BadScales("counts must be at least 1"));
            }
        }
        Ok(BoxCountSeries { entries })
    }

    pub fn entries(&self) -> &[BoxCount] {
        &self.entries
    }
}

fn cell_index(x: f64, r: f64) -> i64 {
    fmath::floor(x / r - BOX_SNAP) as i64
}

/// Count occupied grid cells of side `r`, grid anchored at the origin, for
/// each scale in the (strictly decreasing) ladder.
pub fn box_counts(cloud: &PointCloud, scales: &[f64]) -> Result<BoxCountSeries, GeometryError> {
    if cloud.is_empty() {
        return Err(GeometryError::EmptyCloud);
    }
    if scales.is_empty() {
        return Err(GeometryError::BadScales("empty scale ladder"));
    }
    for pair in scales.windows(2) {
        if pair[1] >= pair[0] {
            return Err(GeometryError::BadScales("scales must be strictly decreasing"));
        }
    }
    if !(scales[0] <= 1.0 && scales[scales.len() - 1] > 0.0) {
        return Err(GeometryError::BadScales("scales must lie in (0, 1]"));
    }
    let mut entries = Vec::with_capacity(scales.len());
    for &r in scales {
        let mut cells: BTreeSet<(i64, i64)> = BTreeSet::new();
        for p in cloud.points() {
            let kx = cell_index(p[0], r);
            let ky = match cloud.dimension() {
                Dimension::One => 0,
                Dimension::Two => cell_index(p[1], r),
            };
            cells.insert((kx, ky));
        }
        entries.push(BoxCount { scale: r, count: cells.len() as u64 });
    }
    BoxCountSeries::new(entries)
}

/// Least-squares slope of `ln N` against `ln(1/r)` with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionEstimate {
    pub slope: f64,
    pub stderr: f64,
}

/// Fit the box-count power law after dropping the `drop_high` largest and
/// `drop_low` smallest scales.
pub fn estimate_box_dimension(
    series: &BoxCountSeries,
    drop_low: usize,
    drop_high: usize,
) -> Result<DimensionEstimate, GeometryError> {
    let entries = series.entries();
    let need = drop_low + drop_high + 2;
    if entries.len() < need {
        return Err(GeometryError::NotEnoughPoints { have: entries.len(), need });
    }
    let used = &entries[drop_high..entries.len() - drop_low];
    let m = used.len() as f64;
    let xs: Vec<f64> = used.iter().map(|e| fmath::ln(1.0 / e.scale)).collect();
    let ys: Vec<f64> = used.iter().map(|e| fmath::ln(e.count as f64)).collect();
    let x_mean = xs.iter().sum::<f64>() / m;
    let y_mean = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean) * (x - x_mean)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - x_mean) * (y - y_mean)).sum();
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let stderr = if used.len() > 2 {
        let ss_res: f64 = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| {
                let e = y - (intercept + slope * x);
                e * e
            })
            .sum();
        fmath::sqrt(ss_res / (m - 2.0) / sxx)
    } else {
        0.0
    };
    Ok(DimensionEstimate { slope, stderr })
}

/// Containment report of an empirical estimate in `[h − slack, H + slack]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsCheck {
    pub estimate: f64,
    pub stderr: f64,
    pub lower_limit: f64,
    pub upper_limit: f64,
    pub pass: bool,
}

pub fn verify_bounds(
    estimate: f64,
    stderr: f64,
    bounds: &DimensionBounds,
    slack: f64,
) -> BoundsCheck {
    let lower_limit = bounds.lower.lo() - slack;
    let upper_limit = bounds.upper.hi() + slack;
    BoundsCheck {
        estimate,
        stderr,
        lower_limit,
        upper_limit,
        pass: estimate >= lower_limit && estimate <= upper_limit,
    }
}

/// The ladder `2^{-min_exp}, …, 2^{-max_exp}` (strictly decreasing).
pub fn dyadic_scales(min_exp: u32, max_exp: u32) -> Vec<f64> {
    assert!(min_exp <= max_exp);
    (min_exp..=max_exp).map(|j| fmath::powf(2.0, -(j as f64))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::is_allowable;
    use crate::solver::Enclosure;
    use alloc::vec;

    fn cantor_ifs() -> SimilarityIfs {
        SimilarityIfs::new(
            Dimension::One,
            Similarity::new(1.0 / 3.0, 0.0, [0.0, 0.0]).unwrap(),
            Similarity::new(1.0 / 3.0, 0.0, [2.0 / 3.0, 0.0]).unwrap(),
            true,
        )
        .unwrap()
    }

    fn rotated_ifs() -> SimilarityIfs {
        SimilarityIfs::new(
            Dimension::Two,
            Similarity::new(0.42, 0.5, [0.1, 0.05]).unwrap(),
            Similarity::new(0.37, -0.3, [0.55, 0.25]).unwrap(),
            true,
        )
        .unwrap()
    }

    fn word(s: &str) -> Word {
        s.parse().unwrap()
    }

    /// Is `x` in the depth-`k` middle-thirds construction set?
    fn in_cantor_depth(mut x: f64, k: usize) -> bool {
        let tol = 1e-9;
        for _ in 0..k {
            if x < -tol || x > 1.0 + tol {
                return false;
            }
            if x <= 1.0 / 3.0 + tol {
                x *= 3.0;
            } else if x >= 2.0 / 3.0 - tol {
                x = 3.0 * x - 2.0;
            } else {
                return false;
            }
        }
        true
    }

    #[test]
    fn compose_single_letter_is_the_map() {
        let ifs = cantor_ifs();
        assert_eq!(compose_map(&ifs, &word("0")), ifs.map0);
        assert_eq!(compose_map(&ifs, &word("1")), ifs.map1);
    }

    #[test]
    fn composed_ratio_multiplies() {
        let ifs = rotated_ifs();
        let c = compose_map(&ifs, &word("01"));
        assert!((c.ratio - 0.42 * 0.37).abs() <= 1e-15);
        let c = compose_map(&ifs, &word("0011"));
        assert!((c.ratio - 0.42 * 0.42 * 0.37 * 0.37).abs() <= 1e-15);
    }

    #[test]
    fn hand_composed_cantor_maps() {
        // f_11(x) = f1(f1(x)) = x/9 + 8/9
        let ifs = cantor_ifs();
        let c = compose_map(&ifs, &word("11"));
        assert!((c.ratio - 1.0 / 9.0).abs() <= 1e-15);
        assert!((c.translation[0] - 8.0 / 9.0).abs() <= 1e-15);
    }

    #[test]
    fn composition_matches_sequential_application() {
        let ifs = rotated_ifs();
        let w = word("0110100101");
        let composed = compose_map(&ifs, &w);
        let p = [0.3, -0.2];
        // innermost-last: apply letters right to left
        let mut seq = p;
        for &l in w.letters().iter().rev() {
            seq = ifs.map(l).apply(ifs.dimension, seq);
        }
        let via = composed.apply(ifs.dimension, p);
        assert!((via[0] - seq[0]).abs() <= 1e-12);
        assert!((via[1] - seq[1]).abs() <= 1e-12);
    }

    #[test]
    fn fixed_points() {
        let ifs = cantor_ifs();
        assert!((ifs.map1.fixed_point(Dimension::One)[0] - 1.0).abs() <= 1e-15);
        assert!((ifs.map0.fixed_point(Dimension::One)[0]).abs() <= 1e-15);

        let r = rotated_ifs();
        for m in [r.map0, r.map1] {
            let fp = m.fixed_point(Dimension::Two);
            let image = m.apply(Dimension::Two, fp);
            assert!((fp[0] - image[0]).abs() <= 1e-14);
            assert!((fp[1] - image[1]).abs() <= 1e-14);
        }
    }

    #[test]
    fn full_shift_cloud_hits_the_cantor_set() {
        let ifs = cantor_ifs();
        let s = GapSet::naturals_from(0);
        let cloud = generate_points(&ifs, &s, 8, 1_000_000, 7).unwrap();
        // |G_8| = 2^7: every length-8 word ending in 1
        assert_eq!(cloud.len(), 128);
        assert_eq!(cloud.word_length(), 8);
        for p in cloud.points() {
            assert!(in_cantor_depth(p[0], 8), "{} not in the Cantor set", p[0]);
        }
        assert_eq!(cloud, generate_points(&ifs, &s, 8, 1_000_000, 7).unwrap());
    }

    #[test]
    fn golden_mean_cloud_count_matches_core_count() {
        let ifs = cantor_ifs();
        let s = GapSet::naturals_from(1);
        let cloud = generate_points(&ifs, &s, 8, 1_000_000, 0).unwrap();
        assert_eq!(cloud.len() as u128, count_core(8, &s).unwrap());
        for p in cloud.points() {
            assert!(in_cantor_depth(p[0], 8));
        }
    }

    #[test]
    fn sampled_clouds_are_deterministic_and_on_fractal() {
        let ifs = cantor_ifs();
        let s = GapSet::naturals_from(0);
        // |G_10| = 512 > cap: sampled branch
        let a = generate_points(&ifs, &s, 10, 50, 3).unwrap();
        let b = generate_points(&ifs, &s, 10, 50, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 50);
        for p in a.points() {
            assert!(in_cantor_depth(p[0], 10));
        }
        let c = generate_points(&ifs, &s, 10, 50, 4).unwrap();
        assert_ne!(a, c, "different seeds should give different samples");
    }

    #[test]
    fn sampled_prime_gap_points_stay_on_fractal() {
        // 0 is not in S: the anchor is the fixed point of f_{001}
        let ifs = cantor_ifs();
        let s = GapSet::primes();
        let cloud = generate_points(&ifs, &s, 20, 40, 9).unwrap();
        assert_eq!(cloud.len(), 40);
        for p in cloud.points() {
            assert!(in_cantor_depth(p[0], 12));
        }
    }

    #[test]
    fn empty_core_is_an_error() {
        let ifs = cantor_ifs();
        let s = GapSet::finite(vec![5, 9]).unwrap();
        assert_eq!(
            generate_points(&ifs, &s, 3, 100, 0),
            Err(GeometryError::EmptyCore { depth: 3 })
        );
        // depth 6 admits the core word 000001
        assert_eq!(generate_points(&ifs, &s, 6, 100, 0).unwrap().len(), 1);
    }

    #[test]
    fn completed_words_extend_trailing_runs() {
        let s = GapSet::finite(vec![2, 5]).unwrap();
        // trailing run 2 is already in S: close it with a 1
        let done = completed_word(&word("00100"), &s);
        assert_eq!(done, word("001001"));
        assert!(is_allowable(&done, &s));
        // trailing run 1 must stretch to the next element, 2
        let done = completed_word(&word("0010"), &s);
        assert_eq!(done, word("001001"));
        assert!(is_allowable(&done, &s));
        assert_eq!(completed_word(&word("001"), &s), word("001"));
        assert_eq!(completed_word(&word("00"), &s), word("001"));
    }

    #[test]
    fn cantor_ternary_box_counts_are_exact() {
        let ifs = cantor_ifs();
        let cloud = generate_points(&ifs, &GapSet::naturals_from(0), 8, 1_000_000, 0).unwrap();
        let scales: Vec<f64> = (1..=8).map(|j| fmath::powf(3.0, -(j as f64))).collect();
        let series = box_counts(&cloud, &scales).unwrap();
        let expect: Vec<u64> = vec![2, 4, 8, 16, 32, 64, 128, 128];
        let got: Vec<u64> = series.entries().iter().map(|e| e.count).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn single_point_counts_one_box_everywhere() {
        let cloud = PointCloud::from_points(Dimension::Two, vec![[0.37, 0.81]], 1);
        let series = box_counts(&cloud, &dyadic_scales(1, 10)).unwrap();
        assert!(series.entries().iter().all(|e| e.count == 1));
    }

    #[test]
    fn halving_scales_never_decreases_counts() {
        let ifs = cantor_ifs();
        let cloud = generate_points(&ifs, &GapSet::naturals_from(0), 10, 1_000_000, 0).unwrap();
        let series = box_counts(&cloud, &dyadic_scales(1, 12)).unwrap();
        for pair in series.entries().windows(2) {
            assert!(pair[1].count >= pair[0].count);
        }
    }

    #[test]
    fn box_count_input_validation() {
        let cloud = PointCloud::from_points(Dimension::One, vec![[0.5, 0.0]], 1);
        assert!(matches!(
            box_counts(&cloud, &[0.25, 0.5]),
            Err(GeometryError::BadScales(_))
        ));
        assert!(matches!(
            box_counts(&cloud, &[2.0, 1.0]),
            Err(GeometryError::BadScales(_))
        ));
        let empty = PointCloud::from_points(Dimension::One, vec![], 1);
        assert_eq!(box_counts(&empty, &[0.5]), Err(GeometryError::EmptyCloud));
    }

    #[test]
    fn exact_power_law_regresses_exactly() {
        // N = (1/r)^{1/2}: scales 4^{-k} carry exactly 2^k boxes
        let entries: Vec<BoxCount> = (1..=6)
            .map(|k| BoxCount { scale: fmath::powf(2.0, -(2 * k) as f64), count: 1u64 << k })
            .collect();
        let series = BoxCountSeries::new(entries).unwrap();
        let est = estimate_box_dimension(&series, 0, 0).unwrap();
        assert!((est.slope - 0.5).abs() <= 1e-12, "slope {}", est.slope);
        assert!(est.stderr <= 1e-12);
    }

    #[test]
    fn cantor_ternary_series_regresses_to_log2_over_log3() {
        let ifs = cantor_ifs();
        let cloud = generate_points(&ifs, &GapSet::naturals_from(0), 8, 1_000_000, 0).unwrap();
        let scales: Vec<f64> = (1..=7).map(|j| fmath::powf(3.0, -(j as f64))).collect();
        let series = box_counts(&cloud, &scales).unwrap();
        let est = estimate_box_dimension(&series, 0, 0).unwrap();
        let expect = fmath::ln(2.0) / fmath::ln(3.0);
        assert!((est.slope - expect).abs() <= 1e-12, "slope {}", est.slope);
        assert!(est.stderr <= 1e-10);
    }

    #[test]
    fn constant_counts_give_slope_zero() {
        let entries: Vec<BoxCount> =
            (2..=8).map(|j| BoxCount { scale: fmath::powf(2.0, -(j as f64)), count: 5 }).collect();
        let series = BoxCountSeries::new(entries).unwrap();
        let est = estimate_box_dimension(&series, 1, 1).unwrap();
        assert_eq!(est.slope, 0.0);
    }

    #[test]
    fn too_few_entries_is_an_error() {
        let entries: Vec<BoxCount> =
            (2..=4).map(|j| BoxCount { scale: fmath::powf(2.0, -(j as f64)), count: 2 }).collect();
        let series = BoxCountSeries::new(entries).unwrap();
        assert_eq!(
            estimate_box_dimension(&series, 2, 2),
            Err(GeometryError::NotEnoughPoints { have: 3, need: 6 })
        );
    }

    #[test]
    fn verify_bounds_examples() {
        let bounds = DimensionBounds {
            lower: Enclosure::new(0.6309, 0.6309),
            upper: Enclosure::new(0.6309, 0.6309),
        };
        assert!(verify_bounds(0.63, 0.01, &bounds, 0.05).pass);

        let bounds =
            DimensionBounds { lower: Enclosure::new(0.43, 0.43), upper: Enclosure::new(0.44, 0.44) };
        assert!(!verify_bounds(0.2, 0.01, &bounds, 0.05).pass);

        let exact = DimensionBounds {
            lower: Enclosure::point(0.5),
            upper: Enclosure::point(0.5),
        };
        // boundary inclusive at slack zero
        assert!(verify_bounds(0.5, 0.0, &exact, 0.0).pass);
    }

    #[test]
    fn cylinder_images_nest() {
        for (ifs, s) in [
            (cantor_ifs(), GapSet::naturals_from(1)),
            (rotated_ifs(), GapSet::primes()),
        ] {
            let hull = bounding_box(&ifs);
            for seed in 0..8u64 {
                let w = sample_word(10, &s, seed);
                if w.count_ones() == 0 {
                    continue;
                }
                let mut prev = hull;
                for n in 1..=w.len() {
                    let img = hull.transform(&compose_map(&ifs, &w.subword(0, n)), ifs.dimension);
                    assert!(
                        prev.contains_box(&img, 1e-12),
                        "prefix {n} of {w} escapes its parent cylinder"
                    );
                    prev = img;
                }
            }
        }
    }

    #[test]
    fn similarity_images_scale_diameters_exactly() {
        let ifs = rotated_ifs();
        let hull = bounding_box(&ifs);
        let w = word("0110101101");
        let composed = compose_map(&ifs, &w);
        // rotations keep diameters; boxes are measured corner to corner
        let corners = [
            [hull.min[0], hull.min[1]],
            [hull.min[0], hull.max[1]],
            [hull.max[0], hull.min[1]],
            [hull.max[0], hull.max[1]],
        ];
        let mut max_dist = 0.0f64;
        let mut max_img = 0.0f64;
        for a in corners {
            for b in corners {
                let d = fmath::sqrt((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2));
                let ia = composed.apply(Dimension::Two, a);
                let ib = composed.apply(Dimension::Two, b);
                let di = fmath::sqrt((ia[0] - ib[0]).powi(2) + (ia[1] - ib[1]).powi(2));
                max_dist = max_dist.max(d);
                max_img = max_img.max(di);
            }
        }
        assert!((max_img - composed.ratio * max_dist).abs() <= 1e-12 * max_dist.max(1.0));
    }

    #[test]
    fn clouds_stay_inside_the_bounding_box() {
        for (ifs, s) in [
            (cantor_ifs(), GapSet::naturals_from(0)),
            (rotated_ifs(), GapSet::naturals_from(1)),
        ] {
            let hull = bounding_box(&ifs);
            let cloud = generate_points(&ifs, &s, 10, 400, 5).unwrap();
            for &p in cloud.points() {
                assert!(hull.contains(p, 1e-9), "point {p:?} outside {hull:?}");
            }
        }
    }

    #[test]
    fn one_dimensional_maps_reject_rotation() {
        let err = SimilarityIfs::new(
            Dimension::One,
            Similarity { ratio: 0.5, angle: 0.1, translation: [0.0, 0.0] },
            Similarity { ratio: 0.5, angle: 0.0, translation: [0.5, 0.0] },
            false,
        );
        assert!(matches!(err, Err(GeometryError::InvalidIfs(_))));
        assert!(Similarity::new(1.2, 0.0, [0.0, 0.0]).is_err());
    }
}
