//! Dimension bounds for subfractals cut out of an IFS attractor by an S-gap shift.
//!
//! An S-gap shift over the alphabet `{0, 1}` keeps exactly those sequences in
//! which the number of consecutive 0s between two 1s belongs to a prescribed
//! set `S` of non-negative integers. Pairing the two letters with the two maps
//! of a hyperbolic iterated function system selects a subset of the attractor:
//! the points whose symbolic codes the shift allows.
//!
//! This crate computes two-sided Hausdorff/box dimension bounds `[h, H]` for
//! such subfractals and provides the machinery to validate them empirically:
//!
//! * [`gaps`] — gap-set specifications (finite lists, arithmetic progressions,
//!   primes, tails of the naturals, preloaded files) and membership queries;
//! * [`word`] / [`language`] — allowable words, run-length decompositions, and
//!   dynamic-programming counters/enumerators/samplers for the shift language;
//! * [`pressure`] — weighted word sums, finite-scale pressure estimates, and
//!   cylinder-measure ratios;
//! * [`solver`] — certified evaluation of the gap series
//!   `F(t) = Σ_{s∈S} c0^{s·t} · c1^t`, bracketing bisection for the roots of
//!   `F(t) = 1`, the gap-shift entropy equation, and the golden-mean
//!   spectral-radius cross-check;
//! * [`geometry`] — concrete similarity IFSs, subfractal point clouds, grid
//!   box counting, and log-log dimension regression.
//!
//! The crate is `no_std`-compatible (requires `alloc`); transcendental
//! functions fall back to `libm` when the `std` feature is disabled.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod gaps;
pub mod geometry;
pub mod language;
pub mod pressure;
pub mod solver;
pub mod word;

mod fmath;

pub use gaps::{GapSet, GapSetError, GapSetKind};
pub use geometry::{
    bounding_box, box_counts, compose_map, dyadic_scales, estimate_box_dimension, generate_points,
    verify_bounds, Aabb, BoxCount, BoxCountSeries, BoundsCheck, Dimension, DimensionEstimate,
    GeometryError, PointCloud, Similarity, SimilarityIfs,
};
pub use language::{
    count_core, count_language, enumerate_core, enumerate_language, is_allowable, sample_word,
    LanguageError, MAX_EXACT_LEN,
};
pub use pressure::{
    cylinder_measure_estimate, pressure_estimate, weighted_core_sum, weighted_language_sum,
    ContractionError, ContractionPair, CylinderError, PressureSample, SumKind,
};
pub use solver::{
    cross_check_golden_mean, dimension_bounds, golden_mean_spectral_radius, series_value,
    solve_dimension_root, solve_entropy, DimensionBounds, Enclosure, EntropySolution,
    GoldenMeanCheck, SolveError, SolverOptions,
};
pub use word::{RunProfile, Word, WordError};
