//! Gap sets: which 0-run lengths may separate consecutive 1s.
//!
//! A gap set is a non-empty set `S` of non-negative integers. Five
//! specifications are supported: explicit finite lists, arithmetic
//! progressions `start + k·step`, the primes, all naturals from an offset,
//! and finite lists preloaded from a file (same shape as `Finite`, tagged
//! separately so callers can report provenance).

use alloc::vec::Vec;
use core::fmt;

/// Which kind of specification a [`GapSet`] was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapSetKind {
    Finite,
    Arithmetic,
    Primes,
    NaturalsFrom,
    FileBacked,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    /// Strictly increasing, non-empty.
    Finite(Vec<u64>),
    /// Same invariants as `Finite`; values came from an external file.
    FileBacked(Vec<u64>),
    /// `{start + k·step : k ≥ 0}`, `step ≥ 1`.
    Arithmetic { start: u64, step: u64 },
    Primes,
    /// `{offset, offset+1, …}`.
    NaturalsFrom { offset: u64 },
}

/// A non-empty set `S ⊆ {0, 1, 2, …}` of allowed gap lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapSet {
    repr: Repr,
}

/// Rejected gap-set specifications.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GapSetError {
    Empty,
    /// Values must be strictly increasing (duplicates rejected); the index is
    /// the position of the first offending element.
    NotStrictlyIncreasing { index: usize },
    ZeroStep,
}

impl fmt::Display for GapSetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GapSetError::Empty => write!(f, "gap set must be non-empty"),
            GapSetError::NotStrictlyIncreasing { index } => {
                write!(f, "gap values must be strictly increasing (element {index})")
            }
            GapSetError::ZeroStep => write!(f, "arithmetic step must be positive"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GapSetError {}

fn check_strictly_increasing(values: &[u64]) -> Result<(), GapSetError> {
    if values.is_empty() {
        return Err(GapSetError::Empty);
    }
    for i in 1..values.len() {
        if values[i] <= values[i - 1] {
            return Err(GapSetError::NotStrictlyIncreasing { index: i });
        }
    }
    Ok(())
}

impl GapSet {
    /// Explicit finite set; values must be strictly increasing.
    pub fn finite(values: Vec<u64>) -> Result<Self, GapSetError> {
        check_strictly_increasing(&values)?;
        Ok(GapSet { repr: Repr::Finite(values) })
    }

    /// Finite set whose values were read from an external source.
    pub fn file_backed(values: Vec<u64>) -> Result<Self, GapSetError> {
        check_strictly_increasing(&values)?;
        Ok(GapSet { repr: Repr::FileBacked(values) })
    }

    /// `{start, start+step, start+2·step, …}` with `step ≥ 1`.
    pub fn arithmetic(start: u64, step: u64) -> Result<Self, GapSetError> {
        if step == 0 {
            return Err(GapSetError::ZeroStep);
        }
        Ok(GapSet { repr: Repr::Arithmetic { start, step } })
    }

    /// The prime numbers `{2, 3, 5, 7, …}`.
    pub fn primes() -> Self {
        GapSet { repr: Repr::Primes }
    }

    /// `{offset, offset+1, offset+2, …}`. `offset = 1` is the golden-mean
    /// shift (no adjacent 1s); `offset = 0` is the full shift.
    pub fn naturals_from(offset: u64) -> Self {
        GapSet { repr: Repr::NaturalsFrom { offset } }
    }

    pub fn kind(&self) -> GapSetKind {
        match self.repr {
            Repr::Finite(_) => GapSetKind::Finite,
            Repr::FileBacked(_) => GapSetKind::FileBacked,
            Repr::Arithmetic { .. } => GapSetKind::Arithmetic,
            Repr::Primes => GapSetKind::Primes,
            Repr::NaturalsFrom { .. } => GapSetKind::NaturalsFrom,
        }
    }

    /// Exact membership test. Primality is decided by trial division.
    pub fn contains(&self, s: u64) -> bool {
        match &self.repr {
            Repr::Finite(v) | Repr::FileBacked(v) => v.binary_search(&s).is_ok(),
            Repr::Arithmetic { start, step } => s >= *start && (s - start).is_multiple_of(*step),
            Repr::Primes => is_prime(s),
            Repr::NaturalsFrom { offset } => s >= *offset,
        }
    }

    /// All elements `s ∈ S` with `s ≤ s_max`, ascending and complete.
    pub fn enumerate_up_to(&self, s_max: u64) -> Vec<u64> {
        match &self.repr {
            Repr::Finite(v) | Repr::FileBacked(v) => {
                v.iter().copied().take_while(|&s| s <= s_max).collect()
            }
            Repr::Arithmetic { start, step } => {
                let mut out = Vec::new();
                let mut s = *start;
                while s <= s_max {
                    out.push(s);
                    match s.checked_add(*step) {
                        Some(next) => s = next,
                        None => break,
                    }
                }
                out
            }
            Repr::Primes => primes_up_to(s_max),
            Repr::NaturalsFrom { offset } => (*offset..=s_max).collect(),
        }
    }

    pub fn is_infinite(&self) -> bool {
        !matches!(self.repr, Repr::Finite(_) | Repr::FileBacked(_))
    }

    /// Smallest element of `S`.
    pub fn min_element(&self) -> u64 {
        match &self.repr {
            Repr::Finite(v) | Repr::FileBacked(v) => v[0],
            Repr::Arithmetic { start, .. } => *start,
            Repr::Primes => 2,
            Repr::NaturalsFrom { offset } => *offset,
        }
    }

    /// Largest element, or `None` for infinite sets.
    pub fn max_element(&self) -> Option<u64> {
        match &self.repr {
            Repr::Finite(v) | Repr::FileBacked(v) => v.last().copied(),
            _ => None,
        }
    }

    /// Smallest element `≥ bound`, or `None` when the set is finite and
    /// exhausted below `bound`.
    pub fn next_at_least(&self, bound: u64) -> Option<u64> {
        match &self.repr {
            Repr::Finite(v) | Repr::FileBacked(v) => {
                let idx = v.partition_point(|&s| s < bound);
                v.get(idx).copied()
            }
            Repr::Arithmetic { start, step } => {
                if bound <= *start {
                    Some(*start)
                } else {
                    let k = (bound - start).div_ceil(*step);
                    start.checked_add(k.checked_mul(*step)?)
                }
            }
            Repr::Primes => {
                let mut s = bound.max(2);
                loop {
                    if is_prime(s) {
                        return Some(s);
                    }
                    s = s.checked_add(1)?;
                }
            }
            Repr::NaturalsFrom { offset } => Some(bound.max(*offset)),
        }
    }

    pub fn is_singleton(&self) -> bool {
        match &self.repr {
            Repr::Finite(v) | Repr::FileBacked(v) => v.len() == 1,
            _ => false,
        }
    }
}

impl fmt::Display for GapSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Finite(v) | Repr::FileBacked(v) => {
                write!(f, "{{")?;
                for (i, s) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, "}}")
            }
            Repr::Arithmetic { start, step } => write!(f, "{{{start}+{step}k}}"),
            Repr::Primes => write!(f, "primes"),
            Repr::NaturalsFrom { offset } => write!(f, "{{{offset},{},...}}", offset + 1),
        }
    }
}

/// Deterministic primality test by trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut i = 5u64;
    while i.saturating_mul(i) <= n {
        if n.is_multiple_of(i) || n.is_multiple_of(i + 2) {
            return false;
        }
        i += 6;
    }
    true
}

/// Sieve of Eratosthenes: all primes `≤ n`, ascending.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut is_composite = alloc::vec![false; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if !is_composite[p] {
            out.push(p as u64);
            let mut m = p * p;
            while m <= n {
                is_composite[m] = true;
                m += p;
            }
        }
    }
    out
}
