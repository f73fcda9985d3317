//! Membership, counting, enumeration, and sampling for S-gap shift languages.
//!
//! A word is allowable when every 0-run strictly between two 1s has a length
//! in `S`, and — for finite `S` only — the leading run, the trailing run, and
//! the total length of an all-zero word do not exceed `max(S)`. For infinite
//! `S` the leading and trailing runs are unconstrained. The empty word is
//! allowable.
//!
//! Counting walks a DP over the state `(seen a 1 yet, current trailing 0-run
//! length)`; for finite `S` runs longer than `max(S)` enter an absorbing dead
//! state. The weighted sums in [`crate::pressure`] reuse the same transition
//! structure with multiplicative per-letter weights.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gaps::GapSet;
use crate::word::{RunProfile, Word};

/// Largest word length for which exact (u128) counting is supported.
pub const MAX_EXACT_LEN: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LanguageError {
    /// Exact counts are only computed up to [`MAX_EXACT_LEN`].
    LengthLimit { n: usize },
    /// The count does not fit in the configured integer width.
    Overflow,
}

impl fmt::Display for LanguageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LanguageError::LengthLimit { n } => {
                write!(f, "word length {n} exceeds the exact-count limit {MAX_EXACT_LEN}")
            }
            LanguageError::Overflow => write!(f, "count overflows the configured integer width"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for LanguageError {}

/// Shared transition structure for the membership DP.
///
/// States are `(seen_one, run)` with `run ≤ run_limit`; transitions that
/// would create an internal gap outside `S`, or (finite `S`) a run longer
/// than `max(S)`, go to an implicit absorbing dead state. With that capping
/// every live state is an accepting state.
pub(crate) struct DpContext {
    in_s: Vec<bool>,
    run_limit: usize,
}

impl DpContext {
    /// `max_run_needed` is the longest 0-run the caller can produce
    /// (start run + number of DP steps).
    pub(crate) fn new(s: &GapSet, max_run_needed: usize) -> Self {
        let run_limit = match s.max_element() {
            Some(m) => m.min(max_run_needed as u64) as usize,
            None => max_run_needed,
        };
        let mut in_s = vec![false; run_limit + 1];
        for v in s.enumerate_up_to(run_limit as u64) {
            in_s[v as usize] = true;
        }
        DpContext { in_s, run_limit }
    }

    pub(crate) fn state_count(&self) -> usize {
        2 * (self.run_limit + 1)
    }

    pub(crate) fn state_index(&self, seen_one: bool, run: usize) -> usize {
        debug_assert!(run <= self.run_limit);
        if seen_one {
            self.run_limit + 1 + run
        } else {
            run
        }
    }

    /// Next state after appending `letter`, or `None` for the dead state.
    pub(crate) fn step(&self, seen_one: bool, run: usize, letter: u8) -> Option<(bool, usize)> {
        if letter == 0 {
            let next = run + 1;
            if next <= self.run_limit {
                Some((seen_one, next))
            } else {
                // for finite S this is the absorbing dead state; for infinite S
                // the run budget only binds on states that are unreachable
                // within the remaining length, so dropping them is harmless
                None
            }
        } else if !seen_one {
            // leading run: any representable length is fine
            Some((true, 0))
        } else if self.in_s[run] {
            Some((true, 0))
        } else {
            None
        }
    }
}

fn run_count_dp(
    ctx: &DpContext,
    start: (bool, usize),
    steps: usize,
) -> Result<u128, LanguageError> {
    let mut cur = vec![0u128; ctx.state_count()];
    cur[ctx.state_index(start.0, start.1)] = 1;
    let mut next = vec![0u128; ctx.state_count()];
    for _ in 0..steps {
        next.iter_mut().for_each(|v| *v = 0);
        for seen in [false, true] {
            for run in 0..=ctx.run_limit {
                let v = cur[ctx.state_index(seen, run)];
                if v == 0 {
                    continue;
                }
                for letter in [0u8, 1u8] {
                    if let Some((ns, nr)) = ctx.step(seen, run, letter) {
                        let slot = &mut next[ctx.state_index(ns, nr)];
                        *slot = slot.checked_add(v).ok_or(LanguageError::Overflow)?;
                    }
                }
            }
        }
        core::mem::swap(&mut cur, &mut next);
    }
    let mut total = 0u128;
    for v in cur {
        total = total.checked_add(v).ok_or(LanguageError::Overflow)?;
    }
    Ok(total)
}

/// Is `w` a word of the language of the S-gap shift for `s`?
pub fn is_allowable(w: &Word, s: &GapSet) -> bool {
    let profile = RunProfile::of(w);
    for &g in &profile.internal_gaps {
        if !s.contains(g as u64) {
            return false;
        }
    }
    if let Some(m) = s.max_element() {
        let m = m as usize;
        if profile.ones == 0 {
            return w.len() <= m;
        }
        if profile.leading > m || profile.trailing > m {
            return false;
        }
    }
    true
}

/// `|L_n|`: the number of allowable words of length `n`.
///
/// Computed by the run-length DP, never by enumerating `2^n` words.
pub fn count_language(n: usize, s: &GapSet) -> Result<u128, LanguageError> {
    if n > MAX_EXACT_LEN {
        return Err(LanguageError::LengthLimit { n });
    }
    let ctx = DpContext::new(s, n);
    run_count_dp(&ctx, (false, 0), n)
}

/// `|G_n|`: the number of core words `0^{s_1} 1 … 0^{s_k} 1` of length `n`
/// with every `s_i ∈ S`. `count_core(0) = 1` by the empty-product convention.
///
/// Satisfies the renewal recurrence
/// `g(n) = Σ_{s ∈ S, s+1 ≤ n} g(n − s − 1)`.
pub fn count_core(n: usize, s: &GapSet) -> Result<u128, LanguageError> {
    if n > MAX_EXACT_LEN {
        return Err(LanguageError::LengthLimit { n });
    }
    let svals = s.enumerate_up_to(n.saturating_sub(1) as u64);
    let mut g = vec![0u128; n + 1];
    g[0] = 1;
    for m in 1..=n {
        let mut acc = 0u128;
        for &sv in &svals {
            let block = sv as usize + 1;
            if block <= m {
                acc = acc.checked_add(g[m - block]).ok_or(LanguageError::Overflow)?;
            }
        }
        g[m] = acc;
    }
    Ok(g[n])
}

/// All core words of length `n`, at most `cap` of them, in a fixed
/// deterministic order. Callers wanting completeness should check
/// [`count_core`] against `cap` first.
pub fn enumerate_core(n: usize, s: &GapSet, cap: usize) -> Vec<Word> {
    fn rec(remaining: usize, svals: &[u64], prefix: &mut Word, out: &mut Vec<Word>, cap: usize) {
        if out.len() >= cap {
            return;
        }
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        let before = prefix.len();
        for &sv in svals {
            let block = sv as usize + 1;
            if block > remaining {
                break;
            }
            prefix.push_zeros(sv as usize);
            prefix.push(1);
            rec(remaining - block, svals, prefix, out, cap);
            prefix.truncate(before);
            if out.len() >= cap {
                return;
            }
        }
    }

    let svals = s.enumerate_up_to(n.saturating_sub(1) as u64);
    let mut out = Vec::new();
    if cap == 0 {
        return out;
    }
    let mut prefix = Word::empty();
    rec(n, &svals, &mut prefix, &mut out, cap);
    out
}

/// Lexicographic enumeration (0 before 1) of the allowable words of length
/// `n`, stopping after `cap` words.
pub fn enumerate_language(n: usize, s: &GapSet, cap: u64) -> LanguageEnumerator {
    let ctx = DpContext::new(s, n);
    // comp[k][state] = number of accepted completions of length k from state,
    // saturating; the DFS below only needs "is it nonzero".
    let mut comp = vec![vec![0u128; ctx.state_count()]; n + 1];
    for v in comp[0].iter_mut() {
        *v = 1;
    }
    for k in 1..=n {
        for seen in [false, true] {
            for run in 0..=ctx.run_limit {
                let mut acc = 0u128;
                for letter in [0u8, 1u8] {
                    if let Some((ns, nr)) = ctx.step(seen, run, letter) {
                        acc = acc.saturating_add(comp[k - 1][ctx.state_index(ns, nr)]);
                    }
                }
                let idx = ctx.state_index(seen, run);
                comp[k][idx] = acc;
            }
        }
    }
    LanguageEnumerator {
        ctx,
        comp,
        n,
        remaining: cap,
        stack: vec![Frame { seen: false, run: 0, next_letter: 0 }],
        prefix: Vec::new(),
    }
}

struct Frame {
    seen: bool,
    run: usize,
    next_letter: u8,
}

/// See [`enumerate_language`].
pub struct LanguageEnumerator {
    ctx: DpContext,
    comp: Vec<Vec<u128>>,
    n: usize,
    remaining: u64,
    stack: Vec<Frame>,
    prefix: Vec<u8>,
}

impl Iterator for LanguageEnumerator {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.remaining == 0 {
            return None;
        }
        while !self.stack.is_empty() {
            let depth = self.prefix.len();
            if depth == self.n {
                let word = Word::from_letters(self.prefix.clone()).expect("letters are 0/1");
                self.stack.pop();
                self.prefix.pop();
                self.remaining -= 1;
                return Some(word);
            }
            let top = self.stack.len() - 1;
            let (seen, run, tried) = {
                let f = &self.stack[top];
                (f.seen, f.run, f.next_letter)
            };
            let mut advanced = false;
            for letter in tried..2 {
                self.stack[top].next_letter = letter + 1;
                if let Some((ns, nr)) = self.ctx.step(seen, run, letter) {
                    let left = self.n - depth - 1;
                    if self.comp[left][self.ctx.state_index(ns, nr)] > 0 {
                        self.prefix.push(letter);
                        self.stack.push(Frame { seen: ns, run: nr, next_letter: 0 });
                        advanced = true;
                        break;
                    }
                }
            }
            if !advanced {
                self.stack.pop();
                self.prefix.pop();
            }
        }
        None
    }
}

/// A pseudo-random allowable word of length `n`, deterministic in `seed`.
///
/// Blocks `0^s 1` are appended with `s` drawn uniformly from the elements of
/// `S` that still fit; once none fits the word is padded with zeros. The pad
/// is always legal: if no block fits, the remainder is at most `min(S)`,
/// hence at most `max(S)` for finite sets. Every input therefore yields an
/// allowable word.
pub fn sample_word(n: usize, s: &GapSet, seed: u64) -> Word {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gaps = s.enumerate_up_to(n as u64);
    let mut w = Word::empty();
    let mut remaining = n;
    loop {
        let fitting = gaps.partition_point(|&g| (g as usize) < remaining);
        if fitting == 0 {
            break;
        }
        let g = gaps[rng.gen_range(0..fitting)] as usize;
        w.push_zeros(g);
        w.push(1);
        remaining -= g + 1;
    }
    w.push_zeros(remaining);
    debug_assert_eq!(w.len(), n);
    w
}
