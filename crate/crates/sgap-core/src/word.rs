//! Finite words over the alphabet `{0, 1}` and their run-length form.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

/// A finite word over `{0, 1}`. Letters are stored as the bytes 0 and 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordError {
    /// A letter other than 0 or 1.
    BadLetter { index: usize },
}

impl fmt::Display for WordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordError::BadLetter { index } => write!(f, "letter at {index} is not 0 or 1"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for WordError {}

impl Word {
    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn from_letters(letters: Vec<u8>) -> Result<Self, WordError> {
        for (index, &l) in letters.iter().enumerate() {
            if l > 1 {
                return Err(WordError::BadLetter { index });
            }
        }
        Ok(Word { letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn count_ones(&self) -> usize {
        self.letters.iter().filter(|&&l| l == 1).count()
    }

    pub fn count_zeros(&self) -> usize {
        self.len() - self.count_ones()
    }

    /// Contiguous subword `[start, end)`.
    pub fn subword(&self, start: usize, end: usize) -> Word {
        Word { letters: self.letters[start..end].to_vec() }
    }

    pub(crate) fn push(&mut self, letter: u8) {
        debug_assert!(letter <= 1);
        self.letters.push(letter);
    }

    pub(crate) fn push_zeros(&mut self, count: usize) {
        for _ in 0..count {
            self.letters.push(0);
        }
    }

    pub(crate) fn truncate(&mut self, len: usize) {
        self.letters.truncate(len);
    }

    /// Length of the final 0-run (the whole word if it contains no 1).
    pub fn trailing_zeros(&self) -> usize {
        self.letters.iter().rev().take_while(|&&l| l == 0).count()
    }

    /// Length of the initial 0-run (the whole word if it contains no 1).
    pub fn leading_zeros(&self) -> usize {
        self.letters.iter().take_while(|&&l| l == 0).count()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.letters {
            write!(f, "{}", l)?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, WordError> {
        let mut letters = Vec::with_capacity(s.len());
        for (index, ch) in s.chars().enumerate() {
            match ch {
                '0' => letters.push(0),
                '1' => letters.push(1),
                _ => return Err(WordError::BadLetter { index }),
            }
        }
        Ok(Word { letters })
    }
}

/// Run-length decomposition of a word: `0^leading (1 0^{g_1} 1 0^{g_2} … 1) 0^trailing`.
///
/// For a word with no 1s the convention is `leading = len`, `trailing = 0`.
/// `internal_gaps` holds the 0-run lengths strictly between consecutive 1s,
/// so `internal_gaps.len() == ones - 1` whenever `ones ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunProfile {
    pub leading: usize,
    pub internal_gaps: Vec<usize>,
    pub trailing: usize,
    pub ones: usize,
}

impl RunProfile {
    /// Decompose a word. Reconstructing with [`RunProfile::to_word`] is the
    /// identity.
    pub fn of(word: &Word) -> RunProfile {
        let letters = word.letters();
        let one_positions: Vec<usize> =
            letters.iter().enumerate().filter(|(_, &l)| l == 1).map(|(i, _)| i).collect();
        if one_positions.is_empty() {
            return RunProfile {
                leading: letters.len(),
                internal_gaps: Vec::new(),
                trailing: 0,
                ones: 0,
            };
        }
        let leading = one_positions[0];
        let trailing = letters.len() - 1 - one_positions[one_positions.len() - 1];
        let internal_gaps = one_positions.windows(2).map(|w| w[1] - w[0] - 1).collect();
        RunProfile { leading, internal_gaps, trailing, ones: one_positions.len() }
    }

    pub fn to_word(&self) -> Word {
        debug_assert!(
            (self.ones == 0 && self.internal_gaps.is_empty() && self.trailing == 0)
                || (self.ones >= 1 && self.internal_gaps.len() == self.ones - 1)
        );
        let mut w = Word::empty();
        w.push_zeros(self.leading);
        if self.ones > 0 {
            w.push(1);
            for &g in &self.internal_gaps {
                w.push_zeros(g);
                w.push(1);
            }
            w.push_zeros(self.trailing);
        }
        w
    }

    pub fn len(&self) -> usize {
        self.leading + self.trailing + self.internal_gaps.iter().sum::<usize>() + self.ones
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
