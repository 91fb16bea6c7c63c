// Copyright 2026 rimc Contributors
// SPDX-License-Identifier: Apache-2.0

//! Words over the free semigroup on `d` generators and the index space
//! for truncated word-indexed families.
//!
//! Letters are stored in *time order*: stored position 1 is the letter
//! applied first. Appending a letter at the end therefore corresponds
//! to one more time step. Textually a word renders as dot-separated
//! letters, e.g. `1.2.2`, with `-` for the empty word.

use std::fmt;

use crate::error::Error;
use crate::Result;

/// Hard cap on the number of enumerated words.
pub const MAX_TOTAL_WORDS: usize = 100_000_000;

/// A word over letters `1..=d`, stored in time order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<u8>,
}

impl Word {
    /// The empty word.
    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    /// Build from letters, checking the range `1..=d`.
    pub fn new(letters: Vec<u8>, d: usize) -> Result<Self> {
        if letters
            .iter()
            .any(|&a| a == 0 || (a as usize) > d)
        {
            return Err(Error::Dimension(format!(
                "word letters must lie in 1..={d}"
            )));
        }
        Ok(Word { letters })
    }

    pub(crate) fn from_letters_unchecked(letters: Vec<u8>) -> Self {
        Word { letters }
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

    /// Concatenation in time order: `self` happens first, then `other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// Extend by one later letter.
    pub fn append(&self, letter: u8) -> Word {
        let mut letters = self.letters.clone();
        letters.push(letter);
        Word { letters }
    }

    pub fn reverse(&self) -> Word {
        let mut letters = self.letters.clone();
        letters.reverse();
        Word { letters }
    }

    /// Does `self` start with `prefix` (in time order)?
    pub fn starts_with(&self, prefix: &Word) -> bool {
        self.letters.starts_with(&prefix.letters)
    }

    /// The suffix `a` with `self = prefix ++ a`, if `prefix` matches.
    pub fn suffix_after(&self, prefix: &Word) -> Option<Word> {
        if self.starts_with(prefix) {
            Some(Word {
                letters: self.letters[prefix.len()..].to_vec(),
            })
        } else {
            None
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "-");
        }
        let parts: Vec<String> = self.letters.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// Bijection between `0..total` and words of length at most `max_len`,
/// ordered by length and then lexicographically on the stored letters.
/// The ordering is prefix-closed: every proper prefix of a word appears
/// strictly earlier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordIndex {
    d: usize,
    max_len: usize,
    /// `offsets[n]` = index of the first word of length `n`.
    offsets: Vec<usize>,
    total: usize,
}

impl WordIndex {
    pub fn new(d: usize, max_len: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Dimension("word alphabet needs d >= 1".into()));
        }
        if d > 255 {
            return Err(Error::Dimension("word letters are stored as u8".into()));
        }
        let mut offsets = Vec::with_capacity(max_len + 2);
        let mut total: u128 = 0;
        let mut pow: u128 = 1;
        for _ in 0..=max_len {
            offsets.push(total as usize);
            total += pow;
            if total > MAX_TOTAL_WORDS as u128 {
                return Err(Error::Guard(format!(
                    "word enumeration exceeds {MAX_TOTAL_WORDS} words (d={d}, max_len={max_len})"
                )));
            }
            pow = pow.saturating_mul(d as u128);
        }
        offsets.push(total as usize);
        Ok(WordIndex {
            d,
            max_len,
            offsets,
            total: total as usize,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn index_to_word(&self, index: usize) -> Word {
        assert!(index < self.total, "word index {index} out of range");
        let mut n = 0;
        while self.offsets[n + 1] <= index {
            n += 1;
        }
        let mut rank = index - self.offsets[n];
        let mut letters = vec![0u8; n];
        for slot in (0..n).rev() {
            letters[slot] = (rank % self.d) as u8 + 1;
            rank /= self.d;
        }
        Word { letters }
    }

    pub fn word_to_index(&self, w: &Word) -> Result<usize> {
        let n = w.len();
        if n > self.max_len {
            return Err(Error::Dimension(format!(
                "word of length {n} exceeds max_len {}",
                self.max_len
            )));
        }
        let mut rank = 0usize;
        for &a in w.letters() {
            if a == 0 || a as usize > self.d {
                return Err(Error::Dimension(format!(
                    "letter {a} outside 1..={}",
                    self.d
                )));
            }
            rank = rank * self.d + (a as usize - 1);
        }
        Ok(self.offsets[n] + rank)
    }

    /// Index of the parent (word minus its last letter) and that letter.
    pub fn parent(&self, index: usize) -> Option<(usize, u8)> {
        let mut n = 0;
        while self.offsets[n + 1] <= index {
            n += 1;
        }
        if n == 0 {
            return None;
        }
        let rank = index - self.offsets[n];
        let letter = (rank % self.d) as u8 + 1;
        Some((self.offsets[n - 1] + rank / self.d, letter))
    }

    pub fn words(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.total).map(|i| self.index_to_word(i))
    }
}

/// All words of length at most `max_len` in index order.
pub fn enumerate(d: usize, max_len: usize) -> Result<Vec<Word>> {
    let index = WordIndex::new(d, max_len)?;
    Ok(index.words().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn enumerate_small() {
        let ws = enumerate(2, 1).unwrap();
        assert_eq!(ws.len(), 3);
        assert_eq!(ws[0], Word::empty());
        assert_eq!(ws[1].letters(), &[1]);
        assert_eq!(ws[2].letters(), &[2]);
    }

    #[test]
    fn enumerate_len_two() {
        let ws = enumerate(2, 2).unwrap();
        assert_eq!(ws.len(), 7);
        let tail: Vec<&[u8]> = ws[3..].iter().map(|w| w.letters()).collect();
        assert_eq!(tail, vec![&[1, 1][..], &[1, 2], &[2, 1], &[2, 2]]);
    }

    #[test]
    fn enumerate_count_d3() {
        assert_eq!(enumerate(3, 4).unwrap().len(), 121);
    }

    #[test]
    fn guard_rejects_huge_enumerations() {
        assert!(matches!(
            WordIndex::new(10, 9),
            Err(Error::Guard(_))
        ));
    }

    #[test]
    fn concat_and_display() {
        let a = Word::new(vec![1], 2).unwrap();
        let b = Word::new(vec![2], 2).unwrap();
        let ab = a.concat(&b);
        assert_eq!(ab.letters(), &[1, 2]);
        assert_eq!(ab.to_string(), "1.2");
        assert_eq!(Word::empty().to_string(), "-");
        assert_eq!(Word::empty().concat(&ab), ab);
        assert_eq!(ab.reverse().reverse(), ab);
    }

    #[test]
    fn word_rejects_out_of_range_letters() {
        assert!(Word::new(vec![0], 2).is_err());
        assert!(Word::new(vec![3], 2).is_err());
    }

    #[test]
    fn prefix_closed_ordering() {
        for d in 1..=4usize {
            let index = WordIndex::new(d, 5).unwrap();
            for i in 0..index.total() {
                if let Some((parent, letter)) = index.parent(i) {
                    assert!(parent < i);
                    let w = index.index_to_word(i);
                    let p = index.index_to_word(parent);
                    assert_eq!(p.append(letter), w);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn index_bijection(d in 1usize..=4, max_len in 0usize..=8, pick in 0usize..1_000_000) {
            let index = WordIndex::new(d, max_len).unwrap();
            let i = pick % index.total();
            let w = index.index_to_word(i);
            prop_assert!(w.len() <= max_len);
            prop_assert_eq!(index.word_to_index(&w).unwrap(), i);
        }
    }
}
