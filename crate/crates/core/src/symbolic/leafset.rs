use alloc::vec::Vec;
use num_traits::ToPrimitive;

use super::{decode_word, encode_word, enumerate_words, ShiftSystem, Word};
use crate::error::{check_cap, invalid, Result};

/// A union of depth-`L` cylinders at base 0, stored as sorted base-`m` codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafSet {
    m: usize,
    depth: usize,
    codes: Vec<u64>,
}

fn fits(m: usize, depth: usize) -> bool {
    libm::pow(m as f64, depth as f64) < 1.8e19
}

impl LeafSet {
    pub fn new(sys: &ShiftSystem, depth: usize, words: &[Word]) -> Result<Self> {
        let m = sys.m();
        if !fits(m, depth) {
            return Err(invalid("leaf depth too large for packed codes"));
        }
        let mut codes = Vec::with_capacity(words.len());
        for w in words {
            if w.len() != depth {
                return Err(invalid("leaf words must share the leaf depth"));
            }
            sys.check_word(w)?;
            codes.push(encode_word(w, m));
        }
        codes.sort_unstable();
        codes.dedup();
        Ok(LeafSet { m, depth, codes })
    }

    /// All admissible depth-`L` words.
    pub fn full(sys: &ShiftSystem, depth: usize, cap: u64) -> Result<Self> {
        let n = sys.count_words(depth).to_u64().unwrap_or(u64::MAX);
        check_cap("leaf set", cap, n)?;
        let words = enumerate_words(sys, depth, cap)?;
        LeafSet::new(sys, depth, &words)
    }

    pub fn empty(sys: &ShiftSystem, depth: usize) -> Self {
        LeafSet { m: sys.m(), depth, codes: Vec::new() }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    pub fn word(&self, i: usize) -> Word {
        decode_word(self.codes[i], self.m, self.depth)
    }

    pub fn words(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.len()).map(|i| self.word(i))
    }

    pub fn contains(&self, w: &[u8]) -> bool {
        w.len() == self.depth && self.codes.binary_search(&encode_word(w, self.m)).is_ok()
    }

    pub fn is_subset_of(&self, other: &LeafSet) -> bool {
        self.depth == other.depth && self.codes.iter().all(|c| other.codes.binary_search(c).is_ok())
    }

    pub fn union(&self, other: &LeafSet) -> Result<LeafSet> {
        if self.depth != other.depth || self.m != other.m {
            return Err(invalid("union needs leaf sets of equal depth"));
        }
        let mut codes = self.codes.clone();
        codes.extend_from_slice(&other.codes);
        codes.sort_unstable();
        codes.dedup();
        Ok(LeafSet { m: self.m, depth: self.depth, codes })
    }
}
