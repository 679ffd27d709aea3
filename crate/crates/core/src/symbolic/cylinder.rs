use super::{PointRep, ShiftSystem, Word};
use crate::error::Result;

/// `{x : x_{base + i} = word[i] for all i}`; depth 0 is the whole space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CylinderSet {
    pub base: i64,
    pub word: Word,
}

impl CylinderSet {
    pub fn new(base: i64, word: Word, sys: &ShiftSystem) -> Result<Self> {
        sys.check_word(&word)?;
        Ok(CylinderSet { base, word })
    }

    pub fn whole() -> Self {
        CylinderSet { base: 0, word: Word::new() }
    }

    pub fn depth(&self) -> usize {
        self.word.len()
    }

    pub fn contains(&self, x: &PointRep) -> bool {
        self.word.iter().enumerate().all(|(i, &a)| x.coord(self.base + i as i64) == a)
    }

    /// Whether `self ⊆ other`.
    pub fn is_subset_of(&self, other: &CylinderSet) -> bool {
        let (s0, s1) = (self.base, self.base + self.word.len() as i64);
        let (o0, o1) = (other.base, other.base + other.word.len() as i64);
        if other.word.is_empty() {
            return true;
        }
        if o0 < s0 || o1 > s1 {
            return false;
        }
        (o0..o1).all(|c| self.word[(c - s0) as usize] == other.word[(c - o0) as usize])
    }

    /// Whether the two cylinders share no point (ignoring admissibility of the gap).
    pub fn is_disjoint(&self, other: &CylinderSet) -> bool {
        let lo = self.base.max(other.base);
        let hi = (self.base + self.word.len() as i64).min(other.base + other.word.len() as i64);
        (lo..hi).any(|c| self.word[(c - self.base) as usize] != other.word[(c - other.base) as usize])
    }
}
