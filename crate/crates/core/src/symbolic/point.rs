use alloc::vec::Vec;

use super::{ShiftSystem, Sidedness, Word};
use crate::error::{invalid, Error, Result};

/// Eventually periodic sequence `preperiod · period^∞`.
///
/// For two-sided systems the negative coordinates continue the period
/// leftwards: `x_i = period[i mod p]` for `i < 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointRep {
    preperiod: Word,
    period: Word,
}

impl PointRep {
    pub fn new(preperiod: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(invalid("period must be nonempty"));
        }
        Ok(PointRep { preperiod, period })
    }

    pub fn periodic(period: Word) -> Result<Self> {
        PointRep::new(Vec::new(), period)
    }

    /// Fixed point `a^∞`.
    pub fn constant(a: u8) -> Self {
        PointRep { preperiod: Vec::new(), period: alloc::vec![a] }
    }

    pub fn preperiod(&self) -> &[u8] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    pub fn coord(&self, i: i64) -> u8 {
        let p = self.period.len() as i64;
        if i < 0 {
            return self.period[i.rem_euclid(p) as usize];
        }
        let i = i as usize;
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % p as usize]
        }
    }

    /// Coordinates `start .. start + len`.
    pub fn window(&self, start: i64, len: usize) -> Word {
        (0..len as i64).map(|i| self.coord(start + i)).collect()
    }

    pub fn check(&self, sys: &ShiftSystem) -> Result<()> {
        let m = sys.m() as u8;
        if self.preperiod.iter().chain(&self.period).any(|&a| a >= m) {
            return Err(Error::Inadmissible(alloc::format!("symbol out of range in {self:?}")));
        }
        let p = self.period.len() as i64;
        let lo = match sys.sidedness() {
            Sidedness::OneSided => 0,
            Sidedness::TwoSided => -p,
        };
        let hi = self.preperiod.len() as i64 + p;
        for i in lo..hi {
            if !sys.allows(self.coord(i), self.coord(i + 1)) {
                return Err(Error::Inadmissible(alloc::format!("point {self:?} at coordinate {i}")));
            }
        }
        Ok(())
    }
}
