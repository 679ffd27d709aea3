//! Counting words whose empirical block statistics stay near a measure's
//! marginals, by dynamic programming over block-count vectors.

use alloc::vec::Vec;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{check_cap, invalid, Result};
use crate::measure::MeasureModel;
use crate::symbolic::{decode_word, ShiftSystem};

/// Largest number of distinct `l`-blocks tracked (`m^l`).
pub const MAX_BLOCKS: usize = 8;
const KEY: usize = MAX_BLOCKS + 2;
type Key = [u16; KEY];

/// Marginal masses of all `m^d` words for `d = 1..=l`, indexed by code.
pub(crate) struct Band {
    m: usize,
    l: usize,
    masses: Vec<Vec<BigRational>>,
    eta: BigRational,
}

impl Band {
    pub(crate) fn new(mu: &MeasureModel, sys: &ShiftSystem, l: usize, eta: f64) -> Result<Self> {
        let m = sys.m();
        if l == 0 {
            return Err(invalid("block depth must be positive"));
        }
        let blocks = m.checked_pow(l as u32).unwrap_or(usize::MAX);
        check_cap("block-count states", MAX_BLOCKS as u64, blocks as u64)?;
        if !(eta >= 0.0) {
            return Err(invalid("eta must be nonnegative"));
        }
        mu.check_support(sys)?;
        let masses = (1..=l)
            .map(|d| (0..m.pow(d as u32) as u64).map(|c| mu.word_mass(&decode_word(c, m, d))).collect())
            .collect();
        Ok(Band { m, l, masses, eta: crate::numeric::decimal_rational(eta) })
    }

    /// Integer count bounds `[ceil(n(mu - eta)), floor(n(mu + eta))]` per depth and code.
    pub(crate) fn bounds(&self, n: u64) -> Vec<Vec<(i64, i64)>> {
        let nn = BigRational::from_integer((n as i64).into());
        self.masses
            .iter()
            .map(|row| {
                row.iter()
                    .map(|q| {
                        let lo = (&nn * (q - &self.eta)).ceil().to_integer().to_i64().unwrap_or(i64::MIN).max(0);
                        let hi = (&nn * (q + &self.eta)).floor().to_integer().to_i64().unwrap_or(i64::MAX);
                        (lo, hi)
                    })
                    .collect()
            })
            .collect()
    }

    /// Whether the `l`-block counts (over `n` windows) are within the band.
    pub(crate) fn within(&self, counts: &[u16], bounds: &[Vec<(i64, i64)>]) -> bool {
        self.slack(counts, bounds, 0)
    }

    /// Whether some completion adding `extra` windows could land in the band.
    fn slack(&self, counts: &[u16], bounds: &[Vec<(i64, i64)>], extra: i64) -> bool {
        for d in 1..=self.l {
            let group = self.m.pow((self.l - d) as u32);
            for (u, &(lo, hi)) in bounds[d - 1].iter().enumerate() {
                let c: i64 = counts[u * group..(u + 1) * group].iter().map(|&x| x as i64).sum();
                if c > hi || c + extra < lo {
                    return false;
                }
            }
        }
        true
    }
}

/// Forward DP over words; keys hold `l`-block counts, the last `l - 1`
/// symbols, and the last symbol.
pub(crate) struct BlockDp<'a> {
    sys: &'a ShiftSystem,
    m: usize,
    l: usize,
    blocks: usize,
    suffix_mod: u16,
    /// Index of the last processed coordinate.
    pub t: usize,
    pub states: Vec<(Key, f64)>,
}

impl<'a> BlockDp<'a> {
    pub(crate) fn new(sys: &'a ShiftSystem, l: usize, first_weights: &[f64]) -> Result<Self> {
        let m = sys.m();
        let blocks = m.pow(l as u32);
        check_cap("block-count states", MAX_BLOCKS as u64, blocks as u64)?;
        let suffix_mod = m.pow(l as u32 - 1) as u16;
        let mut dp = BlockDp { sys, m, l, blocks, suffix_mod, t: 0, states: Vec::new() };
        for (a, &w) in first_weights.iter().enumerate() {
            if w > 0.0 {
                let mut key = [0u16; KEY];
                if l == 1 {
                    key[a] = 1;
                }
                key[blocks] = a as u16 % suffix_mod.max(1);
                key[blocks + 1] = a as u16;
                dp.states.push((key, w));
            }
        }
        Ok(dp)
    }

    fn advance(&self, key: &Key, b: u8, t_new: usize) -> Key {
        let mut k = *key;
        let code = key[self.blocks] as usize * self.m + b as usize;
        if t_new + 1 >= self.l {
            k[code % self.blocks] += 1;
        }
        k[self.blocks] = if self.l == 1 { 0 } else { (code % self.suffix_mod as usize) as u16 };
        k[self.blocks + 1] = b as u16;
        k
    }

    pub(crate) fn step(&mut self, mut keep: impl FnMut(&[u16], usize) -> bool) -> Result<()> {
        let t_new = self.t + 1;
        let wd = (t_new + 2).saturating_sub(self.l);
        check_cap("block-count window", u16::MAX as u64, wd as u64)?;
        let mut next: Vec<(Key, f64)> = Vec::with_capacity(self.states.len() * 2);
        for (key, w) in &self.states {
            let last = key[self.blocks + 1] as u8;
            for b in self.sys.successors(last) {
                let k = self.advance(key, b, t_new);
                if keep(&k[..self.blocks], wd) {
                    next.push((k, *w));
                }
            }
        }
        next.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Key, f64)> = Vec::with_capacity(next.len());
        for (k, w) in next {
            match merged.last_mut() {
                Some(last) if last.0 == k => last.1 += w,
                _ => merged.push((k, w)),
            }
        }
        self.states = merged;
        self.t = t_new;
        Ok(())
    }

    pub(crate) fn counts<'k>(&self, key: &'k Key) -> &'k [u16] {
        &key[..self.blocks]
    }

    pub(crate) fn last(&self, key: &Key) -> u8 {
        key[self.blocks + 1] as u8
    }

    /// Whether appending some admissible word of length `r` after `key`
    /// yields counts within the band for `n` windows.
    pub(crate) fn completes(&self, band: &Band, key: &Key, r: usize, bounds: &[Vec<(i64, i64)>]) -> bool {
        self.completes_from(band, key, self.t, r, bounds)
    }

    fn completes_from(&self, band: &Band, key: &Key, t: usize, r: usize, bounds: &[Vec<(i64, i64)>]) -> bool {
        if r == 0 {
            return band.within(self.counts(key), bounds);
        }
        self.sys
            .successors(self.last(key))
            .any(|b| self.completes_from(band, &self.advance(key, b, t + 1), t + 1, r - 1, bounds))
    }

    /// Whether counts after `wd` windows can still reach some target band.
    pub(crate) fn feasible(band: &Band, counts: &[u16], wd: usize, targets: &[(u64, Vec<Vec<(i64, i64)>>)]) -> bool {
        targets.iter().any(|(n, b)| (*n as usize) >= wd && band.slack(counts, b, *n as i64 - wd as i64))
    }
}
