use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{check_cap, invalid, Result};
use crate::symbolic::{
    enumerate_words, LeafSet, PointRep, SequenceMetric, ShiftSystem, Sidedness, Word,
};

/// The set `Z` whose separated sets are counted.
#[derive(Debug, Clone, Copy)]
pub enum Region<'a> {
    Whole,
    Leaves(&'a LeafSet),
    Points(&'a [PointRep]),
}

/// Integer bracket `[lo, hi]` on a maximal separated-set size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountBounds {
    pub lo: BigUint,
    pub hi: BigUint,
}

impl CountBounds {
    pub fn exact(v: BigUint) -> Self {
        CountBounds { lo: v.clone(), hi: v }
    }
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

/// Exact `s_n(Z, eps)` in the first-difference backend: two points are
/// `(n, eps)`-separated iff they differ on the ball window, so the count is
/// the number of distinct window words meeting `Z`.
pub fn separated_count_exact(sys: &ShiftSystem, z: Region<'_>, n: u64, eps: f64) -> Result<BigUint> {
    let w = sys.ball_window(n, eps)?;
    match z {
        Region::Whole => Ok(sys.count_words(w.len)),
        Region::Points(pts) => {
            let mut seen = BTreeSet::new();
            for p in pts {
                p.check(sys)?;
                seen.insert(p.window(w.start, w.len));
            }
            Ok(BigUint::from(seen.len()))
        }
        Region::Leaves(leaves) => {
            if leaves.is_empty() {
                return Ok(BigUint::zero());
            }
            if w.len == 0 {
                return Ok(BigUint::one());
            }
            let left_len = (-w.start) as usize;
            let left = sys.left_extension_counts(left_len);
            let end = w.start + w.len as i64;
            let lz = leaves.depth() as i64;
            if lz == 0 {
                return Ok(sys.count_words(w.len));
            }
            if end <= lz {
                let mut total = BigUint::zero();
                let mut last: Option<Word> = None;
                for word in leaves.words() {
                    let prefix = word[..end as usize].to_vec();
                    if last.as_ref() != Some(&prefix) {
                        total += &left[prefix[0] as usize];
                        last = Some(prefix);
                    }
                }
                Ok(total)
            } else {
                let right = sys.right_extension_counts((end - lz) as usize);
                let mut total = BigUint::zero();
                for word in leaves.words() {
                    total += &left[word[0] as usize] * &right[word[word.len() - 1] as usize];
                }
                Ok(total)
            }
        }
    }
}

/// `s_n(Z, eps)` bounds. Exact in the first-difference backend. Under the
/// weighted-sum metric (whole space only): a greedy separated set of points
/// that agree off `[0, n)` gives the lower bound, and a cylinder spanning
/// set at radius `eps/2` gives the upper bound.
pub fn separated_count(sys: &ShiftSystem, z: Region<'_>, n: u64, eps: f64, cap: u64) -> Result<CountBounds> {
    match sys.metric() {
        SequenceMetric::FirstDifference => separated_count_exact(sys, z, n, eps).map(CountBounds::exact),
        SequenceMetric::WeightedSum { .. } => {
            if !matches!(z, Region::Whole) {
                return Err(invalid("weighted-sum separated counts support the whole space only"));
            }
            let lo = greedy_separated(sys, n as usize, eps, cap)?;
            let max_rho = sys.alphabet().max_rho();
            // Points agreeing on [-a, n-1+a] are within 2^(1-a) max_rho (two-sided).
            let sides = if sys.sidedness() == Sidedness::TwoSided { 2.0 } else { 1.0 };
            let mut a = 0usize;
            while sides * libm::ldexp(1.0, -(a as i32)) * max_rho >= eps / 2.0 {
                a += 1;
            }
            let len = n as usize + a * if sys.sidedness() == Sidedness::TwoSided { 2 } else { 1 };
            Ok(CountBounds { lo: BigUint::from(lo), hi: sys.count_words(len).max(BigUint::from(lo)) })
        }
    }
}

fn greedy_separated(sys: &ShiftSystem, n: usize, eps: f64, cap: u64) -> Result<u64> {
    let words = enumerate_words(sys, n, cap)?;
    check_cap("greedy separated pairs", cap.saturating_mul(64), (words.len() as u64).saturating_mul(words.len() as u64) / 2)?;
    let mut kept: Vec<&Word> = Vec::new();
    for w in &words {
        let separated = kept.iter().all(|k| {
            (0..n as i64).any(|j| {
                inner_distance(sys, w, k, j) > eps
            })
        });
        if separated {
            kept.push(w);
        }
    }
    Ok(kept.len() as u64)
}

/// Lower end of `d(T^j x, T^j y)` for points equal outside `[0, len)`.
fn inner_distance(sys: &ShiftSystem, x: &[u8], y: &[u8], j: i64) -> f64 {
    let alpha = sys.alphabet();
    let two_sided = sys.sidedness() == Sidedness::TwoSided;
    let mut acc = crate::Interval::point(0.0);
    for (i, (&a, &b)) in x.iter().zip(y).enumerate() {
        let off = i as i64 - j;
        if off < 0 && !two_sided {
            continue;
        }
        acc = acc + alpha.rho(a, b) * libm::ldexp(1.0, -(off.unsigned_abs() as i32));
    }
    acc.lo
}
