use alloc::vec::Vec;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::MeasureModel;
use crate::error::Result;
use crate::numeric::rational_to_f64;
use crate::symbolic::{enumerate_words, CylinderSet, ShiftSystem, Word};

/// Depth-`l` distribution, words in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalDistribution {
    pub depth: usize,
    pub entries: Vec<(Word, BigRational)>,
}

impl MarginalDistribution {
    pub fn mass(&self, w: &[u8]) -> BigRational {
        self.entries
            .binary_search_by(|e| e.0.as_slice().cmp(w))
            .map(|i| self.entries[i].1.clone())
            .unwrap_or_else(|_| BigRational::zero())
    }

    /// Aggregate to depth `l <= depth` by summing over the last symbols.
    pub fn aggregate(&self, l: usize) -> MarginalDistribution {
        let mut out: Vec<(Word, BigRational)> = Vec::new();
        for (w, q) in &self.entries {
            let key = &w[..l];
            match out.last_mut() {
                Some(last) if last.0 == key => last.1 += q,
                _ => out.push((key.to_vec(), q.clone())),
            }
        }
        MarginalDistribution { depth: l, entries: out }
    }

    pub fn total(&self) -> BigRational {
        self.entries.iter().map(|e| &e.1).sum()
    }
}

/// Exact depth-`l` marginal of `mu` over the admissible words of `sys`.
pub fn marginal(mu: &MeasureModel, l: usize, sys: &ShiftSystem, cap: u64) -> Result<MarginalDistribution> {
    let words = enumerate_words(sys, l, cap)?;
    let entries = words
        .into_iter()
        .map(|w| {
            let c = CylinderSet { base: 0, word: w };
            mu.cylinder_mass(&c, sys).map(|q| (c.word, q))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MarginalDistribution { depth: l, entries })
}

/// `max |mu(C) - nu(C)|` over cylinders of depth `1..=l`, exactly.
pub fn marginal_distance_exact(
    mu: &MeasureModel,
    nu: &MeasureModel,
    l: usize,
    sys: &ShiftSystem,
    cap: u64,
) -> Result<BigRational> {
    let a = marginal(mu, l, sys, cap)?;
    let b = marginal(nu, l, sys, cap)?;
    let mut best = BigRational::zero();
    for depth in 1..=l {
        let (x, y) = (a.aggregate(depth), b.aggregate(depth));
        for ((_, p), (_, q)) in x.entries.iter().zip(&y.entries) {
            let d = (p - q).abs();
            if d > best {
                best = d;
            }
        }
    }
    Ok(best)
}

pub fn marginal_distance(mu: &MeasureModel, nu: &MeasureModel, l: usize, sys: &ShiftSystem, cap: u64) -> Result<f64> {
    marginal_distance_exact(mu, nu, l, sys, cap).map(|d| rational_to_f64(&d))
}
