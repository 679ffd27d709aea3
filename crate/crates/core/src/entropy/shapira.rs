use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

use super::{EntropyEstimate, Mode, QuantityId};
use crate::error::{check_cap, invalid, Error, Result};
use crate::measure::{mass_profile, MeasureModel, ProfileMode};
use crate::numeric::{decimal_rational, extrapolate, Extrapolation};
use crate::symbolic::{enumerate_words, scale_index, CylinderSet, ShiftSystem, Sidedness};

/// `N_mu(U^n, t) = min #U' over subfamilies of the join U^n with mass >= t`.
///
/// The join is reduced to its inclusion-maximal members, which are pairwise
/// disjoint cylinders, so greedy selection by mass is optimal.
pub fn shapira_count(
    mu: &MeasureModel,
    sys: &ShiftSystem,
    cover: &[CylinderSet],
    n: usize,
    threshold: &BigRational,
    cap: u64,
) -> Result<BigUint> {
    sys.require_exact()?;
    mu.check_support(sys)?;
    if n == 0 || cover.is_empty() {
        return Err(invalid("need n >= 1 and a nonempty cover"));
    }
    if threshold <= &BigRational::zero() {
        return Ok(BigUint::zero());
    }
    for c in cover {
        sys.check_word(&c.word)?;
    }
    if cover.iter().any(|c| c.word.is_empty()) {
        return Ok(BigUint::from(1u8));
    }
    check_cover(sys, cover, cap)?;
    let total = libm::pow(cover.len() as f64, n as f64);
    check_cap("cover join", cap, if total > 1.8e19 { u64::MAX } else { total as u64 })?;
    // Join elements as (base, word).
    let mut elems: Vec<CylinderSet> = cover.to_vec();
    for j in 1..n as i64 {
        let mut next = Vec::new();
        for e in &elems {
            for c in cover {
                if let Some(merged) = merge(e, &CylinderSet { base: c.base + j, word: c.word.clone() })? {
                    if sys.is_admissible(&merged.word) {
                        next.push(merged);
                    }
                }
            }
        }
        next.sort();
        next.dedup();
        elems = next;
    }
    // Inclusion-maximal members.
    let maximal: Vec<&CylinderSet> = elems
        .iter()
        .filter(|e| !elems.iter().any(|o| o != *e && e.is_subset_of(o)))
        .collect();
    let mut masses: Vec<BigRational> =
        maximal.iter().map(|c| mu.cylinder_mass(c, sys)).collect::<Result<Vec<_>>>()?;
    masses.sort_by(|a, b| b.cmp(a));
    let mut cum = BigRational::zero();
    for (i, q) in masses.iter().enumerate() {
        cum += q;
        if &cum >= threshold {
            return Ok(BigUint::from(i + 1));
        }
    }
    Err(invalid("mass threshold exceeds 1"))
}

fn merge(a: &CylinderSet, b: &CylinderSet) -> Result<Option<CylinderSet>> {
    let mut coords: BTreeMap<i64, u8> = BTreeMap::new();
    for c in [a, b] {
        for (i, &s) in c.word.iter().enumerate() {
            let k = c.base + i as i64;
            if let Some(&old) = coords.get(&k) {
                if old != s {
                    return Ok(None);
                }
            }
            coords.insert(k, s);
        }
    }
    let lo = *coords.keys().next().unwrap();
    let hi = *coords.keys().next_back().unwrap();
    if (hi - lo + 1) as usize != coords.len() {
        return Err(invalid("cover join has gaps; use covers whose shifts overlap"));
    }
    Ok(Some(CylinderSet { base: lo, word: coords.into_values().collect() }))
}

fn check_cover(sys: &ShiftSystem, cover: &[CylinderSet], cap: u64) -> Result<()> {
    let lo = cover.iter().map(|c| c.base).min().unwrap();
    let hi = cover.iter().map(|c| c.base + c.word.len() as i64).max().unwrap();
    let words = enumerate_words(sys, (hi - lo) as usize, cap)?;
    for w in words {
        let covered = cover.iter().any(|c| {
            let off = (c.base - lo) as usize;
            w[off..off + c.word.len()] == c.word[..]
        });
        if !covered {
            return Err(invalid(format!("family does not cover the word {w:?}")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct ShapiraSpec {
    /// Mass level `t` in `N_mu(U^n, t)`; Lemma-chain use passes `1 - delta`.
    pub threshold: f64,
    /// Uniform covers of depth `k(eps) ..= k(eps) + extra_depth` are searched.
    pub extra_depth: usize,
    pub n_schedule: Vec<u64>,
    pub extrapolation: Extrapolation,
    pub cap: u64,
}

/// `inf h^S_mu(U)` over uniform cylinder covers of diameter below `eps`.
pub fn shapira_eps_entropy(mu: &MeasureModel, sys: &ShiftSystem, eps: f64, spec: &ShapiraSpec) -> Result<EntropyEstimate> {
    sys.require_exact()?;
    if !(spec.threshold > 0.0 && spec.threshold < 1.0) {
        return Err(invalid("Shapira mass level must lie in (0, 1)"));
    }
    if spec.n_schedule.is_empty() {
        return Err(invalid("empty n schedule"));
    }
    let k = scale_index(eps)? as usize;
    let t = decimal_rational(spec.threshold);
    let mut best: Option<(f64, usize, Vec<(u64, f64)>, bool)> = None;
    for d in k..=k + spec.extra_depth {
        let block = match (sys.sidedness(), d) {
            (_, 0) => 0,
            (Sidedness::OneSided, d) => d,
            (Sidedness::TwoSided, d) => 2 * d - 1,
        };
        let mut trace = Vec::new();
        let mut exact = true;
        for &n in &spec.n_schedule {
            let len = if block == 0 { 0 } else { block + n as usize - 1 };
            let prof = mass_profile(mu, sys, len, ProfileMode::Auto, spec.cap)?;
            exact &= prof.is_exact();
            let c = prof.min_count(&t, false)?;
            trace.push((n, c.ln / n as f64));
        }
        let value = if block == 0 { 0.0 } else { extrapolate(&trace, spec.extrapolation) };
        if best.as_ref().is_none_or(|b| value < b.0) {
            best = Some((value, d, trace, exact));
        }
    }
    let (value, d, trace, _) = best.ok_or_else(|| Error::EmptyFamily("no cover depth".into()))?;
    let mut e = EntropyEstimate::new(QuantityId::ShapiraEps, eps, trace, value, Mode::Extrapolated);
    e.aux.push(("mass_level".into(), spec.threshold));
    e.notes.push(format!("uniform cylinder covers of depth {k}..={}; minimizer depth {d}", k + spec.extra_depth));
    if spec.n_schedule.len() == 1 {
        e.notes.push("single order; value is the finite-n rate".into());
    }
    Ok(e)
}
