use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::ToPrimitive;

use crate::entropy::typical::{Band, BlockDp};
use crate::entropy::{EntropyEstimate, Mode, QuantityId};
use crate::error::{check_cap, invalid, Error, Result};
use crate::measure::MeasureModel;
use crate::numeric::{extrapolate, Extrapolation};
use crate::symbolic::{closed_scale_index, encode_word, enumerate_words, LeafSet, ShiftSystem, Sidedness};

fn check_range(len: usize, l: usize, n0: usize) -> Result<()> {
    if l == 0 || n0 == 0 || len + 1 < l + n0 {
        return Err(invalid("need 1 <= n0 <= L - l + 1"));
    }
    Ok(())
}

/// Depth-`L` words whose empirical `l`-block frequencies over the first `n`
/// windows are within `eta` of `mu`'s for every `n` in `[n0, L - l + 1]`.
pub fn generic_leafset(
    mu: &MeasureModel,
    sys: &ShiftSystem,
    len: usize,
    l: usize,
    eta: f64,
    n0: usize,
    cap: u64,
) -> Result<LeafSet> {
    check_range(len, l, n0)?;
    let band = Band::new(mu, sys, l, eta)?;
    let bounds: Vec<_> = (n0..=len - l + 1).map(|n| band.bounds(n as u64)).collect();
    let m = sys.m();
    let mut keep = Vec::new();
    let mut counts = vec![0u16; m.pow(l as u32)];
    for w in enumerate_words(sys, len, cap)? {
        counts.iter_mut().for_each(|c| *c = 0);
        let mut ok = true;
        for n in 1..=len - l + 1 {
            counts[encode_word(&w[n - 1..n - 1 + l], m) as usize] += 1;
            if n >= n0 && !band.within(&counts, &bounds[n - n0]) {
                ok = false;
                break;
            }
        }
        if ok {
            keep.push(w);
        }
    }
    if keep.is_empty() {
        return Err(Error::EmptyApproximation(format!("no depth-{len} word stays within eta = {eta}")));
    }
    LeafSet::new(sys, len, &keep)
}

/// `ln` of the weighted number of depth-`L` generic words, each weighted by
/// `first[a]` for its first symbol `a`; counted by block-count DP.
fn generic_count_weighted(
    mu: &MeasureModel,
    sys: &ShiftSystem,
    len: usize,
    l: usize,
    eta: f64,
    n0: usize,
    first: &[f64],
    cap: u64,
) -> Result<f64> {
    check_range(len, l, n0)?;
    let band = Band::new(mu, sys, l, eta)?;
    let bounds: Vec<_> = (n0..=len - l + 1).map(|n| band.bounds(n as u64)).collect();
    let mut dp = BlockDp::new(sys, l, first)?;
    while dp.t + 1 < len {
        dp.step(|counts, wd| wd < n0 || wd > len - l + 1 || band.within(counts, &bounds[wd - n0]))?;
        check_cap("block-count states", cap, dp.states.len() as u64)?;
    }
    Ok(libm::log(dp.states.iter().map(|s| s.1).sum::<f64>()))
}

/// `ln |generic_leafset(...)|` without materialising the set.
pub fn generic_count_ln(
    mu: &MeasureModel,
    sys: &ShiftSystem,
    len: usize,
    l: usize,
    eta: f64,
    n0: usize,
    cap: u64,
) -> Result<f64> {
    generic_count_weighted(mu, sys, len, l, eta, n0, &vec![1.0; sys.m()], cap)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GenericSpec {
    /// Neighborhoods `(l, eta)`.
    pub cells: Vec<(usize, f64)>,
    /// Leaf depths `L`, increasing.
    pub lengths: Vec<usize>,
    pub n0: usize,
    pub extrapolation: Extrapolation,
    pub cap: u64,
}

/// Packing entropy of the generic-point approximation at scale `eps`.
///
/// Closed balls of order `N = L - k + 1` have forward depth `L`, so at that
/// single order the packing weight of the depth-`L` leaf set is its
/// (left-extension weighted) size times `e^{-N s}` and the jump sits at
/// `ln |Z| / N`. The per-`L` values are extrapolated in `N`; the minimum
/// over the neighborhood grid is reported.
pub fn packing_entropy_generic(
    mu: &MeasureModel,
    sys: &ShiftSystem,
    eps: f64,
    spec: &GenericSpec,
) -> Result<EntropyEstimate> {
    sys.require_exact()?;
    if spec.cells.is_empty() || spec.lengths.is_empty() || spec.lengths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("need a nonempty neighborhood grid and increasing lengths"));
    }
    let k = closed_scale_index(eps) as usize;
    if k == 0 {
        return Ok(EntropyEstimate::new(QuantityId::PackingGeneric, eps, Vec::new(), 0.0, Mode::Exact)
            .with_note("every ball is the whole space"));
    }
    let first: Vec<f64> = match sys.sidedness() {
        Sidedness::TwoSided if k > 1 => {
            sys.left_extension_counts(k - 1).iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).collect()
        }
        _ => vec![1.0; sys.m()],
    };
    let mut best: Option<(f64, Vec<(u64, f64)>)> = None;
    let mut aux = Vec::new();
    let mut notes = Vec::new();
    'cells: for &(l, eta) in &spec.cells {
        let mut trace = Vec::new();
        for &len in &spec.lengths {
            if len < k {
                return Err(invalid(format!("leaf depth {len} is shallower than the ball depth")));
            }
            let n = (len - k + 1) as u64;
            let ln = generic_count_weighted(mu, sys, len, l, eta, spec.n0, &first, spec.cap)?;
            if ln == f64::NEG_INFINITY {
                // Too tight for this measure; the other cells still bound the set.
                notes.push(format!("cell l={l}, eta={eta} is empty at depth {len}; skipped"));
                continue 'cells;
            }
            trace.push((n, ln / n as f64));
        }
        let v = extrapolate(&trace, spec.extrapolation);
        aux.push((format!("l={l},eta={eta}"), v));
        if best.as_ref().map_or(true, |b| v < b.0) {
            best = Some((v, trace));
        }
    }
    let Some((v, trace)) = best else {
        return Err(Error::EmptyApproximation("every neighborhood cell is empty".into()));
    };
    let mut e = EntropyEstimate::new(QuantityId::PackingGeneric, eps, trace, v, Mode::Extrapolated);
    e.neighborhoods = spec.cells.clone();
    e.aux = aux;
    e.notes = notes;
    e.notes.push(format!("generic words constrained for every window count n >= {}", spec.n0));
    Ok(e)
}
