use alloc::format;
use alloc::vec::Vec;

use super::{EntropyEstimate, Mode, QuantityId};
use crate::error::{invalid, Error, Result};
use crate::measure::MeasureModel;
use crate::numeric::{extrapolate, Extrapolation};
use crate::symbolic::{scale_index, ShiftSystem, Sidedness};

/// Length of the coordinate block generating the depth-`d` cylinder partition.
fn block_len(sys: &ShiftSystem, d: usize) -> usize {
    match (sys.sidedness(), d) {
        (_, 0) => 0,
        (Sidedness::OneSided, d) => d,
        (Sidedness::TwoSided, d) => 2 * d - 1,
    }
}

/// `inf h_mu(T, P)` over cylinder partitions of depth `k(eps) ..= max_depth`
/// (two-sided: symmetric windows), each of diameter below `eps`.
pub fn ks_eps_entropy(
    mu: &MeasureModel,
    sys: &ShiftSystem,
    eps: f64,
    max_depth: usize,
    n_schedule: &[u64],
) -> Result<EntropyEstimate> {
    sys.require_exact()?;
    mu.check_support(sys)?;
    if n_schedule.is_empty() {
        return Err(invalid("empty n schedule"));
    }
    let k = scale_index(eps)? as usize;
    if k > max_depth {
        return Err(Error::EmptyFamily(format!("no cylinder partition of depth <= {max_depth} has diameter < {eps}")));
    }
    let mut best: Option<(f64, usize, Vec<(u64, f64)>)> = None;
    for d in k..=max_depth {
        let b = block_len(sys, d);
        let mut trace = Vec::new();
        for &n in n_schedule {
            let len = if b == 0 { 0 } else { b + n as usize - 1 };
            if let MeasureModel::Empirical { word, n: nw } = mu {
                if len > 0 && nw + len - 1 > word.len() {
                    break;
                }
            }
            trace.push((n, mu.block_entropy(len)? / n as f64));
        }
        if trace.is_empty() {
            continue;
        }
        let value = if b == 0 {
            0.0
        } else if mu.is_invariant() {
            mu.entropy_rate()?
        } else {
            extrapolate(&trace, Extrapolation::Affine)
        };
        if best.as_ref().is_none_or(|bst| value < bst.0) {
            best = Some((value, d, trace));
        }
    }
    let (value, d, trace) = best.ok_or_else(|| Error::EmptyFamily("empirical orbit too short for every partition".into()))?;
    let mode = if mu.is_invariant() || d == 0 { Mode::Exact } else { Mode::Extrapolated };
    let mut e = EntropyEstimate::new(QuantityId::KsEps, eps, trace, value, mode);
    e.notes.push(format!("cylinder partitions of depth {k}..={max_depth}; minimizer depth {d}"));
    Ok(e)
}
