use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::ToPrimitive;

use super::typical::{Band, BlockDp};
use super::{EntropyEstimate, Mode, QuantityId};
use crate::error::{check_cap, invalid, Result};
use crate::measure::MeasureModel;
use crate::numeric::{extrapolate, Extrapolation};
use crate::symbolic::{ShiftSystem, Sidedness};

/// `ln s_n(eps, X_{n,F})` for each `n` in an increasing schedule, where
/// `X_{n,F}` holds the points whose empirical `l`-block frequencies over
/// the first `n` windows are within `eta` of `mu`'s.
///
/// Balls are cylinders, so the separated count is the number of distinct
/// ball-window words that meet `X_{n,F}`.
pub fn ps_counts(
    mu: &MeasureModel,
    sys: &ShiftSystem,
    eps: f64,
    l: usize,
    eta: f64,
    n_schedule: &[u64],
    cap: u64,
) -> Result<Vec<f64>> {
    sys.require_exact()?;
    if n_schedule.is_empty() || n_schedule[0] == 0 || n_schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("n schedule must be nonempty, positive, and increasing"));
    }
    let band = Band::new(mu, sys, l, eta)?;
    let k = crate::symbolic::scale_index(eps)? as usize;
    let targets: Vec<(u64, Vec<Vec<(i64, i64)>>)> = n_schedule.iter().map(|&n| (n, band.bounds(n))).collect();
    // Evaluation time (last coordinate index) for each target.
    let time = |n: u64| -> usize {
        let n = n as usize;
        if k == 0 || k >= l {
            n + l - 2
        } else {
            n + k - 2
        }
    };
    let t_max = time(*n_schedule.last().unwrap());
    check_cap("word length", cap, t_max as u64 + 1)?;

    let m = sys.m();
    let first: Vec<f64> = if k >= 2 && sys.sidedness() == Sidedness::TwoSided {
        sys.left_extension_counts(k - 1).iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).collect()
    } else {
        vec![1.0; m]
    };
    let right: Vec<f64> = if k > l {
        sys.right_extension_counts(k - l).iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).collect()
    } else {
        vec![1.0; m]
    };

    let mut dp = BlockDp::new(sys, l, &first)?;
    let mut out = Vec::with_capacity(targets.len());
    let mut next = 0;
    loop {
        while next < targets.len() && time(targets[next].0) == dp.t {
            let (_, bounds) = &targets[next];
            let total: f64 = if k == 0 {
                let any = dp.states.iter().any(|(key, _)| band.within(dp.counts(key), bounds));
                if any { 1.0 } else { 0.0 }
            } else if k >= l {
                dp.states
                    .iter()
                    .filter(|(key, _)| band.within(dp.counts(key), bounds))
                    .map(|(key, w)| w * right[dp.last(key) as usize])
                    .sum()
            } else {
                dp.states.iter().filter(|(key, _)| dp.completes(&band, key, l - k, bounds)).map(|(_, w)| *w).sum()
            };
            out.push(libm::log(total));
            next += 1;
        }
        if next == targets.len() {
            break;
        }
        let live = &targets[next..];
        dp.step(|counts, wd| BlockDp::feasible(&band, counts, wd, live))?;
        check_cap("block-count states", cap, dp.states.len() as u64)?;
    }
    Ok(out)
}

/// Single-`n` version of [`ps_counts`].
pub fn ps_count(mu: &MeasureModel, sys: &ShiftSystem, eps: f64, l: usize, eta: f64, n: u64, cap: u64) -> Result<f64> {
    Ok(ps_counts(mu, sys, eps, l, eta, &[n], cap)?[0])
}

#[derive(Debug, Clone)]
pub struct PsSpec {
    /// Neighborhoods `(l, eta)`.
    pub grid: Vec<(usize, f64)>,
    pub n_schedule: Vec<u64>,
    pub extrapolation: Extrapolation,
    pub cap: u64,
}

/// Minimum over the neighborhood grid of the extrapolated growth rate.
pub fn ps_entropy(mu: &MeasureModel, sys: &ShiftSystem, eps: f64, spec: &PsSpec) -> Result<EntropyEstimate> {
    if spec.grid.is_empty() {
        return Err(invalid("empty neighborhood grid"));
    }
    let mut best: Option<(f64, Vec<(u64, f64)>)> = None;
    let mut aux = Vec::new();
    for &(l, eta) in &spec.grid {
        let lns = ps_counts(mu, sys, eps, l, eta, &spec.n_schedule, spec.cap)?;
        let trace: Vec<(u64, f64)> = spec.n_schedule.iter().zip(&lns).map(|(&n, &v)| (n, v / n as f64)).collect();
        let v = extrapolate(&trace, spec.extrapolation);
        aux.push((format!("l={l},eta={eta}"), v));
        if best.as_ref().map_or(true, |b| v < b.0) {
            best = Some((v, trace));
        }
    }
    let (v, trace) = best.unwrap();
    let mut e = EntropyEstimate::new(QuantityId::Ps, eps, trace, v, Mode::Extrapolated);
    e.neighborhoods = spec.grid.clone();
    e.aux = aux;
    Ok(e)
}
