use alloc::format;
use alloc::vec::Vec;
use num_rational::BigRational;
use num_traits::One;

use super::{EntropyEstimate, Mode, QuantityId};
use crate::error::{invalid, Result};
use crate::measure::{mass_profile, CountValue, MeasureModel, ProfileMode};
use crate::numeric::{decimal_rational, max_f64, min_f64, sliding_intercepts, Extrapolation};
use crate::symbolic::ShiftSystem;

fn one_minus(delta: f64) -> Result<BigRational> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid("delta must lie in (0, 1)"));
    }
    Ok(BigRational::one() - decimal_rational(delta))
}

/// `R^delta_n(eps)`: fewest Bowen balls whose union has mass `> 1 - delta`.
/// Balls are cylinders of one depth, so greedy selection by mass is optimal.
pub fn katok_count(mu: &MeasureModel, sys: &ShiftSystem, n: u64, eps: f64, delta: f64, cap: u64) -> Result<CountValue> {
    let target = one_minus(delta)?;
    let w = sys.ball_window(n, eps)?;
    mass_profile(mu, sys, w.len, ProfileMode::Auto, cap)?.min_count(&target, true)
}

#[derive(Debug, Clone)]
pub struct KatokSpec {
    pub n_schedule: Vec<u64>,
    pub extrapolation: Extrapolation,
    pub cap: u64,
}

fn katok_trace(mu: &MeasureModel, sys: &ShiftSystem, eps: f64, delta: f64, spec: &KatokSpec) -> Result<Vec<(u64, f64)>> {
    if spec.n_schedule.is_empty() {
        return Err(invalid("empty n schedule"));
    }
    spec.n_schedule
        .iter()
        .map(|&n| katok_count(mu, sys, n, eps, delta, spec.cap).map(|c| (n, c.ln.max(0.0) / n as f64)))
        .collect()
}

/// Upper (limsup) or lower (liminf) Katok entropy at fixed `delta`.
pub fn katok_entropy(
    mu: &MeasureModel,
    sys: &ShiftSystem,
    eps: f64,
    delta: f64,
    upper: bool,
    spec: &KatokSpec,
) -> Result<EntropyEstimate> {
    let trace = katok_trace(mu, sys, eps, delta, spec)?;
    let fits = sliding_intercepts(&trace, spec.extrapolation);
    let v = if upper { max_f64(&fits) } else { min_f64(&fits) };
    let q = if upper { QuantityId::KatokUpper } else { QuantityId::KatokLower };
    Ok(EntropyEstimate::new(q, eps, trace, v, Mode::Extrapolated).with_delta(delta))
}

/// `delta -> 0` limit of the Katok entropy over a grid; the value at the
/// smallest `delta` is reported and the per-`delta` values go in `aux`.
pub fn katok_entropy_lim(
    mu: &MeasureModel,
    sys: &ShiftSystem,
    eps: f64,
    deltas: &[f64],
    upper: bool,
    spec: &KatokSpec,
) -> Result<EntropyEstimate> {
    if deltas.is_empty() {
        return Err(invalid("empty delta grid"));
    }
    let mut grid = deltas.to_vec();
    grid.sort_by(|a, b| b.total_cmp(a));
    let mut last = None;
    let mut aux = Vec::new();
    for &d in &grid {
        let e = katok_entropy(mu, sys, eps, d, upper, spec)?;
        aux.push((format!("delta={d}"), e.value));
        last = Some(e);
    }
    let e = last.unwrap();
    let q = if upper { QuantityId::KatokUpperLim } else { QuantityId::KatokLowerLim };
    let mut out = EntropyEstimate::new(q, eps, e.trace, e.value, Mode::Extrapolated).with_delta(*grid.last().unwrap());
    if aux.windows(2).any(|w| w[1].1 < w[0].1 - 1e-9) {
        out.notes.push("values not monotone along the delta grid".into());
    }
    out.aux = aux;
    Ok(out)
}
