use alloc::vec::Vec;

use super::{EntropyEstimate, Mode, QuantityId};
use crate::error::{check_cap, invalid, Error, Result};
use crate::measure::{seed_for, MeasureModel, OrbitSampler};
use crate::numeric::{extrapolate, Extrapolation};
use crate::symbolic::{scale_index, PointRep, ShiftSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReturnTime {
    Found(u64),
    /// No return among shifts `1..=horizon`.
    NotFound { horizon: u64 },
}

impl ReturnTime {
    pub fn found(self) -> Option<u64> {
        match self {
            ReturnTime::Found(j) => Some(j),
            ReturnTime::NotFound { .. } => None,
        }
    }
}

fn window_len(n: u64, depth: usize) -> Result<usize> {
    if n == 0 || depth == 0 {
        return Err(invalid("n and depth must be positive"));
    }
    Ok(n as usize + depth - 1)
}

/// `R_n(x, Q)` for the depth-`depth` cylinder partition `Q`: the first
/// `j >= 1` where the length `n + depth - 1` window of `x` recurs.
pub fn return_time(x: &[u8], n: u64, depth: usize) -> Result<ReturnTime> {
    let len = window_len(n, depth)?;
    if x.len() < len {
        return Err(invalid("word shorter than the return window"));
    }
    let head = &x[..len];
    let horizon = (x.len() - len) as u64;
    Ok((1..=x.len() - len)
        .find(|&j| &x[j..j + len] == head)
        .map_or(ReturnTime::NotFound { horizon }, |j| ReturnTime::Found(j as u64)))
}

/// Return time of an eventually periodic point; always found.
pub fn return_time_point(x: &PointRep, n: u64, depth: usize) -> Result<ReturnTime> {
    let len = window_len(n, depth)?;
    let horizon = x.preperiod().len() + x.period().len();
    let word = x.window(0, len + horizon);
    match return_time(&word, n, depth)? {
        ReturnTime::Found(j) => Ok(ReturnTime::Found(j)),
        ReturnTime::NotFound { .. } => {
            // Windows starting inside the period repeat with period p.
            let p = x.period().len() as u64;
            let start = x.preperiod().len() as u64;
            let head = x.window(0, len);
            let j = (1..=start + p).find(|&j| x.window(j as i64, len) == head);
            Ok(j.map_or(ReturnTime::NotFound { horizon: start + p }, ReturnTime::Found))
        }
    }
}

#[derive(Debug, Clone)]
pub struct OwSpec {
    pub n_schedule: Vec<u64>,
    /// Partition depth; `None` takes the depth whose cylinders have diameter below `eps`.
    pub depth: Option<usize>,
    pub samples: u64,
    pub seed: u64,
    /// Largest shift searched per sample.
    pub horizon: u64,
    pub extrapolation: Extrapolation,
}

impl OwSpec {
    pub fn new(n_schedule: Vec<u64>, samples: u64, seed: u64) -> Self {
        OwSpec { n_schedule, depth: None, samples, seed, horizon: 1 << 30, extrapolation: Extrapolation::Affine }
    }
}

/// Return times of `samples` seeded orbits of `mu`; sample `i` uses
/// `seed_for(seed, i)`. Running past the horizon is an error.
pub fn ow_sample_returns(
    mu: &MeasureModel,
    n: u64,
    depth: usize,
    samples: u64,
    seed: u64,
    horizon: u64,
) -> Result<Vec<u64>> {
    let len = window_len(n, depth)?;
    let m = mu.alphabet_size().ok_or(Error::UnsupportedMeasure("sampling needs a Bernoulli or Markov measure"))?;
    let bits = (usize::BITS - (m.max(2) - 1).leading_zeros()) as usize;
    check_cap("return window bits", 128, (len * bits) as u64)?;
    let mask: u128 = if len * bits == 128 { u128::MAX } else { (1u128 << (len * bits)) - 1 };
    (0..samples)
        .map(|i| {
            let mut s = OrbitSampler::new(mu, seed_for(seed, i))?;
            let mut code = 0u128;
            for _ in 0..len {
                code = (code << bits) | s.next_symbol() as u128;
            }
            let head = code;
            for j in 1..=horizon {
                code = ((code << bits) | s.next_symbol() as u128) & mask;
                if code == head {
                    return Ok(j);
                }
            }
            Err(Error::CapExceeded { what: "return-time horizon", cap: horizon, needed: horizon + 1 })
        })
        .collect()
}

/// Mean of `ln R / n`.
pub fn ow_aggregate(returns: &[u64], n: u64) -> f64 {
    if returns.is_empty() {
        return f64::NAN;
    }
    returns.iter().map(|&r| libm::log(r as f64)).sum::<f64>() / (returns.len() as f64 * n as f64)
}

/// Ornstein-Weiss return-time estimate of the entropy at scale `eps`.
pub fn ow_return_entropy(mu: &MeasureModel, sys: &ShiftSystem, eps: f64, spec: &OwSpec) -> Result<EntropyEstimate> {
    mu.check_support(sys)?;
    if spec.n_schedule.is_empty() || spec.samples == 0 {
        return Err(invalid("need a nonempty n schedule and at least one sample"));
    }
    let depth = match spec.depth {
        Some(d) => d,
        None => (scale_index(eps)? as usize).max(1),
    };
    let trace = spec
        .n_schedule
        .iter()
        .map(|&n| {
            let r = ow_sample_returns(mu, n, depth, spec.samples, spec.seed, spec.horizon)?;
            Ok((n, ow_aggregate(&r, n)))
        })
        .collect::<Result<Vec<_>>>()?;
    let v = extrapolate(&trace, spec.extrapolation);
    let mut e = EntropyEstimate::new(QuantityId::OwReturn, eps, trace, v, Mode::MonteCarlo);
    e.samples = Some(spec.samples);
    e.seed = Some(spec.seed);
    e.aux.push(("depth".into(), depth as f64));
    Ok(e)
}
