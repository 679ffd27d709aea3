use alloc::vec::Vec;

use super::{EntropyEstimate, Mode, QuantityId};
use crate::error::{invalid, Result};
use crate::measure::{seed_for, MeasureModel, OrbitSampler};
use crate::numeric::{max_f64, min_f64, sliding_intercepts, Extrapolation};
use crate::symbolic::{PointRep, ShiftSystem};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LocalExponent {
    Finite(f64),
    /// The ball has zero mass.
    ZeroMass,
}

/// `-ln mu(B_n(x, eps)) / n`.
pub fn bk_local_exponent(mu: &MeasureModel, sys: &ShiftSystem, x: &PointRep, n: u64, eps: f64) -> Result<LocalExponent> {
    x.check(sys)?;
    let w = sys.ball_window(n, eps)?;
    let c = crate::symbolic::CylinderSet { base: w.start, word: x.window(w.start, w.len) };
    let c = if mu.is_invariant() { crate::symbolic::CylinderSet { base: 0, word: c.word } } else { c };
    let q = mu.cylinder_mass(&c, sys)?;
    let ln = crate::numeric::ln_rational(&q);
    Ok(if ln == f64::NEG_INFINITY { LocalExponent::ZeroMass } else { LocalExponent::Finite(-ln / n as f64) })
}

#[derive(Debug, Clone)]
pub struct BkSpec {
    pub n_schedule: Vec<u64>,
    /// `(samples, seed)`; when set, local exponents are averaged over
    /// sampled points instead of using the closed form.
    pub monte_carlo: Option<(u64, u64)>,
}

/// Brin–Katok entropy: the mu-integral of the limsup (`upper`) or liminf of
/// the local exponents. In the exact backend the exponent integrates to
/// `H_L / n` with `L` the ball-window length, whose limit is the entropy rate.
pub fn bk_entropy(mu: &MeasureModel, sys: &ShiftSystem, eps: f64, upper: bool, spec: &BkSpec) -> Result<EntropyEstimate> {
    mu.check_support(sys)?;
    if spec.n_schedule.is_empty() {
        return Err(invalid("empty n schedule"));
    }
    let q = if upper { QuantityId::BkUpper } else { QuantityId::BkLower };
    if let Some((samples, seed)) = spec.monte_carlo {
        let trace = bk_monte_carlo(mu, sys, eps, &spec.n_schedule, samples, seed)?;
        let tail: Vec<f64> = trace.iter().map(|t| t.1).collect();
        let value = if upper { max_f64(&tail[tail.len().saturating_sub(4)..]) } else { min_f64(&tail[tail.len().saturating_sub(4)..]) };
        let mut e = EntropyEstimate::new(q, eps, trace, value, Mode::MonteCarlo);
        e.samples = Some(samples);
        e.seed = Some(seed);
        e.notes.push("tail-window max/min of sample means".into());
        return Ok(e);
    }
    let mut trace = Vec::new();
    for &n in &spec.n_schedule {
        let w = sys.ball_window(n, eps)?;
        trace.push((n, mu.block_entropy(w.len)? / n as f64));
    }
    if mu.is_invariant() {
        let h = if sys.ball_window(1, eps)?.len == 0 { 0.0 } else { mu.entropy_rate()? };
        Ok(EntropyEstimate::new(q, eps, trace, h, Mode::Exact).with_note("closed form: entropy rate"))
    } else {
        let fits = sliding_intercepts(&trace, Extrapolation::Affine);
        let v = if upper { max_f64(&fits) } else { min_f64(&fits) };
        Ok(EntropyEstimate::new(q, eps, trace, v, Mode::Extrapolated))
    }
}

/// Sample means of `-ln mu(B_n(x, eps)) / n` over `samples` seeded orbits.
pub fn bk_monte_carlo(
    mu: &MeasureModel,
    sys: &ShiftSystem,
    eps: f64,
    n_schedule: &[u64],
    samples: u64,
    seed: u64,
) -> Result<Vec<(u64, f64)>> {
    let max_len = sys.ball_window(*n_schedule.iter().max().unwrap(), eps)?.len;
    let mut sums = alloc::vec![0.0f64; n_schedule.len()];
    for i in 0..samples {
        let mut s = OrbitSampler::new(mu, seed_for(seed, i))?;
        let word: Vec<u8> = (0..max_len).map(|_| s.next_symbol()).collect();
        for (k, &n) in n_schedule.iter().enumerate() {
            let len = sys.ball_window(n, eps)?.len;
            sums[k] += -mu.ln_word_mass(&word[..len]) / n as f64;
        }
    }
    Ok(n_schedule.iter().zip(sums).map(|(&n, s)| (n, s / samples as f64)).collect())
}
