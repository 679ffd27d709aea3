use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::tree::{tree_weight, Objective, Orders};
use crate::entropy::Region;
use crate::error::{invalid, Error, Result};
use crate::numeric::{extrapolate, Extrapolation};
use crate::symbolic::{LeafSet, ShiftSystem};

pub const THETA_LOW: f64 = 0.01;
pub const THETA_HIGH: f64 = 100.0;

/// Orders, thresholds, and tolerances for critical-value extraction.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CriticalSpec {
    /// Lower orders `N`; each is paired with `N_max = N + window`.
    pub n_schedule: Vec<u64>,
    pub window: u64,
    pub tol: f64,
    pub theta_low: f64,
    pub theta_high: f64,
    pub cap: u64,
    /// Fit of `s_star(N)` across the schedule, reported as `limit`.
    pub extrapolation: Option<Extrapolation>,
}

impl CriticalSpec {
    pub fn new(n_schedule: Vec<u64>) -> Self {
        CriticalSpec { n_schedule, window: 0, tol: 1e-3, theta_low: THETA_LOW, theta_high: THETA_HIGH, cap: 1 << 22, extrapolation: None }
    }

    pub(crate) fn check(&self) -> Result<()> {
        if self.n_schedule.is_empty() || self.n_schedule[0] == 0 || self.n_schedule.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("N schedule must be nonempty, positive, and increasing"));
        }
        if !(self.theta_low > 0.0 && self.theta_low < 1.0 && self.theta_high > 1.0) {
            return Err(invalid("thresholds must satisfy 0 < theta_low < 1 < theta_high"));
        }
        if !(self.tol > 0.0) {
            return Err(invalid("tolerance must be positive"));
        }
        Ok(())
    }
}

/// Critical exponent where a Carathéodory weight jumps from large to small.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CriticalValue {
    pub s_star: f64,
    pub s_lo: f64,
    pub s_hi: f64,
    pub n_schedule: Vec<u64>,
    /// `(N, s_star(N))`.
    pub trace: Vec<(u64, f64)>,
    /// Extrapolation of the trace in `N`, when one was made.
    pub limit: Option<f64>,
    /// False when some weight came from a heuristic (an upper bound).
    pub exact: bool,
    /// Extra labelled numbers (per-delta values, ...).
    pub aux: Vec<(String, f64)>,
    pub notes: Vec<String>,
}

impl CriticalValue {
    /// The extrapolated value if present, else `s_star`.
    pub fn value(&self) -> f64 {
        self.limit.unwrap_or(self.s_star)
    }

    pub fn width(&self) -> f64 {
        self.s_hi - self.s_lo
    }
}

pub(crate) struct Bracket {
    pub s_lo: f64,
    pub s_star: f64,
    pub s_hi: f64,
    pub notes: Vec<String>,
}

fn bisect(mut lo: f64, mut hi: f64, tol: f64, mut above: impl FnMut(f64) -> Result<bool>) -> Result<(f64, f64)> {
    // Invariant: above(lo) holds and above(hi) does not.
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if above(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Locate the jump of a weight `s -> ln W(s)` that is nonincreasing in `s`.
pub(crate) fn locate_jump(
    mut ln_w: impl FnMut(f64) -> Result<f64>,
    s_guess: f64,
    spec: &CriticalSpec,
) -> Result<Bracket> {
    let (ln_lo, ln_hi) = (libm::log(spec.theta_low), libm::log(spec.theta_high));
    let mut notes = Vec::new();
    let w0 = ln_w(0.0)?;
    if w0 == f64::NEG_INFINITY {
        notes.push("empty set: weight vanishes for every s".into());
        return Ok(Bracket { s_lo: 0.0, s_star: 0.0, s_hi: 0.0, notes });
    }
    let mut s_max = s_guess.max(1.0);
    let mut tries = 0;
    while ln_w(s_max)? >= ln_lo {
        s_max *= 2.0;
        tries += 1;
        if tries > 8 {
            return Err(Error::BracketFailure(format!("weight stays above {} up to s = {s_max}", spec.theta_low)));
        }
    }
    let step = spec.tol / 8.0;
    let s_lo = if w0 > ln_hi {
        bisect(0.0, s_max, step, |s| Ok(ln_w(s)? > ln_hi))?.0
    } else {
        notes.push("lower bracket end pinned at s = 0".into());
        0.0
    };
    let s_hi = bisect(s_lo, s_max, step, |s| Ok(ln_w(s)? >= ln_lo))?.1;
    let s_star = if w0 > 0.0 { bisect(s_lo, s_hi, step / 4.0, |s| Ok(ln_w(s)? > 0.0))?.0 } else { 0.0 };
    if s_hi - s_lo > spec.tol {
        notes.push(format!("bracket width {:.3e} exceeds tol {:.1e}", s_hi - s_lo, spec.tol));
    }
    Ok(Bracket { s_lo, s_star, s_hi, notes })
}

fn orders(n: u64, n_max: u64, s: f64) -> Orders {
    Orders { n_lo: n, n_hi: n_max, s }
}

/// `ln M(Z, s, N, eps)` restricted to orders in `[N, N_max]`.
pub fn bowen_weight_ln(sys: &ShiftSystem, z: Region<'_>, s: f64, n: u64, n_max: u64, eps: f64, cap: u64) -> Result<f64> {
    tree_weight(sys, z, eps, orders(n, n_max, s), Objective::Cover, cap)
}

/// Minimal weight `sum e^{-n_i s}` of a cover of `Z` by Bowen balls with
/// orders in `[N, N_max]`.
pub fn bowen_weight(sys: &ShiftSystem, z: Region<'_>, s: f64, n: u64, n_max: u64, eps: f64, cap: u64) -> Result<f64> {
    Ok(libm::exp(bowen_weight_ln(sys, z, s, n, n_max, eps, cap)?))
}

/// `ln P(Z, s, N, eps)` restricted to orders in `[N, N_max]`.
pub fn packing_weight_ln(sys: &ShiftSystem, z: Region<'_>, s: f64, n: u64, n_max: u64, eps: f64, cap: u64) -> Result<f64> {
    tree_weight(sys, z, eps, orders(n, n_max, s), Objective::Pack, cap)
}

/// Maximal weight of a pairwise disjoint family of closed Bowen balls
/// centred in `Z` with orders in `[N, N_max]`.
pub fn packing_weight(sys: &ShiftSystem, z: Region<'_>, s: f64, n: u64, n_max: u64, eps: f64, cap: u64) -> Result<f64> {
    Ok(libm::exp(packing_weight_ln(sys, z, s, n, n_max, eps, cap)?))
}

pub(crate) fn critical_over_schedule(
    spec: &CriticalSpec,
    s_guess: f64,
    mut ln_w: impl FnMut(f64, u64, u64) -> Result<f64>,
) -> Result<CriticalValue> {
    spec.check()?;
    let mut trace = Vec::new();
    let mut last = None;
    for &n in &spec.n_schedule {
        let n_max = n + spec.window;
        let b = locate_jump(|s| ln_w(s, n, n_max), s_guess, spec)?;
        trace.push((n, b.s_star));
        last = Some(b);
    }
    let b = last.unwrap();
    Ok(CriticalValue {
        s_star: b.s_star,
        s_lo: b.s_lo,
        s_hi: b.s_hi,
        n_schedule: spec.n_schedule.clone(),
        limit: spec.extrapolation.filter(|_| trace.len() > 1).map(|e| extrapolate(&trace, e)),
        trace,
        exact: true,
        aux: Vec::new(),
        notes: b.notes,
    })
}

fn guess(sys: &ShiftSystem) -> f64 {
    libm::log(sys.m() as f64) + 1.0
}

/// `h^B_top(Z, eps)`: jump of the Bowen cover weight at the largest `N`.
pub fn bowen_critical(sys: &ShiftSystem, z: Region<'_>, eps: f64, spec: &CriticalSpec) -> Result<CriticalValue> {
    critical_over_schedule(spec, guess(sys), |s, n, n_max| bowen_weight_ln(sys, z, s, n, n_max, eps, spec.cap))
}

/// `h^P_top(Z, eps)` for the undecomposed set.
pub fn packing_critical(sys: &ShiftSystem, z: Region<'_>, eps: f64, spec: &CriticalSpec) -> Result<CriticalValue> {
    critical_over_schedule(spec, guess(sys), |s, n, n_max| packing_weight_ln(sys, z, s, n, n_max, eps, spec.cap))
}

/// `ln` of `inf sum_i P(Z_i, s)` over the given decompositions.
pub fn packing_modified_weight_ln(
    sys: &ShiftSystem,
    decompositions: &[Vec<LeafSet>],
    s: f64,
    n: u64,
    n_max: u64,
    eps: f64,
    cap: u64,
) -> Result<f64> {
    if decompositions.is_empty() {
        return Err(invalid("no decompositions given"));
    }
    let mut best = f64::INFINITY;
    for d in decompositions {
        let mut acc = f64::NEG_INFINITY;
        for piece in d {
            acc = crate::numeric::log_add_exp(acc, packing_weight_ln(sys, Region::Leaves(piece), s, n, n_max, eps, cap)?);
        }
        best = best.min(acc);
    }
    Ok(best)
}

/// Critical value of the modified packing weight over a finite family of
/// decompositions (an upper surrogate for the full infimum).
pub fn packing_modified_critical(
    sys: &ShiftSystem,
    decompositions: &[Vec<LeafSet>],
    eps: f64,
    spec: &CriticalSpec,
) -> Result<CriticalValue> {
    let mut cv = critical_over_schedule(spec, guess(sys), |s, n, n_max| {
        packing_modified_weight_ln(sys, decompositions, s, n, n_max, eps, spec.cap)
    })?;
    cv.notes.push(format!("infimum over {} listed decompositions", decompositions.len()));
    Ok(cv)
}
