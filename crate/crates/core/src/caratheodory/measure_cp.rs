use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::critical::{critical_over_schedule, packing_weight_ln, CriticalSpec, CriticalValue};
use crate::entropy::{katok_count, Region};
use crate::error::{invalid, Result};
use crate::measure::{mass_profile, MeasureModel, ProfileMode};
use crate::numeric::decimal_rational;
use crate::symbolic::{enumerate_words, CylinderSet, LeafSet, ShiftSystem, Sidedness, Word};

/// Largest cylinder tree searched exhaustively by [`katok_cp_cover`].
pub const EXHAUSTIVE_NODES: u64 = 1 << 14;
const FRONTIER_CAP: usize = 1 << 12;

/// A weight with a flag telling whether it is the exact optimum or the
/// value of a feasible family (an upper bound).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpValue {
    pub ln_weight: f64,
    pub exact: bool,
}

impl CpValue {
    pub fn weight(&self) -> f64 {
        libm::exp(self.ln_weight)
    }
}

fn mass_target(delta: f64) -> Result<BigRational> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid("delta must lie in (0, 1)"));
    }
    Ok(BigRational::one() - decimal_rational(delta))
}

/// Pareto frontier of (mass, weight): masses increasing, weights strictly increasing.
type Frontier = Vec<(BigRational, f64)>;

fn pareto(mut v: Vec<(BigRational, f64)>) -> Frontier {
    v.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.total_cmp(&b.1)));
    let mut out: Frontier = Vec::new();
    let mut best = f64::INFINITY;
    for (m, w) in v {
        if w < best {
            best = w;
            out.push((m, w));
        }
    }
    out.reverse();
    out
}

fn minkowski(a: &Frontier, b: &Frontier) -> Frontier {
    let mut v = Vec::with_capacity(a.len() * b.len());
    for (ma, wa) in a {
        for (mb, wb) in b {
            v.push((ma + mb, wa + wb));
        }
    }
    pareto(v)
}

struct CoverTree<'a> {
    mu: &'a MeasureModel,
    sys: &'a ShiftSystem,
    start: i64,
    /// `order_at[d]`: the order whose ball has depth `d`, if in the window.
    order_at: Vec<Option<u64>>,
    s: f64,
}

impl CoverTree<'_> {
    fn frontier(&self, word: &mut Word) -> Result<Option<Frontier>> {
        let d = word.len();
        let d_max = self.order_at.len() - 1;
        let mut options: Vec<(BigRational, f64)> = vec![(BigRational::zero(), 0.0)];
        if let Some(n) = self.order_at[d] {
            let c = CylinderSet { base: self.start, word: word.clone() };
            options.push((self.mu.cylinder_mass(&c, self.sys)?, libm::exp(-(n as f64) * self.s)));
        }
        if d < d_max {
            let mut acc: Frontier = vec![(BigRational::zero(), 0.0)];
            let succ: Vec<u8> = match word.last() {
                Some(&a) => self.sys.successors(a).collect(),
                None => (0..self.sys.m() as u8).collect(),
            };
            for b in succ {
                word.push(b);
                let f = self.frontier(word)?;
                word.pop();
                match f {
                    Some(f) => acc = minkowski(&acc, &f),
                    None => return Ok(None),
                }
                if acc.len() > FRONTIER_CAP {
                    return Ok(None);
                }
            }
            options.extend(acc);
        }
        let f = pareto(options);
        Ok((f.len() <= FRONTIER_CAP).then_some(f))
    }
}

/// `M^delta(mu, s, N, eps)` with orders in `[N, N_max]`: least weight of a
/// family of Bowen balls whose union has mass `> 1 - delta`.
///
/// Small trees are solved exactly by a (mass, weight) Pareto recursion.
/// Otherwise the best single-order family is returned, which is exact when
/// `N = N_max` and an upper bound otherwise.
pub fn katok_cp_cover(
    mu: &MeasureModel,
    sys: &ShiftSystem,
    s: f64,
    n: u64,
    n_max: u64,
    eps: f64,
    delta: f64,
    cap: u64,
) -> Result<CpValue> {
    let target = mass_target(delta)?;
    if n == 0 || n > n_max {
        return Err(invalid("order window must satisfy 1 <= N <= N_max"));
    }
    mu.check_support(sys)?;
    let top = sys.ball_window(n_max, eps)?;
    if top.len == 0 {
        return Ok(CpValue { ln_weight: -(n_max as f64) * s, exact: true });
    }
    let nodes = sys.count_words(top.len).to_u64().unwrap_or(u64::MAX);
    if n < n_max && nodes.saturating_mul(2) <= EXHAUSTIVE_NODES {
        let mut order_at = vec![None; top.len + 1];
        for o in n..=n_max {
            order_at[sys.ball_window(o, eps)?.len] = Some(o);
        }
        let tree = CoverTree { mu, sys, start: top.start, order_at, s };
        if let Some(f) = tree.frontier(&mut Vec::new())? {
            let w = f.iter().filter(|(m, _)| m > &target).map(|p| p.1).fold(f64::INFINITY, f64::min);
            return Ok(CpValue { ln_weight: libm::log(w), exact: true });
        }
    }
    let mut best = f64::INFINITY;
    for o in n..=n_max {
        let r = katok_count(mu, sys, o, eps, delta, cap)?;
        best = best.min(r.ln - o as f64 * s);
    }
    Ok(CpValue { ln_weight: best, exact: n == n_max })
}

/// `M^delta(mu, eps)` critical value over the `N` schedule.
pub fn katok_cp_critical(
    mu: &MeasureModel,
    sys: &ShiftSystem,
    eps: f64,
    delta: f64,
    spec: &CriticalSpec,
) -> Result<CriticalValue> {
    let mut exact = true;
    let mut cache: BTreeMap<u64, f64> = BTreeMap::new();
    let mut cv = critical_over_schedule(spec, libm::log(sys.m() as f64) + 1.0, |s, n, n_max| {
        if n == n_max {
            // Single order: weight is R^delta_N e^{-N s}.
            let r = match cache.get(&n) {
                Some(&r) => r,
                None => {
                    let r = katok_count(mu, sys, n, eps, delta, spec.cap)?.ln;
                    cache.insert(n, r);
                    r
                }
            };
            return Ok(r - n as f64 * s);
        }
        let v = katok_cp_cover(mu, sys, s, n, n_max, eps, delta, spec.cap)?;
        exact &= v.exact;
        Ok(v.ln_weight)
    })?;
    cv.exact = exact;
    Ok(cv)
}

/// Packing weight of one depth-`L` cylinder per (first, last) symbol class.
fn class_costs(sys: &ShiftSystem, l: usize, s: f64, n: u64, n_max: u64, eps: f64, cap: u64) -> Result<BTreeMap<(u8, u8), f64>> {
    let mut out = BTreeMap::new();
    for a in 0..sys.m() as u8 {
        for b in 0..sys.m() as u8 {
            // Any admissible word of length `l` from `a` to `b`.
            let Some(rep) = path(sys, a, b, l) else { continue };
            let leaf = LeafSet::new(sys, l, &[rep])?;
            out.insert((a, b), packing_weight_ln(sys, Region::Leaves(&leaf), s, n, n_max, eps, cap)?);
        }
    }
    Ok(out)
}

fn path(sys: &ShiftSystem, a: u8, b: u8, len: usize) -> Option<Word> {
    if len == 1 {
        return (a == b).then(|| vec![a]);
    }
    // reach[t][x]: some word of length t + 1 from x ends in b.
    let m = sys.m();
    let mut reach = vec![vec![false; m]; len];
    reach[0][b as usize] = true;
    for t in 1..len {
        for x in 0..m {
            reach[t][x] = sys.successors(x as u8).any(|y| reach[t - 1][y as usize]);
        }
    }
    if !reach[len - 1][a as usize] {
        return None;
    }
    let mut w = vec![a];
    for t in (1..len).rev() {
        let x = *w.last().unwrap();
        w.push(sys.successors(x).find(|&y| reach[t - 1][y as usize]).unwrap());
    }
    Some(w)
}

/// `P^delta(mu, s, eps)` over decompositions into depth-`L` cylinders at
/// base 0, with `L` the forward depth of an order-`N` ball: the infimum of
/// `sum_i P(Z_i, s, N, N_max)` over pieces of total mass `> 1 - delta`.
///
/// When every piece has the same packing weight the optimum is that weight
/// times the least number of pieces (exact); otherwise pieces are chosen
/// greedily by weight per unit mass (an upper bound).
pub fn packing_cp_measure(
    mu: &MeasureModel,
    sys: &ShiftSystem,
    s: f64,
    n: u64,
    n_max: u64,
    eps: f64,
    delta: f64,
    cap: u64,
) -> Result<CpValue> {
    packing_cp_cached(mu, sys, s, n, n_max, eps, delta, cap, &mut BTreeMap::new())
}

/// `cache` maps a leaf depth to the log of the least piece count; that part
/// does not depend on `s`, so bisection reuses it.
#[allow(clippy::too_many_arguments)]
fn packing_cp_cached(
    mu: &MeasureModel,
    sys: &ShiftSystem,
    s: f64,
    n: u64,
    n_max: u64,
    eps: f64,
    delta: f64,
    cap: u64,
    cache: &mut BTreeMap<usize, f64>,
) -> Result<CpValue> {
    let target = mass_target(delta)?;
    if n == 0 || n > n_max {
        return Err(invalid("order window must satisfy 1 <= N <= N_max"));
    }
    mu.check_support(sys)?;
    let w = sys.closed_ball_window(n, eps)?;
    let l = match sys.sidedness() {
        Sidedness::OneSided => w.len,
        Sidedness::TwoSided => (w.start + w.len as i64) as usize,
    };
    if l == 0 {
        return Ok(CpValue { ln_weight: -(n as f64) * s, exact: true });
    }
    let costs = class_costs(sys, l, s, n, n_max, eps, cap)?;
    let first = *costs.values().next().unwrap();
    if costs.values().all(|&c| (c - first).abs() <= 1e-12 * first.abs().max(1.0)) {
        let ln = match cache.get(&l) {
            Some(&v) => v,
            None => {
                let v = mass_profile(mu, sys, l, ProfileMode::Auto, cap)?.min_count(&target, true)?.ln;
                cache.insert(l, v);
                v
            }
        };
        return Ok(CpValue { ln_weight: ln + first, exact: true });
    }
    let mut items: Vec<(f64, BigRational, f64)> = Vec::new();
    for word in enumerate_words(sys, l, cap)? {
        let m = mu.word_mass(&word);
        if m.is_zero() {
            continue;
        }
        let c = costs[&(word[0], *word.last().unwrap())];
        let ratio = c - crate::numeric::ln_rational(&m);
        items.push((ratio, m, c));
    }
    items.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut acc = BigRational::zero();
    let mut total = f64::NEG_INFINITY;
    for (_, m, c) in items {
        acc += m;
        total = crate::numeric::log_add_exp(total, c);
        if acc > target {
            break;
        }
    }
    Ok(CpValue { ln_weight: total, exact: false })
}

/// `P^delta(mu, eps)` critical value over the `N` schedule.
pub fn packing_cp_critical(
    mu: &MeasureModel,
    sys: &ShiftSystem,
    eps: f64,
    delta: f64,
    spec: &CriticalSpec,
) -> Result<CriticalValue> {
    let mut exact = true;
    let mut cache = BTreeMap::new();
    let mut cv = critical_over_schedule(spec, libm::log(sys.m() as f64) + 1.0, |s, n, n_max| {
        let v = packing_cp_cached(mu, sys, s, n, n_max, eps, delta, spec.cap, &mut cache)?;
        exact &= v.exact;
        Ok(v.ln_weight)
    })?;
    cv.exact = exact;
    cv.notes.push("decompositions restricted to unions of cylinders at the order-N depth".into());
    Ok(cv)
}

fn delta_limit(
    deltas: &[f64],
    mut one: impl FnMut(f64) -> Result<CriticalValue>,
) -> Result<CriticalValue> {
    if deltas.is_empty() {
        return Err(invalid("empty delta grid"));
    }
    let mut grid = deltas.to_vec();
    grid.sort_by(|a, b| b.total_cmp(a));
    let mut aux = Vec::new();
    let mut last = None;
    for &d in &grid {
        let cv = one(d)?;
        aux.push((format!("delta={d}"), cv.value()));
        last = Some(cv);
    }
    let mut cv = last.unwrap();
    if aux.windows(2).any(|w| w[1].1 < w[0].1 - 1e-9) {
        cv.notes.push("values not monotone along the delta grid".into());
    }
    cv.aux = aux;
    Ok(cv)
}

/// `M_mu(eps)`: the critical value at the smallest `delta` of the grid.
pub fn katok_cp_lim(mu: &MeasureModel, sys: &ShiftSystem, eps: f64, deltas: &[f64], spec: &CriticalSpec) -> Result<CriticalValue> {
    delta_limit(deltas, |d| katok_cp_critical(mu, sys, eps, d, spec))
}

/// `P_mu(eps)`: the critical value at the smallest `delta` of the grid.
pub fn packing_cp_lim(mu: &MeasureModel, sys: &ShiftSystem, eps: f64, deltas: &[f64], spec: &CriticalSpec) -> Result<CriticalValue> {
    delta_limit(deltas, |d| packing_cp_critical(mu, sys, eps, d, spec))
}

