//! Finite-alphabet grids in `[0, 1]` under the two-sided weighted-sum metric
//! `d(x, y) = sum_t 2^-|t| |x_t - y_t|`, used to bracket the continuum shift.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{check_cap, invalid, Result};
use crate::numeric::rational_from_f64;
use crate::symbolic::{decode_word, Admissibility, Alphabet, SequenceMetric, ShiftSystem, Sidedness, SymbolMetric};

/// Full two-sided shift on `m` equally spaced values with the weighted-sum metric.
pub fn grid_system(m: usize, window: u32) -> Result<ShiftSystem> {
    ShiftSystem::new(
        Alphabet::grid(m, SymbolMetric::Euclidean)?,
        Admissibility::Full,
        Sidedness::TwoSided,
        SequenceMetric::WeightedSum { window },
    )
}

/// `floor(r * 2^n * (m - 1))`, exactly.
pub fn scaled_floor(r: f64, n: usize, m: usize) -> Result<u64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(invalid("radius must be positive and finite"));
    }
    let scaled = rational_from_f64(r) * BigInt::from(((m - 1) as u64) << n);
    scaled.floor().to_integer().to_u64().ok_or_else(|| invalid("radius too large"))
}

/// `2^n (m - 1)` times the part of `d(T^s x, T^s y)` read inside the words.
fn inner_scaled(u: &[u8], v: &[u8], s: usize) -> u64 {
    let n = u.len();
    (0..n).map(|t| (u[t].abs_diff(v[t]) as u64) << (n - t.abs_diff(s))).sum()
}

/// Words of length `n` whose inner distance exceeds `r` at some shift
/// `s < n`. Such words stay `(n, r)`-separated under every completion.
pub fn robustly_separated(u: &[u8], v: &[u8], threshold: u64) -> bool {
    (0..u.len()).any(|s| inner_scaled(u, v, s) > threshold)
}

/// Size of a greedy `(n, r)`-separated set of length-`n` words on the
/// `m`-point grid, built in lexicographic order with inner distances.
///
/// Concatenating `k` blocks of such a set gives an `(kn, r)`-separated set,
/// so `ln(size) / n` bounds the entropy at radius `r` from below.
pub fn greedy_separated(m: usize, n: usize, r: f64, cap: u64) -> Result<usize> {
    Ok(greedy_separated_set(m, n, r, cap)?.len())
}

/// The words kept by [`greedy_separated`].
pub fn greedy_separated_set(m: usize, n: usize, r: f64, cap: u64) -> Result<Vec<Vec<u8>>> {
    if m < 2 || n == 0 {
        return Err(invalid("need m >= 2 and n >= 1"));
    }
    if n > 62 {
        return Err(invalid("word length too large"));
    }
    let total = (m as u128).checked_pow(n as u32).map_or(u64::MAX, |t| t.min(u64::MAX as u128) as u64);
    check_cap("grid words", cap, total)?;
    let thr = scaled_floor(r, n, m)?;
    let mut kept: Vec<Vec<u8>> = Vec::new();
    for code in 0..total {
        let w = decode_word(code, m, n);
        if kept.iter().all(|k| robustly_separated(k, &w, thr)) {
            kept.push(w);
        }
    }
    Ok(kept)
}

/// Largest `n <= n_max` with `m^n <= cap`.
pub fn feasible_order(m: usize, n_max: usize, cap: u64) -> usize {
    let mut n = 0;
    let mut total = 1u128;
    while n < n_max {
        total *= m as u128;
        if total > cap as u128 {
            break;
        }
        n += 1;
    }
    n
}

/// `ln ceil(m / b)` with `b` the largest cell size (consecutive grid values)
/// whose weighted diameter `3 (b - 1) h` stays below `r`. Words with all
/// coordinates in one cell sequence are within `r` of each other, so this
/// bounds the grid entropy at radius `r` from above.
pub fn cell_upper_bound(m: usize, r: f64) -> Result<f64> {
    if m < 2 {
        return Err(invalid("need m >= 2"));
    }
    let h = 1.0 / (m - 1) as f64;
    let mut b = 1usize;
    while b < m && 3.0 * b as f64 * h < r {
        b += 1;
    }
    Ok(libm::log(m.div_ceil(b) as f64))
}

/// Binned transfer DP for `mu(B_n(x, eps))` under the uniform measure on the
/// grid, with `x` given on coordinates `-pre .. n + post`.
///
/// Writing `a_t = |x_t - y_t|`, the ball condition at shift `i` is
/// `L_i + a_i + R_i < eps` with `L_i = sum_{t<i} 2^(t-i) a_t` and
/// `R_i = sum_{t>i} 2^(i-t) a_t`. Scanning left to right carries `L` and the
/// budget `B_i` still available to `R_i`:
/// `B_i = min(2 B_{i-1} - a_i, eps - L_i - a_i)` inside the window and
/// `B_t = 2 B_{t-1} - a_t` after it, where `B > 1 >= R` settles membership.
///
/// `L` and `B` live on a grid of step `eps / bins`. The pessimistic run
/// rounds `L` up and `B` down and starts from `L = 1` before the first read
/// coordinate; the optimistic run does the opposite. Unsettled mass after
/// `post` steps counts as failure and success respectively. The transition
/// is monotone in both variables, so the two runs bracket the true mass.
pub struct BallMassDp {
    m: usize,
    h: f64,
    eps: f64,
    g: f64,
    bins: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassBracket {
    pub lo: f64,
    pub hi: f64,
}

impl BallMassDp {
    pub fn new(m: usize, eps: f64, bins: usize) -> Result<Self> {
        if m < 2 || bins < 4 {
            return Err(invalid("need m >= 2 and at least 4 bins"));
        }
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(invalid("radius must be positive and finite"));
        }
        Ok(BallMassDp { m, h: 1.0 / (m - 1) as f64, eps, g: eps / bins as f64, bins })
    }

    /// Mass brackets for every window length in `orders` (increasing),
    /// with `x` read on `-pre .. max(orders) + post`.
    pub fn brackets(&self, x: &[u8], pre: usize, orders: &[usize], post: usize) -> Result<Vec<MassBracket>> {
        let n_max = *orders.last().ok_or_else(|| invalid("empty order list"))?;
        if orders.windows(2).any(|w| w[0] >= w[1]) || orders[0] == 0 {
            return Err(invalid("orders must be positive and increasing"));
        }
        if x.len() != pre + n_max + post {
            return Err(invalid("sample word has the wrong length"));
        }
        let lo = self.run(x, pre, orders, post, false);
        let hi = self.run(x, pre, orders, post, true);
        Ok(lo.into_iter().zip(hi).map(|(lo, hi)| MassBracket { lo, hi }).collect())
    }

    fn bin(&self, v: f64, up: bool) -> usize {
        let q = v / self.g;
        (if up { libm::ceil(q) } else { libm::floor(q) }).max(0.0) as usize
    }

    fn run(&self, x: &[u8], pre: usize, orders: &[usize], post: usize, optimistic: bool) -> Vec<f64> {
        let m = self.m;
        let p = 1.0 / m as f64;
        let a = |t: usize, j: usize| (x[t] as usize).abs_diff(j) as f64 * self.h;
        // L rounds up (pessimistic) or down; B the other way.
        let l_up = !optimistic;
        let b_up = optimistic;

        let l_bins = self.bin(1.0, true) + 2;
        let mut lmass = vec![0.0f64; l_bins];
        lmass[if optimistic { 0 } else { self.bin(1.0, true) }] = 1.0;
        for t in 0..pre {
            let mut next = vec![0.0f64; l_bins];
            for (l, &q) in lmass.iter().enumerate() {
                if q == 0.0 {
                    continue;
                }
                for j in 0..m {
                    let nl = self.bin((l as f64 * self.g + a(t, j)) / 2.0, l_up).min(l_bins - 1);
                    next[nl] += q * p;
                }
            }
            lmass = next;
        }

        // Window: states (L, B) with L < eps and 0 < B <= eps.
        let k = self.bins + 1;
        let mut state = vec![0.0f64; k * k];
        let mut out = Vec::with_capacity(orders.len());
        let mut oi = 0;
        for i in 0..orders[orders.len() - 1] {
            let t = pre + i;
            let mut next = vec![0.0f64; k * k];
            let step = |l_val: f64, b_prev: Option<f64>, q: f64, next: &mut Vec<f64>| {
                for j in 0..m {
                    let at = a(t, j);
                    let mut b = self.eps - l_val - at;
                    if let Some(bp) = b_prev {
                        b = b.min(2.0 * bp - at);
                    }
                    let nb = self.bin(b, b_up);
                    if b <= 0.0 || nb == 0 {
                        continue;
                    }
                    let nl = self.bin((l_val + at) / 2.0, l_up);
                    if nl >= k {
                        continue;
                    }
                    next[nl * k + nb.min(k - 1)] += q * p;
                }
            };
            if i == 0 {
                for (l, &q) in lmass.iter().enumerate() {
                    if q > 0.0 && l < k {
                        step(l as f64 * self.g, None, q, &mut next);
                    }
                }
            } else {
                for (s, &q) in state.iter().enumerate() {
                    if q > 0.0 {
                        step((s / k) as f64 * self.g, Some((s % k) as f64 * self.g), q, &mut next);
                    }
                }
            }
            state = next;
            if i + 1 == orders[oi] {
                out.push(self.settle(x, pre + i + 1, &state, post, optimistic));
                oi += 1;
            }
        }
        out
    }

    /// Run the budget forward after the window ends at coordinate `start`.
    fn settle(&self, x: &[u8], start: usize, state: &[f64], post: usize, optimistic: bool) -> f64 {
        let m = self.m;
        let p = 1.0 / m as f64;
        let k = self.bins + 1;
        let top = (self.bin(1.0, true) + 1).max(k);
        let mut bmass = vec![0.0f64; top + 1];
        for (s, &q) in state.iter().enumerate() {
            bmass[s % k] += q;
        }
        let mut done = 0.0;
        for t in start..start + post {
            let mut next = vec![0.0f64; top + 1];
            for (b, &q) in bmass.iter().enumerate() {
                if q == 0.0 {
                    continue;
                }
                for j in 0..m {
                    let nb_val = 2.0 * b as f64 * self.g - (x[t] as usize).abs_diff(j) as f64 * self.h;
                    if nb_val <= 0.0 {
                        continue;
                    }
                    let nb = self.bin(nb_val, optimistic);
                    if nb == 0 {
                        continue;
                    }
                    if nb as f64 * self.g > 1.0 || (optimistic && nb as f64 * self.g >= 1.0) {
                        done += q * p;
                    } else {
                        next[nb.min(top)] += q * p;
                    }
                }
            }
            bmass = next;
        }
        if optimistic {
            done + bmass.iter().sum::<f64>()
        } else {
            done
        }
    }
}
