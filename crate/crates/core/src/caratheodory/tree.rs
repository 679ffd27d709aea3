//! Log-domain dynamic programming over the cylinder tree.
//!
//! Bowen-ball families of orders in `[n_lo, n_hi]` are cylinders of depths
//! `n + offset`; cover and packing optima over such families reduce to
//! antichains of the tree, evaluated bottom-up.

use alloc::vec;
use alloc::vec::Vec;

use crate::entropy::Region;
use crate::error::{check_cap, invalid, Result};
use crate::numeric::log_add_exp;
use crate::symbolic::{closed_scale_index, scale_index, ShiftSystem, Sidedness, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Objective {
    /// Minimal cover weight; balls may be centred anywhere.
    Cover,
    /// Maximal packing weight; balls must meet the set.
    Pack,
}

impl Objective {
    /// Value of an infeasible node and of an empty one.
    fn infeasible(self) -> f64 {
        match self {
            Objective::Cover => f64::INFINITY,
            Objective::Pack => f64::NEG_INFINITY,
        }
    }

    fn better(self, a: f64, b: f64) -> f64 {
        match self {
            Objective::Cover => a.min(b),
            Objective::Pack => a.max(b),
        }
    }
}

/// `ln` of a sum of weights given as logs; `+inf` absorbs.
fn ln_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = f64::NEG_INFINITY;
    for x in xs {
        if x == f64::INFINITY {
            return f64::INFINITY;
        }
        acc = log_add_exp(acc, x);
    }
    acc
}

/// Orders `[n_lo, n_hi]` with weight exponent `s`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Orders {
    pub n_lo: u64,
    pub n_hi: u64,
    pub s: f64,
}

struct Ctx<'a> {
    sys: &'a ShiftSystem,
    obj: Objective,
    orders: Orders,
    /// Ball depth is `n + offset`.
    offset: u64,
    d_max: usize,
}

impl Ctx<'_> {
    fn take(&self, d: usize) -> Option<f64> {
        let n = (d as u64).checked_sub(self.offset)?;
        (n >= self.orders.n_lo && n <= self.orders.n_hi).then(|| -(n as f64) * self.orders.s)
    }

    fn combine(&self, d: usize, children: f64) -> f64 {
        let split = if d < self.d_max { children } else { self.obj.infeasible() };
        match self.take(d) {
            Some(t) => self.obj.better(t, split),
            None => split,
        }
    }

    /// `hom[d - from][a]`: value of a depth-`d` node ending in `a` whose
    /// whole subtree lies in the set.
    fn homogeneous(&self, from: usize) -> Vec<Vec<f64>> {
        let m = self.sys.m();
        let rows = self.d_max + 1 - from.min(self.d_max + 1);
        let mut hom = vec![vec![0.0; m]; rows];
        for d in (from..=self.d_max).rev() {
            for a in 0..m {
                let children = if d < self.d_max {
                    ln_sum(self.sys.successors(a as u8).map(|b| hom[d + 1 - from][b as usize]))
                } else {
                    self.obj.infeasible()
                };
                hom[d - from][a] = self.combine(d, children);
            }
        }
        hom
    }

    /// Node at depth `d` whose set-part is `words` (sorted, common prefix of
    /// length `d`, all of length `depth`).
    fn node(&self, words: &[Word], d: usize, depth: usize, full_below: bool, hom: &[Vec<f64>]) -> f64 {
        if words.is_empty() {
            return f64::NEG_INFINITY;
        }
        if d == depth {
            if full_below {
                return hom[d - depth][words[0][d - 1] as usize];
            }
            return self.combine(d, self.obj.infeasible());
        }
        let mut children = Vec::new();
        let mut i = 0;
        while i < words.len() {
            let b = words[i][d];
            let j = i + words[i..].iter().take_while(|w| w[d] == b).count();
            children.push(self.node(&words[i..j], d + 1, depth, full_below, hom));
            i = j;
        }
        self.combine(d, ln_sum(children))
    }
}

/// `ln` of the optimal cover (minimum) or packing (maximum) weight of the
/// region by balls `B_n(x, eps)` with `n` in the order window.
pub(crate) fn tree_weight(
    sys: &ShiftSystem,
    region: Region<'_>,
    eps: f64,
    orders: Orders,
    obj: Objective,
    cap: u64,
) -> Result<f64> {
    sys.require_exact()?;
    if orders.n_lo == 0 || orders.n_lo > orders.n_hi {
        return Err(invalid("order window must satisfy 1 <= N <= N_max"));
    }
    if !(orders.s >= 0.0) {
        return Err(invalid("weight exponent must be nonnegative"));
    }
    let closed = obj == Objective::Pack;
    let k = if closed { closed_scale_index(eps) } else { scale_index(eps)? } as u64;
    let nonempty = match region {
        Region::Whole => true,
        Region::Leaves(l) => {
            if l.m() != sys.m() {
                return Err(invalid("leaf set alphabet does not match the system"));
            }
            !l.is_empty()
        }
        Region::Points(p) => {
            for x in p {
                x.check(sys)?;
            }
            !p.is_empty()
        }
    };
    if !nonempty {
        return Ok(f64::NEG_INFINITY);
    }
    if k == 0 {
        // Every ball is the whole space.
        let n = if obj == Objective::Cover { orders.n_hi } else { orders.n_lo };
        return Ok(-(n as f64) * orders.s);
    }
    let two = sys.sidedness() == Sidedness::TwoSided;
    let left = if two { (k - 1) as usize } else { 0 };
    check_cap("tree depth", cap, orders.n_hi + k - 1 + left as u64)?;

    if let Region::Points(pts) = region {
        let offset = k - 1 + left as u64;
        let d_max = (orders.n_hi + offset) as usize;
        let ctx = Ctx { sys, obj, orders, offset, d_max };
        let mut words: Vec<Word> = pts.iter().map(|p| p.window(-(left as i64), d_max)).collect();
        words.sort();
        words.dedup();
        return Ok(ctx.node(&words, 0, d_max, false, &[]));
    }

    let offset = k - 1;
    let d_max = (orders.n_hi + offset) as usize;
    let ctx = Ctx { sys, obj, orders, offset, d_max };
    let (words, depth, full_below): (Vec<Word>, usize, bool) = match region {
        Region::Whole => (vec![Vec::new()], 0, true),
        Region::Leaves(l) if l.depth() <= d_max => (l.words().collect(), l.depth(), true),
        Region::Leaves(l) => {
            let mut w: Vec<Word> = l.words().map(|w| w[..d_max].to_vec()).collect();
            w.dedup();
            (w, d_max, false)
        }
        Region::Points(_) => unreachable!(),
    };
    check_cap("tree leaves", cap, words.len() as u64)?;
    let hom = ctx.homogeneous(depth.max(1));
    let mult: Vec<f64> = if left > 0 {
        sys.left_extension_counts(left).iter().map(|c| crate::numeric::ln_biguint(c)).collect()
    } else {
        vec![0.0; sys.m()]
    };
    // Root: depth 0 is never a ball when k >= 1; split by first symbol.
    let mut parts = Vec::new();
    for a in 0..sys.m() as u8 {
        let child: Vec<Word> = if depth == 0 {
            vec![vec![a]]
        } else {
            words.iter().filter(|w| w[0] == a).cloned().collect()
        };
        let v = if depth == 0 {
            hom[0][a as usize]
        } else {
            ctx.node(&child, 1, depth, full_below, &hom)
        };
        if v != f64::NEG_INFINITY {
            parts.push(mult[a as usize] + v);
        }
    }
    Ok(ln_sum(parts))
}
