use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::grid::{cell_upper_bound, feasible_order, greedy_separated, grid_system, BallMassDp};
use super::slope::{slope_report_min, SlopeReport};
use crate::entropy::{EntropyEstimate, Mode, QuantityId};
use crate::error::{at_node, invalid, Error, Result};
use crate::measure::{seed_for, MeasureModel, OrbitSampler};
use crate::numeric::{extrapolate, Extrapolation};
use crate::symbolic::DEFAULT_WINDOW;
use crate::Interval;

/// Grid-family experiment settings. Level `j` uses `m_j` equally spaced
/// values in `[0, 1]` and radius `eps_j`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct GridFamilyConfig {
    pub levels: Vec<usize>,
    /// Defaults to `4.04 / (m - 1)` per level, just above four grid spacings.
    pub eps: Option<Vec<f64>>,
    /// Separated sets are built at `lower_factor * eps`.
    pub lower_factor: f64,
    /// The cell bound is taken at `upper_factor * eps`.
    pub upper_factor: f64,
    /// Longest separated-set word.
    pub n_max: usize,
    /// Bound on `m^n` words enumerated per level.
    pub word_cap: u64,
    pub bk_orders: Vec<usize>,
    pub bk_samples: u64,
    pub seed: u64,
    /// Bins per `eps` in the ball-mass DP.
    pub bins: usize,
    /// Coordinates read before and after the window.
    pub pre: usize,
    pub post: usize,
}

impl Default for GridFamilyConfig {
    fn default() -> Self {
        GridFamilyConfig {
            levels: vec![2, 4, 8, 16, 32],
            eps: None,
            lower_factor: 1.5,
            upper_factor: 0.25,
            n_max: 8,
            word_cap: 1 << 16,
            bk_orders: vec![6, 10, 14, 18],
            bk_samples: 128,
            seed: 46,
            bins: 48,
            pre: 12,
            post: 24,
        }
    }
}

impl GridFamilyConfig {
    pub fn eps_grid(&self) -> Vec<f64> {
        match &self.eps {
            Some(e) => e.clone(),
            None => self.levels.iter().map(|&m| 4.04 / (m.max(2) - 1) as f64).collect(),
        }
    }
}

/// One level of the grid family.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridLevel {
    pub m: usize,
    pub eps: f64,
    pub spacing: f64,
    /// Lower end: `max_n ln|S_n| / n` for greedy separated sets at `lower_factor * eps`.
    pub v_lo: f64,
    /// `(n, |S_n|)` per word length.
    pub separated: Vec<(usize, usize)>,
    /// Upper end; `None` when the grid is too coarse for the bracket.
    pub v_hi: Option<f64>,
    /// BK entropy of the uniform measure on the grid.
    pub bk: EntropyEstimate,
    /// `value / ln(1/eps)`; `None` when `eps >= 1`.
    pub ratio_lo: Option<f64>,
    pub ratio_hi: Option<f64>,
    pub ratio_bk: Option<f64>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridFamilyReport {
    pub levels: Vec<GridLevel>,
    /// Slopes over the levels with `eps < 1`.
    pub lower: Option<SlopeReport>,
    pub upper: Option<SlopeReport>,
    pub bk: Option<SlopeReport>,
    pub notes: Vec<String>,
}

fn nondecreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] >= w[0])
}

impl GridFamilyReport {
    fn ratios(&self, f: impl Fn(&GridLevel) -> Option<f64>) -> Vec<f64> {
        self.levels.iter().filter_map(f).collect()
    }

    pub fn lower_ratios(&self) -> Vec<f64> {
        self.ratios(|l| l.ratio_lo)
    }

    pub fn upper_ratios(&self) -> Vec<f64> {
        self.ratios(|l| l.ratio_hi)
    }

    pub fn bk_ratios(&self) -> Vec<f64> {
        self.ratios(|l| l.ratio_bk)
    }

    /// Both ends of the sandwich have nondecreasing ratios across the levels
    /// where the ratio is defined.
    pub fn sandwich_nondecreasing(&self) -> bool {
        nondecreasing(&self.lower_ratios()) && nondecreasing(&self.upper_ratios())
    }

    pub fn final_lower_ratio(&self) -> Option<f64> {
        self.lower_ratios().last().copied()
    }

    /// Largest distance between the BK ratio and either end of the sandwich.
    pub fn bk_gap(&self) -> Option<f64> {
        self.levels
            .iter()
            .filter_map(|l| {
                let bk = l.ratio_bk?;
                let lo = (bk - l.ratio_lo?).abs();
                Some(l.ratio_hi.map_or(lo, |hi| lo.max((bk - hi).abs())))
            })
            .reduce(f64::max)
    }
}

fn ratio(v: f64, eps: f64) -> Option<f64> {
    (eps < 1.0).then(|| v / -libm::log(eps))
}

/// Separated-set lower end at one level.
pub fn grid_lower(m: usize, eps: f64, cfg: &GridFamilyConfig) -> Result<(f64, Vec<(usize, usize)>)> {
    let n_top = feasible_order(m, cfg.n_max, cfg.word_cap);
    if n_top == 0 {
        return Err(Error::CapExceeded { what: "grid words", cap: cfg.word_cap, needed: m as u64 });
    }
    let r = cfg.lower_factor * eps;
    let mut best = 0.0f64;
    let mut sizes = Vec::new();
    for n in 1..=n_top {
        let s = greedy_separated(m, n, r, cfg.word_cap)?;
        sizes.push((n, s));
        best = best.max(libm::log(s as f64) / n as f64);
    }
    Ok((best, sizes))
}

/// Sample mean of `-ln mu(B_n(x, eps)) / n` for the uniform grid measure,
/// bracketed per sample by the binned DP and extrapolated in `n`.
pub fn grid_bk(m: usize, eps: f64, cfg: &GridFamilyConfig) -> Result<EntropyEstimate> {
    if cfg.bk_samples == 0 || cfg.bk_orders.is_empty() {
        return Err(invalid("need samples and orders for the BK estimate"));
    }
    let dp = BallMassDp::new(m, eps, cfg.bins)?;
    let mu = MeasureModel::uniform(m);
    let n_top = *cfg.bk_orders.last().unwrap();
    let len = cfg.pre + n_top + cfg.post;
    let k = cfg.bk_orders.len();
    let mut lo = vec![0.0f64; k];
    let mut hi = vec![0.0f64; k];
    for i in 0..cfg.bk_samples {
        let mut s = OrbitSampler::new(&mu, seed_for(cfg.seed, i))?;
        let x: Vec<u8> = (0..len).map(|_| s.next_symbol()).collect();
        for (j, b) in dp.brackets(&x, cfg.pre, &cfg.bk_orders, cfg.post)?.into_iter().enumerate() {
            let n = cfg.bk_orders[j] as f64;
            // Larger mass means a smaller exponent.
            lo[j] += -libm::log(b.hi) / n;
            hi[j] += -libm::log(b.lo) / n;
        }
    }
    let c = cfg.bk_samples as f64;
    let trace: Vec<(u64, f64)> =
        cfg.bk_orders.iter().enumerate().map(|(j, &n)| (n as u64, (lo[j] + hi[j]) / (2.0 * c))).collect();
    let lo_trace: Vec<(u64, f64)> = cfg.bk_orders.iter().enumerate().map(|(j, &n)| (n as u64, lo[j] / c)).collect();
    let hi_trace: Vec<(u64, f64)> = cfg.bk_orders.iter().enumerate().map(|(j, &n)| (n as u64, hi[j] / c)).collect();
    let value = extrapolate(&trace, Extrapolation::Affine);
    let mut e = EntropyEstimate::new(QuantityId::BkUpper, eps, trace, value, Mode::MonteCarlo);
    e.samples = Some(cfg.bk_samples);
    e.seed = Some(cfg.seed);
    e.bounds = Some(Interval::new(lo[k - 1] / c, hi[k - 1] / c));
    e.aux = vec![
        ("lo_extrapolated".into(), extrapolate(&lo_trace, Extrapolation::Affine)),
        ("hi_extrapolated".into(), extrapolate(&hi_trace, Extrapolation::Affine)),
    ];
    e.notes.push(format!("bounds enclose the sample mean at n = {n_top}; value is the affine fit of bracket midpoints"));
    Ok(e)
}

/// Grid-family experiment: per level, the separated-set sandwich for the
/// entropy of the continuum shift at `eps_j` and the BK entropy of the
/// uniform grid measure, with ratios against `ln(1/eps_j)`.
pub fn example46_experiment(cfg: &GridFamilyConfig) -> Result<GridFamilyReport> {
    let eps = cfg.eps_grid();
    if eps.len() != cfg.levels.len() || eps.is_empty() {
        return Err(invalid("need one radius per level"));
    }
    if !(cfg.lower_factor > 1.0) {
        return Err(invalid("lower_factor must exceed 1"));
    }
    if !(cfg.upper_factor > 0.0 && cfg.upper_factor < 1.0) {
        return Err(invalid("upper_factor must lie in (0, 1)"));
    }
    let mut levels = Vec::new();
    for (&m, &e) in cfg.levels.iter().zip(&eps) {
        let label = format!("level m={m}");
        at_node(&label, grid_system(m, DEFAULT_WINDOW))?;
        let h = 1.0 / (m.max(2) - 1) as f64;
        let mut notes = Vec::new();
        let (v_lo, separated) = at_node(&label, grid_lower(m, e, cfg))?;
        // A continuum (n, e)-separated set snaps to a grid set separated at
        // e - 3h, which is at least upper_factor * e under this condition.
        let v_hi = if 3.0 * h <= (1.0 - cfg.upper_factor) * e {
            Some(at_node(&label, cell_upper_bound(m, cfg.upper_factor * e))?)
        } else {
            notes.push(format!("spacing {h:.6} too coarse for the upper bound at eps = {e}"));
            None
        };
        let bk = at_node(&label, grid_bk(m, e, cfg))?;
        if e >= 1.0 {
            notes.push("eps >= 1: ratios undefined".into());
        }
        levels.push(GridLevel {
            m,
            eps: e,
            spacing: h,
            v_lo,
            separated,
            v_hi,
            ratio_lo: ratio(v_lo, e),
            ratio_hi: v_hi.and_then(|v| ratio(v, e)),
            ratio_bk: ratio(bk.value, e),
            bk,
            notes,
        });
    }
    let fine: Vec<&GridLevel> = levels.iter().filter(|l| l.eps < 1.0).collect();
    let mut notes = Vec::new();
    let report = |q: QuantityId, label: &str, vals: Option<Vec<f64>>| -> Option<SlopeReport> {
        let vals = vals?;
        let e: Vec<f64> = fine.iter().map(|l| l.eps).collect();
        slope_report_min(q, label, &e, &vals, 2).ok()
    };
    let lower = report(QuantityId::SepCountRate, "sandwich_lo", Some(fine.iter().map(|l| l.v_lo).collect()));
    let upper = report(QuantityId::SepCountRate, "sandwich_hi", fine.iter().map(|l| l.v_hi).collect());
    let bk = report(QuantityId::BkUpper, "bk_uniform", Some(fine.iter().map(|l| l.bk.value).collect()));
    if fine.len() < 2 {
        notes.push("fewer than two levels with eps < 1; no slopes".into());
    }
    Ok(GridFamilyReport { levels, lower, upper, bk, notes })
}
