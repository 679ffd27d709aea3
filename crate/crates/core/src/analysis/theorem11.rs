use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::chain::ChainConfig;
use super::example46::GridFamilyReport;
use super::slope::{slope_report, slope_report_min, SlopeReport};
use crate::caratheodory::{
    bowen_critical, katok_cp_lim, packing_critical, packing_cp_lim, packing_entropy_generic, CriticalSpec, CriticalValue,
    GenericSpec,
};
use crate::entropy::{
    bk_entropy, eps_topological_entropy, katok_entropy, katok_entropy_lim, ks_eps_entropy, ow_return_entropy, ps_entropy,
    shapira_eps_entropy, BkSpec, EntropyEstimate, KatokSpec, Mode, OwSpec, PsSpec, QuantityId, Region, ShapiraSpec,
};
use crate::error::{at_node, invalid, Error, Result};
use crate::measure::MeasureModel;
use crate::numeric::{max_f64, min_f64, Extrapolation};
use crate::symbolic::{scale_index, ShiftSystem};
use crate::Interval;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct CoincidenceConfig {
    pub quantities: Vec<QuantityId>,
    /// Mass defect for the fixed-delta Katok entropies.
    pub katok_delta: f64,
    pub estimators: ChainConfig,
    /// `(samples, seed)` for the return-time estimator.
    pub ow: (u64, u64),
    pub ow_n_schedule: Vec<u64>,
    /// Upper and lower BK surrogates further apart than this are flagged.
    pub flag_tol: f64,
}

impl Default for CoincidenceConfig {
    fn default() -> Self {
        use QuantityId::*;
        CoincidenceConfig {
            quantities: vec![
                KsEps, ShapiraEps, BkUpper, BkLower, KatokUpper, KatokLower, KatokUpperLim, KatokLowerLim, Ps, PackingCp,
            ],
            katok_delta: 0.2,
            estimators: ChainConfig::default(),
            ow: (1000, 7),
            ow_n_schedule: vec![10, 12, 14, 16],
            flag_tol: 0.05,
        }
    }
}

/// Per-quantity slopes plus the generic-set packing slope.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoincidenceReport {
    pub reports: Vec<SlopeReport>,
    pub generic: Option<SlopeReport>,
    /// Largest pairwise gap between upper surrogates.
    pub discrepancy: f64,
    /// Largest pairwise gap between ratios at the finest radius.
    pub discrepancy_final: f64,
    /// Gap between the upper and lower fixed-delta Katok upper surrogates.
    pub katok_gap: Option<f64>,
    pub notes: Vec<String>,
}

impl CoincidenceReport {
    pub fn get(&self, q: QuantityId) -> Option<&SlopeReport> {
        self.reports.iter().find(|r| r.quantity == q)
    }

    fn all(&self) -> impl Iterator<Item = &SlopeReport> {
        self.reports.iter().chain(self.generic.iter())
    }

    /// Assembles the discrepancy summary from per-quantity slope reports.
    /// Upper and lower BK surrogates further apart than `flag_tol` add a note.
    pub fn new(reports: Vec<SlopeReport>, generic: Option<SlopeReport>, mut notes: Vec<String>, flag_tol: f64) -> Self {
        let mut r = CoincidenceReport { reports, generic, discrepancy: 0.0, discrepancy_final: 0.0, katok_gap: None, notes: Vec::new() };
        let up: Vec<f64> = r.all().map(|s| s.upper).collect();
        let fin: Vec<f64> = r.all().map(|s| s.final_ratio).collect();
        if !up.is_empty() {
            r.discrepancy = max_f64(&up) - min_f64(&up);
            r.discrepancy_final = max_f64(&fin) - min_f64(&fin);
        }
        if let (Some(a), Some(b)) = (r.get(QuantityId::KatokUpper), r.get(QuantityId::KatokLower)) {
            r.katok_gap = Some((a.upper - b.upper).abs());
        }
        if let (Some(a), Some(b)) = (r.get(QuantityId::BkUpper), r.get(QuantityId::BkLower)) {
            let gap = (a.upper - b.upper).abs();
            if gap > flag_tol {
                notes.push(format!("upper and lower BK surrogates differ by {gap:.4}"));
            }
        }
        r.notes = notes;
        r
    }
}

fn critical_estimate(q: QuantityId, eps: f64, cv: CriticalValue) -> EntropyEstimate {
    let mode = if cv.limit.is_some() || !cv.exact { Mode::Extrapolated } else { Mode::Certified };
    let mut e = EntropyEstimate::new(q, eps, cv.trace.clone(), cv.value(), mode);
    e.bounds = Some(Interval::new(cv.s_lo, cv.s_hi));
    e.aux = cv.aux;
    e.notes = cv.notes;
    if !cv.exact {
        e.notes.push("some weights came from the heuristic upper bound".into());
    }
    e
}

/// One estimate of `q` at `eps` with the estimator settings in `cfg`.
/// Fixed-delta quantities use `cfg.katok_delta`; the delta limits and the
/// measure Caratheodory values use `cfg.estimators.katok_deltas` and
/// `cfg.estimators.cp_deltas`.
pub fn estimate_quantity(
    mu: &MeasureModel,
    sys: &ShiftSystem,
    q: QuantityId,
    eps: f64,
    cfg: &CoincidenceConfig,
) -> Result<EntropyEstimate> {
    let est = &cfg.estimators;
    let katok = KatokSpec { n_schedule: est.n_schedule.clone(), extrapolation: Extrapolation::Sqrt, cap: est.cap };
    let bk = BkSpec { n_schedule: est.n_schedule.clone(), monte_carlo: None };
    let mut cp = CriticalSpec::new(est.cp_n_schedule.clone());
    cp.cap = est.cap;
    cp.extrapolation = Some(Extrapolation::Sqrt);
    use QuantityId::*;
    Ok(match q {
        SepCountRate => eps_topological_entropy(sys, Region::Whole, eps, &est.n_schedule, est.cap)?,
        KsEps => {
            let k = scale_index(eps)? as usize;
            ks_eps_entropy(mu, sys, eps, k + est.ks_extra_depth, &est.n_schedule)?
        }
        ShapiraEps => {
            let spec = ShapiraSpec {
                threshold: 1.0 - cfg.katok_delta,
                extra_depth: est.shapira_extra_depth,
                n_schedule: est.n_schedule.clone(),
                extrapolation: Extrapolation::Sqrt,
                cap: est.cap,
            };
            shapira_eps_entropy(mu, sys, eps, &spec)?
        }
        BkUpper | BkLower => bk_entropy(mu, sys, eps, q == BkUpper, &bk)?,
        KatokUpper | KatokLower => katok_entropy(mu, sys, eps, cfg.katok_delta, q == KatokUpper, &katok)?,
        KatokUpperLim | KatokLowerLim => katok_entropy_lim(mu, sys, eps, &est.katok_deltas, q == KatokUpperLim, &katok)?,
        Ps => {
            let spec = PsSpec {
                grid: est.ps_grid.clone(),
                n_schedule: est.ps_n_schedule.clone(),
                extrapolation: Extrapolation::Affine,
                cap: est.cap,
            };
            ps_entropy(mu, sys, eps, &spec)?
        }
        OwReturn => {
            let spec = OwSpec {
                n_schedule: cfg.ow_n_schedule.clone(),
                depth: None,
                samples: cfg.ow.0,
                seed: cfg.ow.1,
                horizon: 1 << 30,
                extrapolation: Extrapolation::Affine,
            };
            ow_return_entropy(mu, sys, eps, &spec)?
        }
        BowenCritical => {
            let mut spec = cp.clone();
            spec.extrapolation = None;
            critical_estimate(q, eps, bowen_critical(sys, Region::Whole, eps, &spec)?)
        }
        PackingCritical => {
            let mut spec = cp.clone();
            spec.extrapolation = None;
            critical_estimate(q, eps, packing_critical(sys, Region::Whole, eps, &spec)?)
        }
        PackingCp => critical_estimate(q, eps, packing_cp_lim(mu, sys, eps, &est.cp_deltas, &cp)?),
        KatokCp => critical_estimate(q, eps, katok_cp_lim(mu, sys, eps, &est.cp_deltas, &cp)?),
        PackingGeneric => generic(mu, sys, eps, est)?,
        PackingFullMeasureInf => {
            return Err(invalid("the full-measure infimum is evaluated inside the second chain only"));
        }
    })
}

fn generic(mu: &MeasureModel, sys: &ShiftSystem, eps: f64, est: &ChainConfig) -> Result<EntropyEstimate> {
    let spec = GenericSpec {
        cells: est.generic_cells.clone(),
        lengths: est.generic_lengths.clone(),
        n0: est.generic_n0,
        extrapolation: Extrapolation::Affine,
        cap: est.cap,
    };
    packing_entropy_generic(mu, sys, eps, &spec)
}

/// Slopes of every configured quantity and of the generic-set packing
/// entropy over one `eps` grid on a fixed system.
pub fn theorem11_experiment(
    mu: &MeasureModel,
    sys: &ShiftSystem,
    eps: &[f64],
    cfg: &CoincidenceConfig,
) -> Result<CoincidenceReport> {
    // Validate the grid once before any estimator runs.
    slope_report(QuantityId::PackingGeneric, eps, &vec![0.0; eps.len()])?;
    let mut reports = Vec::new();
    for &q in &cfg.quantities {
        if q == QuantityId::PackingGeneric {
            continue;
        }
        let values = eps
            .iter()
            .map(|&e| at_node(&format!("{q}({e})"), estimate_quantity(mu, sys, q, e, cfg).map(|v| v.value)))
            .collect::<Result<Vec<f64>>>()?;
        reports.push(slope_report(q, eps, &values)?);
    }
    let values = eps
        .iter()
        .map(|&e| at_node(&format!("PACKING_GENERIC({e})"), generic(mu, sys, e, &cfg.estimators).map(|v| v.value)))
        .collect::<Result<Vec<f64>>>()?;
    let generic = slope_report(QuantityId::PackingGeneric, eps, &values)?;
    Ok(CoincidenceReport::new(reports, Some(generic), Vec::new(), cfg.flag_tol))
}

/// Coincidence check on the grid family: the BK slope of the uniform grid
/// measures against the lower end of the entropy sandwich.
pub fn theorem11_grid_family(family: &GridFamilyReport) -> Result<CoincidenceReport> {
    let fine: Vec<_> = family.levels.iter().filter(|l| l.eps < 1.0).collect();
    let eps: Vec<f64> = fine.iter().map(|l| l.eps).collect();
    let bk: Vec<f64> = fine.iter().map(|l| l.bk.value).collect();
    let lo: Vec<f64> = fine.iter().map(|l| l.v_lo).collect();
    if fine.len() < 2 {
        return Err(Error::InvalidParameter("need two levels with eps < 1".into()));
    }
    let reports = vec![
        slope_report_min(QuantityId::BkUpper, "bk_uniform", &eps, &bk, 2)?,
        slope_report_min(QuantityId::SepCountRate, "sandwich_lo", &eps, &lo, 2)?,
    ];
    let notes = vec!["grid family: BK of the uniform measures against the separated-set lower end".into()];
    Ok(CoincidenceReport::new(reports, None, notes, f64::INFINITY))
}
