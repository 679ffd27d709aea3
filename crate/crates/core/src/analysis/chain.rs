use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::Zero;

use crate::caratheodory::{packing_critical, packing_cp_lim, packing_entropy_generic, CriticalSpec, GenericSpec};
use crate::entropy::{
    bk_entropy, katok_entropy, katok_entropy_lim, ks_eps_entropy, ps_entropy, shapira_eps_entropy, BkSpec,
    EntropyEstimate, KatokSpec, Mode, PsSpec, QuantityId, Region, ShapiraSpec,
};
use crate::error::{at_node, invalid, Error, Result};
use crate::measure::MeasureModel;
use crate::numeric::Extrapolation;
use crate::symbolic::{scale_index, Admissibility, Alphabet, ShiftSystem};

/// One evaluated quantity in a chain.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChainNode {
    /// Printed argument, e.g. `BK_UPPER(2eps)`.
    pub label: String,
    pub quantity: QuantityId,
    pub eps: f64,
    pub delta: Option<f64>,
    pub value: f64,
    pub mode: Mode,
}

impl ChainNode {
    fn from_estimate(label: String, e: &EntropyEstimate) -> Self {
        ChainNode { label, quantity: e.quantity, eps: e.eps, delta: e.delta, value: e.value, mode: e.mode }
    }
}

/// `lhs <= rhs` checked with tolerance `tau`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChainLink {
    pub lhs: ChainNode,
    pub rhs: ChainNode,
    /// `rhs - lhs`.
    pub slack: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChainReport {
    pub name: String,
    pub eps: f64,
    pub tau: f64,
    pub links: Vec<ChainLink>,
    pub notes: Vec<String>,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.links.iter().all(|l| l.pass)
    }

    /// One line per failing link, naming both endpoints and their modes.
    pub fn failures(&self) -> Vec<String> {
        self.links
            .iter()
            .filter(|l| !l.pass)
            .map(|l| {
                format!(
                    "{} [{}] = {:.6} > {} [{}] = {:.6} (slack {:.6}, tau {})",
                    l.lhs.label,
                    l.lhs.mode.name(),
                    l.lhs.value,
                    l.rhs.label,
                    l.rhs.mode.name(),
                    l.rhs.value,
                    l.slack,
                    self.tau
                )
            })
            .collect()
    }

    /// The nodes in chain order.
    pub fn nodes(&self) -> Vec<&ChainNode> {
        let mut out: Vec<&ChainNode> = self.links.iter().map(|l| &l.lhs).collect();
        if let Some(l) = self.links.last() {
            out.push(&l.rhs);
        }
        out
    }
}

/// Estimator settings shared by both chains.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct ChainConfig {
    /// Orders for the Katok, Shapira and BK traces.
    pub n_schedule: Vec<u64>,
    /// Mass defects for the `delta -> 0` Katok limits.
    pub katok_deltas: Vec<f64>,
    /// Partitions of depth `k(eps) ..= k(eps) + ks_extra_depth`.
    pub ks_extra_depth: usize,
    pub shapira_extra_depth: usize,
    pub ps_grid: Vec<(usize, f64)>,
    pub ps_n_schedule: Vec<u64>,
    pub generic_cells: Vec<(usize, f64)>,
    pub generic_lengths: Vec<usize>,
    pub generic_n0: usize,
    /// Lower orders `N` for the measure packing critical values.
    pub cp_n_schedule: Vec<u64>,
    pub cp_deltas: Vec<f64>,
    /// Order `N` for the packing criticals of the full-measure sets.
    pub set_order: u64,
    pub cap: u64,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            n_schedule: vec![100, 200, 300, 400],
            katok_deltas: vec![0.2, 0.1, 0.05],
            ks_extra_depth: 2,
            shapira_extra_depth: 1,
            ps_grid: vec![(1, 0.005), (1, 0.05), (2, 0.02)],
            ps_n_schedule: vec![50, 100, 150, 200],
            generic_cells: vec![(1, 0.02), (1, 0.05), (2, 0.05)],
            generic_lengths: vec![100, 200, 300, 400],
            generic_n0: 40,
            cp_n_schedule: vec![10, 20, 30, 40],
            cp_deltas: vec![0.2, 0.1, 0.05],
            set_order: 4000,
            cap: 1 << 22,
        }
    }
}

impl ChainConfig {
    fn katok(&self) -> KatokSpec {
        KatokSpec { n_schedule: self.n_schedule.clone(), extrapolation: Extrapolation::Sqrt, cap: self.cap }
    }

    fn bk(&self) -> BkSpec {
        BkSpec { n_schedule: self.n_schedule.clone(), monte_carlo: None }
    }
}

fn check_eps(eps: f64, tau: f64) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(invalid("radius must be positive and finite"));
    }
    if !(tau >= 0.0) {
        return Err(invalid("tolerance must be nonnegative"));
    }
    Ok(())
}

fn link_all(nodes: Vec<ChainNode>, tau: f64) -> Vec<ChainLink> {
    nodes
        .windows(2)
        .map(|w| {
            let slack = w[1].value - w[0].value;
            ChainLink { lhs: w[0].clone(), rhs: w[1].clone(), slack, pass: slack >= -tau }
        })
        .collect()
}

/// The eight-node chain from the BK entropy at `2 eps` down to the BK
/// entropy at `eps/64`, through partitions, covers and Katok entropies.
pub fn lemma31_chain(
    mu: &MeasureModel,
    sys: &ShiftSystem,
    eps: f64,
    delta: f64,
    tau: f64,
    cfg: &ChainConfig,
) -> Result<ChainReport> {
    check_eps(eps, tau)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid("delta must lie in (0, 1)"));
    }
    let katok = cfg.katok();
    let bk = cfg.bk();
    let mut nodes = Vec::new();
    let mut node = |label: &str, r: Result<EntropyEstimate>| -> Result<()> {
        let e = at_node(label, r)?;
        nodes.push(ChainNode::from_estimate(label.into(), &e));
        Ok(())
    };
    node("BK_UPPER(2eps)", bk_entropy(mu, sys, 2.0 * eps, true, &bk))?;
    let k = at_node("KS_EPS(eps)", scale_index(eps))? as usize;
    node("KS_EPS(eps)", ks_eps_entropy(mu, sys, eps, k + cfg.ks_extra_depth, &cfg.n_schedule))?;
    let shapira = ShapiraSpec {
        threshold: 1.0 - delta,
        extra_depth: cfg.shapira_extra_depth,
        n_schedule: cfg.n_schedule.clone(),
        extrapolation: Extrapolation::Sqrt,
        cap: cfg.cap,
    };
    node("SHAPIRA_EPS(eps)", shapira_eps_entropy(mu, sys, eps, &shapira))?;
    node("KATOK_LOWER(eps/4)", katok_entropy(mu, sys, eps / 4.0, delta, false, &katok))?;
    node("KATOK_UPPER(eps/4)", katok_entropy(mu, sys, eps / 4.0, delta, true, &katok))?;
    node("KATOK_LOWER_LIM(eps/32)", katok_entropy_lim(mu, sys, eps / 32.0, &cfg.katok_deltas, false, &katok))?;
    node("KATOK_UPPER_LIM(eps/32)", katok_entropy_lim(mu, sys, eps / 32.0, &cfg.katok_deltas, true, &katok))?;
    node("BK_UPPER(eps/64)", bk_entropy(mu, sys, eps / 64.0, true, &bk))?;
    Ok(ChainReport { name: "lemma31".into(), eps, tau, links: link_all(nodes, tau), notes: Vec::new() })
}

/// The chain from the BK entropy at `eps` through the measure packing
/// quantity, full-measure sets, generic points and the Pfister–Sullivan
/// entropy, to the BK entropy at `eps/120`. The return-time node is not
/// evaluated; PS at `eps/10` is compared with the Katok entropy at `eps/60`
/// directly, which the full chain implies.
pub fn lemma32_chain(mu: &MeasureModel, sys: &ShiftSystem, eps: f64, tau: f64, cfg: &ChainConfig) -> Result<ChainReport> {
    check_eps(eps, tau)?;
    let e10 = eps / 10.0;
    let mut notes = vec!["return-time node skipped; PS linked to KATOK_UPPER_LIM(eps/60) directly".into()];
    let mut nodes = Vec::new();
    let bk = cfg.bk();

    let e = at_node("BK_UPPER(eps)", bk_entropy(mu, sys, eps, true, &bk))?;
    nodes.push(ChainNode::from_estimate("BK_UPPER(eps)".into(), &e));

    let mut cp_spec = CriticalSpec::new(cfg.cp_n_schedule.clone());
    cp_spec.cap = cfg.cap;
    cp_spec.extrapolation = Some(Extrapolation::Sqrt);
    let cv = at_node("PACKING_CP(eps/10)", packing_cp_lim(mu, sys, e10, &cfg.cp_deltas, &cp_spec))?;
    nodes.push(ChainNode {
        label: "PACKING_CP(eps/10)".into(),
        quantity: QuantityId::PackingCp,
        eps: e10,
        delta: cfg.cp_deltas.iter().copied().reduce(f64::min),
        value: cv.value(),
        mode: Mode::Extrapolated,
    });

    let generic_spec = GenericSpec {
        cells: cfg.generic_cells.clone(),
        lengths: cfg.generic_lengths.clone(),
        n0: cfg.generic_n0,
        extrapolation: Extrapolation::Affine,
        cap: cfg.cap,
    };
    let generic = at_node("PACKING_GENERIC(eps/10)", packing_entropy_generic(mu, sys, e10, &generic_spec))?;

    // inf over the enumerated full-measure family: X, supp mu, generic set.
    let label = "PACKING_FULL_MEASURE_INF(eps/10)";
    let mut set_spec = CriticalSpec::new(vec![cfg.set_order]);
    set_spec.cap = cfg.cap;
    let whole = at_node(label, packing_critical(sys, Region::Whole, e10, &set_spec))?.value();
    let mut inf = whole.min(generic.value);
    match at_node(label, support_system(mu, sys))? {
        Some(supp) => {
            let v = at_node(label, packing_critical(&supp, Region::Whole, e10, &set_spec))?.value();
            notes.push(format!("full-measure family: X = {whole:.6}, supp mu = {v:.6}, generic = {:.6}", generic.value));
            inf = inf.min(v);
        }
        None => notes.push(format!("full-measure family: X = supp mu = {whole:.6}, generic = {:.6}", generic.value)),
    }
    notes.push("full-measure infimum is over an enumerated family, so it bounds the true infimum from above".into());
    nodes.push(ChainNode {
        label: label.into(),
        quantity: QuantityId::PackingFullMeasureInf,
        eps: e10,
        delta: None,
        value: inf,
        mode: Mode::Extrapolated,
    });
    nodes.push(ChainNode::from_estimate("PACKING_GENERIC(eps/10)".into(), &generic));

    let ps = PsSpec {
        grid: cfg.ps_grid.clone(),
        n_schedule: cfg.ps_n_schedule.clone(),
        extrapolation: Extrapolation::Affine,
        cap: cfg.cap,
    };
    let e = at_node("PS(eps/10)", ps_entropy(mu, sys, e10, &ps))?;
    nodes.push(ChainNode::from_estimate("PS(eps/10)".into(), &e));

    let e = at_node(
        "KATOK_UPPER_LIM(eps/60)",
        katok_entropy_lim(mu, sys, eps / 60.0, &cfg.katok_deltas, true, &cfg.katok()),
    )?;
    nodes.push(ChainNode::from_estimate("KATOK_UPPER_LIM(eps/60)".into(), &e));

    let e = at_node("BK_UPPER(eps/120)", bk_entropy(mu, sys, eps / 120.0, true, &bk))?;
    nodes.push(ChainNode::from_estimate("BK_UPPER(eps/120)".into(), &e));

    Ok(ChainReport { name: "lemma32".into(), eps, tau, links: link_all(nodes, tau), notes })
}

/// The subshift carried by `mu`: symbols of positive mass and transitions of
/// positive probability. `None` when that is all of `sys`.
pub fn support_system(mu: &MeasureModel, sys: &ShiftSystem) -> Result<Option<ShiftSystem>> {
    mu.check_support(sys)?;
    let m = sys.m();
    let mut allow: Vec<Vec<bool>> = match mu {
        MeasureModel::Bernoulli { p } => {
            (0..m).map(|a| (0..m).map(|b| !p[a].is_zero() && !p[b].is_zero() && sys.allows(a as u8, b as u8)).collect()).collect()
        }
        MeasureModel::Markov { pi, p } => (0..m)
            .map(|a| (0..m).map(|b| !pi[a].is_zero() && !p[a][b].is_zero() && sys.allows(a as u8, b as u8)).collect())
            .collect(),
        MeasureModel::Empirical { .. } => {
            return Err(Error::UnsupportedMeasure("support of an empirical measure"));
        }
    };
    // Drop symbols that cannot continue or be reached inside the support.
    let mut keep: Vec<bool> = vec![true; m];
    loop {
        let mut changed = false;
        for a in 0..m {
            if keep[a] {
                let out = (0..m).any(|b| keep[b] && allow[a][b]);
                let inn = (0..m).any(|b| keep[b] && allow[b][a]);
                if !out || !inn {
                    keep[a] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let syms: Vec<usize> = (0..m).filter(|&a| keep[a]).collect();
    if syms.is_empty() {
        return Err(invalid("measure has empty support"));
    }
    for a in 0..m {
        for b in 0..m {
            allow[a][b] &= keep[a] && keep[b];
        }
    }
    let same = (0..m).all(|a| (0..m).all(|b| allow[a][b] == sys.allows(a as u8, b as u8)));
    if same {
        return Ok(None);
    }
    let values: Vec<f64> = syms.iter().map(|&a| sys.alphabet().values()[a]).collect();
    let alphabet = Alphabet::new(values, sys.alphabet().metric())?;
    let full = syms.iter().all(|&a| syms.iter().all(|&b| allow[a][b]));
    let adm = if full {
        Admissibility::Full
    } else {
        Admissibility::Sft(syms.iter().map(|&a| syms.iter().map(|&b| allow[a][b] as u8).collect()).collect())
    };
    Ok(Some(ShiftSystem::new(alphabet, adm, sys.sidedness(), sys.metric())?))
}
