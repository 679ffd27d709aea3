use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::Interval;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "SCREAMING_SNAKE_CASE"))]
pub enum QuantityId {
    SepCountRate,
    KsEps,
    ShapiraEps,
    BkUpper,
    BkLower,
    KatokUpper,
    KatokLower,
    KatokUpperLim,
    KatokLowerLim,
    Ps,
    OwReturn,
    /// Bowen-type critical value `h^B_top(Z, eps)`.
    BowenCritical,
    /// Packing-type critical value `h^P_top(Z, eps)`.
    PackingCritical,
    /// `M_mu(eps)`.
    KatokCp,
    /// `P_mu(eps)`, the measure packing quantity.
    PackingCp,
    /// Infimum of packing entropies over the enumerated full-measure sets.
    PackingFullMeasureInf,
    /// Packing entropy of the generic-point approximation.
    PackingGeneric,
}

impl QuantityId {
    pub fn name(self) -> &'static str {
        match self {
            QuantityId::SepCountRate => "SEP_COUNT_RATE",
            QuantityId::KsEps => "KS_EPS",
            QuantityId::ShapiraEps => "SHAPIRA_EPS",
            QuantityId::BkUpper => "BK_UPPER",
            QuantityId::BkLower => "BK_LOWER",
            QuantityId::KatokUpper => "KATOK_UPPER",
            QuantityId::KatokLower => "KATOK_LOWER",
            QuantityId::KatokUpperLim => "KATOK_UPPER_LIM",
            QuantityId::KatokLowerLim => "KATOK_LOWER_LIM",
            QuantityId::Ps => "PS",
            QuantityId::OwReturn => "OW_RETURN",
            QuantityId::BowenCritical => "BOWEN_CRITICAL",
            QuantityId::PackingCritical => "PACKING_CRITICAL",
            QuantityId::KatokCp => "KATOK_CP",
            QuantityId::PackingCp => "PACKING_CP",
            QuantityId::PackingFullMeasureInf => "PACKING_FULL_MEASURE_INF",
            QuantityId::PackingGeneric => "PACKING_GENERIC",
        }
    }

    pub fn all() -> &'static [QuantityId] {
        use QuantityId::*;
        &[
            SepCountRate, KsEps, ShapiraEps, BkUpper, BkLower, KatokUpper, KatokLower, KatokUpperLim, KatokLowerLim, Ps,
            OwReturn, BowenCritical, PackingCritical, KatokCp, PackingCp, PackingFullMeasureInf, PackingGeneric,
        ]
    }

    pub fn from_name(s: &str) -> Option<QuantityId> {
        QuantityId::all().iter().copied().find(|q| q.name() == s)
    }
}

impl fmt::Display for QuantityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Mode {
    /// Closed form or exact combinatorics.
    Exact,
    /// Rigorous enclosure in `bounds`.
    Certified,
    /// Deterministic finite-n trace plus a least-squares extrapolation.
    Extrapolated,
    MonteCarlo,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "Exact",
            Mode::Certified => "Certified",
            Mode::Extrapolated => "Extrapolated",
            Mode::MonteCarlo => "MonteCarlo",
        }
    }
}

/// One value of an epsilon-entropy with its evidence.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EntropyEstimate {
    pub quantity: QuantityId,
    pub eps: f64,
    pub delta: Option<f64>,
    /// `(l, eta)` neighborhoods searched.
    pub neighborhoods: Vec<(usize, f64)>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    /// `(n, value)` finite-order trace.
    pub trace: Vec<(u64, f64)>,
    pub value: f64,
    pub bounds: Option<Interval>,
    pub mode: Mode,
    /// Extra labelled numbers (per-delta values, per-neighborhood values, ...).
    pub aux: Vec<(String, f64)>,
    /// Restrictions and flags that qualify the value.
    pub notes: Vec<String>,
}

impl EntropyEstimate {
    pub fn new(quantity: QuantityId, eps: f64, trace: Vec<(u64, f64)>, value: f64, mode: Mode) -> Self {
        EntropyEstimate {
            quantity,
            eps,
            delta: None,
            neighborhoods: Vec::new(),
            samples: None,
            seed: None,
            trace,
            value,
            bounds: None,
            mode,
            aux: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn with_note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }

    pub fn with_delta(mut self, d: f64) -> Self {
        self.delta = Some(d);
        self
    }
}
