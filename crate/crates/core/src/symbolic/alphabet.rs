use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::numeric::rational_from_f64;
use crate::Interval;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SymbolMetric {
    /// `rho(a, b) = 1` iff `a != b`.
    Discrete,
    /// `rho(a, b) = |value(a) - value(b)|`.
    Euclidean,
}

/// Symbols `0..m` embedded in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Alphabet {
    values: Vec<f64>,
    metric: SymbolMetric,
}

impl Alphabet {
    pub fn new(values: Vec<f64>, metric: SymbolMetric) -> Result<Self> {
        if values.is_empty() || values.len() > 255 {
            return Err(invalid("alphabet size must be in 1..=255"));
        }
        if values[0] < 0.0 || values[values.len() - 1] > 1.0 {
            return Err(invalid("alphabet values must lie in [0, 1]"));
        }
        if values.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(invalid("alphabet values must be strictly increasing"));
        }
        Ok(Alphabet { values, metric })
    }

    /// `m` equally spaced values `i/(m-1)` (or `{0}` when `m = 1`).
    pub fn grid(m: usize, metric: SymbolMetric) -> Result<Self> {
        if m == 0 {
            return Err(invalid("alphabet size must be positive"));
        }
        let values = if m == 1 { alloc::vec![0.0] } else { (0..m).map(|i| i as f64 / (m - 1) as f64).collect() };
        Alphabet::new(values, metric)
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn metric(&self) -> SymbolMetric {
        self.metric
    }

    pub fn rho_exact(&self, a: u8, b: u8) -> BigRational {
        match self.metric {
            SymbolMetric::Discrete => {
                if a == b {
                    BigRational::zero()
                } else {
                    BigRational::from_integer(1.into())
                }
            }
            SymbolMetric::Euclidean => {
                (rational_from_f64(self.values[a as usize]) - rational_from_f64(self.values[b as usize])).abs()
            }
        }
    }

    /// Certified enclosure of `rho(a, b)`.
    pub fn rho(&self, a: u8, b: u8) -> Interval {
        match self.metric {
            SymbolMetric::Discrete => Interval::point(if a == b { 0.0 } else { 1.0 }),
            SymbolMetric::Euclidean => crate::numeric::rational_interval(&self.rho_exact(a, b)),
        }
    }

    pub fn max_rho(&self) -> f64 {
        match self.metric {
            SymbolMetric::Discrete => {
                if self.size() > 1 {
                    1.0
                } else {
                    0.0
                }
            }
            SymbolMetric::Euclidean => self.rho((self.size() - 1) as u8, 0).hi,
        }
    }
}
