use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::entropy::QuantityId;
use crate::error::{invalid, Error, Result};
use crate::numeric::{fit_affine, max_f64, min_f64};

/// Growth of a quantity against `ln(1/eps)` over a decreasing grid.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SlopeReport {
    pub quantity: QuantityId,
    /// Row label; distinguishes variants of one quantity (sandwich ends, ...).
    pub label: String,
    pub eps: Vec<f64>,
    pub values: Vec<f64>,
    /// `value / ln(1/eps)`.
    pub ratios: Vec<f64>,
    pub final_ratio: f64,
    /// Least-squares slope of value against `ln(1/eps)` over the finest
    /// half; `None` when that half has fewer than two points.
    pub slope: Option<f64>,
    /// Max of the tail ratios (limsup surrogate).
    pub upper: f64,
    /// Min of the tail ratios (liminf surrogate).
    pub lower: f64,
}

fn is_dyadic(e: f64) -> bool {
    e > 0.0 && e <= 1.0 && {
        let (m, _) = libm::frexp(e);
        m == 0.5
    }
}

pub(crate) fn slope_report_min(
    quantity: QuantityId,
    label: &str,
    eps: &[f64],
    values: &[f64],
    min_points: usize,
) -> Result<SlopeReport> {
    if eps.len() != values.len() {
        return Err(invalid("grid and values differ in length"));
    }
    if eps.len() < min_points {
        return Err(invalid(format!("need at least {min_points} grid points, got {}", eps.len())));
    }
    if eps.windows(2).any(|w| !(w[0] > w[1])) {
        return Err(invalid("eps grid must be strictly decreasing"));
    }
    for &e in eps {
        if is_dyadic(e) {
            return Err(Error::DyadicRadius(e));
        }
        if !(e > 0.0 && e < 1.0) {
            return Err(invalid(format!("eps = {e} gives a nonpositive ln(1/eps)")));
        }
    }
    let x: Vec<f64> = eps.iter().map(|&e| -libm::log(e)).collect();
    let ratios: Vec<f64> = values.iter().zip(&x).map(|(v, x)| v / x).collect();
    let tail = eps.len() / 2;
    let slope = if eps.len() - tail >= 2 { fit_affine(&x[tail..], &values[tail..]).map(|f| f.1) } else { None };
    Ok(SlopeReport {
        quantity,
        label: label.into(),
        eps: eps.to_vec(),
        values: values.to_vec(),
        final_ratio: *ratios.last().unwrap(),
        slope,
        upper: max_f64(&ratios[tail..]),
        lower: min_f64(&ratios[tail..]),
        ratios,
    })
}

/// Ratios, tail surrogates, and least-squares slope for `values` over `eps`
/// (strictly decreasing, non-dyadic, below 1, at least four points).
pub fn slope_report(quantity: QuantityId, eps: &[f64], values: &[f64]) -> Result<SlopeReport> {
    slope_report_min(quantity, quantity.name(), eps, values, 4)
}
