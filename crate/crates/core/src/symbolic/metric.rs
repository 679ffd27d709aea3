use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{PointRep, ShiftSystem, Sidedness};
use crate::error::{invalid, Result};
use crate::numeric::rational_interval;
use crate::Interval;

/// Default truncation window for weighted-sum evaluations on cylinder data.
pub const DEFAULT_WINDOW: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceMetric {
    /// `d(x, y) = 2^-D` with `D` the smallest `|n|` where `x_n != y_n`.
    FirstDifference,
    /// `d(x, y) = sum_n 2^-|n| rho(x_n, y_n)`, truncated to `|n| < window`
    /// when only cylinder data is available.
    WeightedSum { window: u32 },
}

fn horizon(x: &PointRep, y: &PointRep, shift: u64) -> Result<i64> {
    let lcm = (x.period().len() as u64).lcm(&(y.period().len() as u64));
    if lcm > 1 << 24 {
        return Err(invalid("period lcm too large for exact comparison"));
    }
    Ok((x.preperiod().len().max(y.preperiod().len()) as u64 + lcm + shift + 1) as i64)
}

fn two_pow_neg(e: i64) -> BigRational {
    BigRational::new(1.into(), num_bigint::BigInt::one() << (e as usize))
}

/// `d(T^j x, T^j y)`.
pub fn shifted_distance(x: &PointRep, y: &PointRep, j: u64, sys: &ShiftSystem) -> Result<Interval> {
    let two_sided = sys.sidedness() == Sidedness::TwoSided;
    let j = j as i64;
    let b = horizon(x, y, j as u64)?;
    match sys.metric() {
        SequenceMetric::FirstDifference => {
            for d in 0..=b {
                let differs = x.coord(j + d) != y.coord(j + d) || (two_sided && x.coord(j - d) != y.coord(j - d));
                if differs {
                    return Ok(Interval::point(libm::ldexp(1.0, -(d as i32))));
                }
            }
            Ok(Interval::point(0.0))
        }
        SequenceMetric::WeightedSum { .. } => {
            let alpha = sys.alphabet();
            let p = (x.period().len() as i64).lcm(&(y.period().len() as i64));
            let max_pre = x.preperiod().len().max(y.preperiod().len()) as i64;
            let start_periodic = (max_pre - j).max(0);
            let geo = BigRational::one() / (BigRational::one() - two_pow_neg(p));
            let mut total = BigRational::zero();
            // Right side: finite part then one period summed geometrically.
            for i in 0..start_periodic {
                total += two_pow_neg(i) * alpha.rho_exact(x.coord(j + i), y.coord(j + i));
            }
            let mut tail = BigRational::zero();
            for i in start_periodic..start_periodic + p {
                tail += two_pow_neg(i) * alpha.rho_exact(x.coord(j + i), y.coord(j + i));
            }
            total += tail * &geo;
            if two_sided {
                // Coordinates below 0 are purely periodic with period dividing p.
                let first_periodic = j + 1;
                for i in 1..first_periodic {
                    total += two_pow_neg(i) * alpha.rho_exact(x.coord(j - i), y.coord(j - i));
                }
                let mut tail = BigRational::zero();
                for i in first_periodic..first_periodic + p {
                    tail += two_pow_neg(i) * alpha.rho_exact(x.coord(j - i), y.coord(j - i));
                }
                total += tail * &geo;
            }
            Ok(rational_interval(&total))
        }
    }
}

/// `d(x, y)`.
pub fn distance(x: &PointRep, y: &PointRep, sys: &ShiftSystem) -> Result<Interval> {
    x.check(sys)?;
    y.check(sys)?;
    shifted_distance(x, y, 0, sys)
}

/// Bowen distance `d_n(x, y) = max_{0 <= j < n} d(T^j x, T^j y)`.
pub fn bowen_distance(x: &PointRep, y: &PointRep, n: u64, sys: &ShiftSystem) -> Result<Interval> {
    if n == 0 {
        return Err(invalid("Bowen order must be positive"));
    }
    x.check(sys)?;
    y.check(sys)?;
    let mut acc = Interval::point(0.0);
    for j in 0..n {
        acc = acc.max(shifted_distance(x, y, j, sys)?);
    }
    Ok(acc)
}

/// Weighted-sum distance between two words placed at coordinate `base`,
/// with unknown coordinates outside the words. Returns a certified enclosure
/// of `d(T^j x, T^j y)` over all completions, truncated at `window`.
pub fn weighted_word_distance(
    x: &[u8],
    y: &[u8],
    base: i64,
    j: i64,
    sys: &ShiftSystem,
    window: u32,
) -> Interval {
    let alpha = sys.alphabet();
    let two_sided = sys.sidedness() == Sidedness::TwoSided;
    let max_rho = alpha.max_rho();
    let lo_idx = if two_sided { -(window as i64) + 1 } else { 0 };
    let mut acc = Interval::point(0.0);
    let mut unknown = 0.0f64;
    for i in lo_idx..window as i64 {
        let c = j + i - base;
        let w = libm::ldexp(1.0, -(i.unsigned_abs() as i32));
        if c >= 0 && (c as usize) < x.len() && (c as usize) < y.len() {
            acc = acc + alpha.rho(x[c as usize], y[c as usize]) * w;
        } else {
            unknown += w * max_rho;
        }
    }
    let tail = if two_sided { 2.0 } else { 1.0 } * libm::ldexp(1.0, -(window as i32) + 1) * max_rho;
    acc.widen((unknown + tail).next_up())
}
