//! Small numeric helpers: logarithms of big numbers, binomials, and the
//! least-squares fits used to extrapolate finite-n traces.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Natural log of a positive big integer; `-inf` for zero.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return libm::log(x.to_f64().unwrap_or(f64::INFINITY));
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    libm::log(top) + shift as f64 * core::f64::consts::LN_2
}

/// Natural log of a positive rational; `-inf` for zero.
pub fn ln_rational(x: &BigRational) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let n = x.numer().abs().to_biguint().unwrap_or_default();
    let d = x.denom().abs().to_biguint().unwrap_or_default();
    ln_biguint(&n) - ln_biguint(&d)
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        let sign = if x.is_negative() { -1.0 } else { 1.0 };
        sign * libm::exp(ln_rational(&x.abs()))
    })
}

/// Tightest double interval containing `x`; a point when `x` is representable.
pub fn rational_interval(x: &BigRational) -> crate::Interval {
    let f = rational_to_f64(x);
    let back = rational_from_f64(f);
    if &back == x {
        crate::Interval::point(f)
    } else if &back < x {
        crate::Interval::new(f, f.next_up())
    } else {
        crate::Interval::new(f.next_down(), f)
    }
}

/// Exact rational value of a finite double.
pub fn rational_from_f64(v: f64) -> BigRational {
    assert!(v.is_finite(), "non-finite value");
    if v == 0.0 {
        return BigRational::zero();
    }
    let bits = v.to_bits();
    let sign = if bits >> 63 == 1 { -1 } else { 1 };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
    let m = BigInt::from(sign) * BigInt::from(mant);
    if e >= 0 {
        BigRational::from_integer(m << (e as usize))
    } else {
        BigRational::new(m, BigInt::one() << ((-e) as usize))
    }
}

/// Parse a decimal (`"0.8"`, `"-1.5e-3"`) or fraction (`"4/5"`) string exactly.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: alloc::string::String = int.chars().chain(frac.chars()).collect();
    let mut num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    if neg {
        num = -num;
    }
    let scale = exp - frac.len() as i64;
    let ten = BigInt::from(10u8);
    Some(if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    })
}

/// The decimal a double prints as, taken exactly (`0.8` becomes `4/5`).
pub fn decimal_rational(v: f64) -> BigRational {
    parse_rational(&alloc::format!("{v:e}")).expect("finite double prints as a decimal")
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + libm::log1p(libm::exp(lo - hi))
}

pub fn log_sum_exp(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(f64::NEG_INFINITY, log_add_exp)
}

/// Least squares via normal equations with partial pivoting.
/// `rows[i]` are the basis values at sample `i`.
pub fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> Option<Vec<f64>> {
    let p = rows.first()?.len();
    if rows.len() < p || rows.len() != y.len() {
        return None;
    }
    let mut a = vec![vec![0.0; p + 1]; p];
    for (r, &yi) in rows.iter().zip(y) {
        for i in 0..p {
            for j in 0..p {
                a[i][j] += r[i] * r[j];
            }
            a[i][p] += r[i] * yi;
        }
    }
    for col in 0..p {
        let piv = (col..p).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        for row in 0..p {
            if row != col {
                let f = a[row][col] / a[col][col];
                for k in col..=p {
                    a[row][k] -= f * a[col][k];
                }
            }
        }
    }
    Some((0..p).map(|i| a[i][p] / a[i][i]).collect())
}

/// Fit `y = a + b x`; returns `(a, b)`.
pub fn fit_affine(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let rows: Vec<Vec<f64>> = x.iter().map(|&xi| vec![1.0, xi]).collect();
    least_squares(&rows, y).map(|c| (c[0], c[1]))
}

/// Model for extrapolating a finite-n trace to `n -> infinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Extrapolation {
    /// `v(n) = a + b/n`.
    Affine,
    /// `v(n) = a + b/sqrt(n) + c/n`, for counts with central-limit corrections.
    Sqrt,
    /// Report the last value.
    Last,
}

impl Extrapolation {
    fn basis(self, n: f64) -> Vec<f64> {
        match self {
            Extrapolation::Affine => vec![1.0, 1.0 / n],
            Extrapolation::Sqrt => vec![1.0, 1.0 / libm::sqrt(n), 1.0 / n],
            Extrapolation::Last => vec![1.0],
        }
    }
}

/// Number of tail points used by every fit.
pub const FIT_POINTS: usize = 4;

/// Intercept of the fit over the last `FIT_POINTS` entries of `trace`.
/// Falls back to fewer basis functions when the trace is short.
pub fn extrapolate(trace: &[(u64, f64)], model: Extrapolation) -> f64 {
    let tail = &trace[trace.len().saturating_sub(FIT_POINTS)..];
    let last = tail.last().map(|t| t.1).unwrap_or(f64::NAN);
    if tail.iter().any(|t| !t.1.is_finite()) {
        return last;
    }
    let model = match model {
        Extrapolation::Sqrt if tail.len() < 3 => Extrapolation::Affine,
        m => m,
    };
    let model = if tail.len() < 2 { Extrapolation::Last } else { model };
    if model == Extrapolation::Last {
        return last;
    }
    let rows: Vec<Vec<f64>> = tail.iter().map(|t| model.basis(t.0 as f64)).collect();
    let ys: Vec<f64> = tail.iter().map(|t| t.1).collect();
    least_squares(&rows, &ys).map(|c| c[0]).unwrap_or(last)
}

/// Intercepts of fits over every window of `FIT_POINTS` consecutive trace
/// entries (or the single fit when the trace is short). Max and min serve
/// as limsup and liminf surrogates.
pub fn sliding_intercepts(trace: &[(u64, f64)], model: Extrapolation) -> Vec<f64> {
    if trace.len() <= FIT_POINTS {
        return vec![extrapolate(trace, model)];
    }
    (FIT_POINTS..=trace.len()).map(|end| extrapolate(&trace[..end], model)).collect()
}

pub fn max_f64(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

pub fn min_f64(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::INFINITY, f64::min)
}
