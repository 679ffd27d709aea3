//! Closed real intervals with outward rounding.

use core::ops::{Add, Mul};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(v: f64) -> Self {
        Interval { lo: v, hi: v }
    }

    /// Interval around a rounded value, widened by one ulp each way.
    pub fn around(v: f64) -> Self {
        Interval { lo: v.next_down(), hi: v.next_up() }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn max(self, o: Interval) -> Interval {
        Interval { lo: self.lo.max(o.lo), hi: self.hi.max(o.hi) }
    }

    pub fn widen(self, by: f64) -> Interval {
        Interval { lo: self.lo, hi: (self.hi + by).next_up() }
    }

    /// Certain answer to `value < t`, or `None` when the interval straddles `t`.
    pub fn lt(&self, t: f64) -> Option<bool> {
        if self.hi < t {
            Some(true)
        } else if self.lo >= t {
            Some(false)
        } else {
            None
        }
    }

    /// Certain answer to `value <= t`.
    pub fn le(&self, t: f64) -> Option<bool> {
        if self.hi <= t {
            Some(true)
        } else if self.lo > t {
            Some(false)
        } else {
            None
        }
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        let lo = self.lo + o.lo;
        let hi = self.hi + o.hi;
        let lo = if is_exact_sum(self.lo, o.lo, lo) { lo } else { lo.next_down() };
        let hi = if is_exact_sum(self.hi, o.hi, hi) { hi } else { hi.next_up() };
        Interval { lo, hi }
    }
}

/// Multiplication by a nonnegative scalar.
impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, k: f64) -> Interval {
        debug_assert!(k >= 0.0);
        let lo = self.lo * k;
        let hi = self.hi * k;
        let exact = |a: f64, p: f64| k == 0.0 || p / k == a && libm::fma(a, k, -p) == 0.0;
        Interval {
            lo: if exact(self.lo, lo) { lo } else { lo.next_down() },
            hi: if exact(self.hi, hi) { hi } else { hi.next_up() },
        }
    }
}

// Two-sum error check: the rounded sum is exact iff the error term is zero.
fn is_exact_sum(a: f64, b: f64, s: f64) -> bool {
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    err == 0.0
}
