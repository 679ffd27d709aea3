use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{Alphabet, SequenceMetric, SymbolMetric, Word};
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Admissibility {
    Full,
    /// 0/1 transition matrix; `matrix[a][b] = 1` allows `a` followed by `b`.
    Sft(Vec<Vec<u8>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Sidedness {
    OneSided,
    TwoSided,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftSystem {
    alphabet: Alphabet,
    admissibility: Admissibility,
    sidedness: Sidedness,
    metric: SequenceMetric,
}

/// Coordinate window `[start, start + len)` carrying a Bowen ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BallWindow {
    pub start: i64,
    pub len: usize,
}

/// `k(eps) = min{j >= 0 : 2^-j < eps}`. Rejects `eps = 2^-j`.
pub fn scale_index(eps: f64) -> Result<u32> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(invalid("radius must be positive and finite"));
    }
    let k = closed_scale_index(eps);
    if eps <= 1.0 && eps == libm::ldexp(1.0, -(k as i32)) {
        return Err(Error::DyadicRadius(eps));
    }
    Ok(k)
}

/// `min{j >= 0 : 2^-j <= eps}`; the scale of closed balls, defined for every radius.
pub fn closed_scale_index(eps: f64) -> u32 {
    let mut j = 0u32;
    while libm::ldexp(1.0, -(j as i32)) > eps {
        j += 1;
    }
    j
}

impl ShiftSystem {
    pub fn new(
        alphabet: Alphabet,
        admissibility: Admissibility,
        sidedness: Sidedness,
        metric: SequenceMetric,
    ) -> Result<Self> {
        let m = alphabet.size();
        if let Admissibility::Sft(mat) = &admissibility {
            if mat.len() != m || mat.iter().any(|r| r.len() != m) {
                return Err(invalid("transition matrix must be m x m"));
            }
            if mat.iter().flatten().any(|&v| v > 1) {
                return Err(invalid("transition matrix entries must be 0 or 1"));
            }
            for a in 0..m {
                if mat[a].iter().all(|&v| v == 0) {
                    return Err(invalid("transition matrix has an empty row"));
                }
                if mat.iter().all(|r| r[a] == 0) {
                    return Err(invalid("transition matrix has an empty column"));
                }
            }
        }
        if let SequenceMetric::WeightedSum { window } = metric {
            if window == 0 {
                return Err(invalid("truncation window must be positive"));
            }
        }
        Ok(ShiftSystem { alphabet, admissibility, sidedness, metric })
    }

    /// One-sided full shift on `m` symbols with the first-difference metric.
    pub fn full_shift(m: usize) -> Self {
        let a = Alphabet::grid(m, SymbolMetric::Discrete).expect("valid size");
        ShiftSystem::new(a, Admissibility::Full, Sidedness::OneSided, SequenceMetric::FirstDifference)
            .expect("valid system")
    }

    /// One-sided golden-mean shift (no two consecutive 1s).
    pub fn golden_mean() -> Self {
        let a = Alphabet::grid(2, SymbolMetric::Discrete).expect("valid size");
        ShiftSystem::new(
            a,
            Admissibility::Sft(vec![vec![1, 1], vec![1, 0]]),
            Sidedness::OneSided,
            SequenceMetric::FirstDifference,
        )
        .expect("valid system")
    }

    pub fn with_sidedness(mut self, s: Sidedness) -> Self {
        self.sidedness = s;
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn admissibility(&self) -> &Admissibility {
        &self.admissibility
    }

    pub fn sidedness(&self) -> Sidedness {
        self.sidedness
    }

    pub fn metric(&self) -> SequenceMetric {
        self.metric
    }

    pub fn m(&self) -> usize {
        self.alphabet.size()
    }

    pub fn is_full(&self) -> bool {
        match &self.admissibility {
            Admissibility::Full => true,
            Admissibility::Sft(mat) => mat.iter().flatten().all(|&v| v == 1),
        }
    }

    pub fn allows(&self, a: u8, b: u8) -> bool {
        match &self.admissibility {
            Admissibility::Full => true,
            Admissibility::Sft(mat) => mat[a as usize][b as usize] == 1,
        }
    }

    pub fn is_admissible(&self, word: &[u8]) -> bool {
        word.iter().all(|&a| (a as usize) < self.m()) && word.windows(2).all(|w| self.allows(w[0], w[1]))
    }

    pub fn check_word(&self, word: &[u8]) -> Result<()> {
        if self.is_admissible(word) {
            Ok(())
        } else {
            Err(Error::Inadmissible(alloc::format!("word {word:?}")))
        }
    }

    pub fn is_exact_backend(&self) -> bool {
        self.metric == SequenceMetric::FirstDifference
    }

    pub fn require_exact(&self) -> Result<()> {
        if self.is_exact_backend() {
            Ok(())
        } else {
            Err(Error::UnsupportedBackend("operation needs the first-difference metric"))
        }
    }

    fn window_for_scale(&self, n: u64, k: u32) -> BallWindow {
        if k == 0 {
            return BallWindow { start: 0, len: 0 };
        }
        let k = k as u64;
        match self.sidedness {
            Sidedness::OneSided => BallWindow { start: 0, len: (n + k - 1) as usize },
            Sidedness::TwoSided => BallWindow { start: -((k - 1) as i64), len: (n + 2 * k - 2) as usize },
        }
    }

    /// Window of the open ball `B_n(x, eps)` in the exact backend.
    pub fn ball_window(&self, n: u64, eps: f64) -> Result<BallWindow> {
        self.require_exact()?;
        if n == 0 {
            return Err(invalid("Bowen order must be positive"));
        }
        Ok(self.window_for_scale(n, scale_index(eps)?))
    }

    /// Window of the closed ball; defined for every radius.
    pub fn closed_ball_window(&self, n: u64, eps: f64) -> Result<BallWindow> {
        self.require_exact()?;
        if n == 0 {
            return Err(invalid("Bowen order must be positive"));
        }
        if !(eps > 0.0) {
            return Err(invalid("radius must be positive"));
        }
        Ok(self.window_for_scale(n, closed_scale_index(eps)))
    }

    /// Successors of `a` in increasing order.
    pub fn successors(&self, a: u8) -> impl Iterator<Item = u8> + '_ {
        (0..self.m() as u8).filter(move |&b| self.allows(a, b))
    }

    /// `v A^len` style counts: entry `b` is the number of admissible words of
    /// length `len + 1` ending in `b`, starting from weights `init`.
    fn push_forward(&self, init: Vec<BigUint>, len: usize) -> Vec<BigUint> {
        let m = self.m();
        let mut v = init;
        for _ in 0..len {
            let mut next = vec![BigUint::zero(); m];
            for a in 0..m {
                if v[a].is_zero() {
                    continue;
                }
                for b in self.successors(a as u8) {
                    next[b as usize] += &v[a];
                }
            }
            v = next;
        }
        v
    }

    /// Number of admissible words of length `len`.
    pub fn count_words(&self, len: usize) -> BigUint {
        if len == 0 {
            return BigUint::one();
        }
        self.push_forward(vec![BigUint::one(); self.m()], len - 1).into_iter().sum()
    }

    /// Entry `a`: admissible words of length `len` that may precede symbol `a`.
    pub fn left_extension_counts(&self, len: usize) -> Vec<BigUint> {
        let m = self.m();
        if len == 0 {
            return vec![BigUint::one(); m];
        }
        let ends = self.push_forward(vec![BigUint::one(); m], len - 1);
        (0..m)
            .map(|a| (0..m).filter(|&b| self.allows(b as u8, a as u8)).map(|b| ends[b].clone()).sum())
            .collect()
    }

    /// Entry `a`: admissible words of length `len` that may follow symbol `a`.
    pub fn right_extension_counts(&self, len: usize) -> Vec<BigUint> {
        let m = self.m();
        (0..m)
            .map(|a| {
                if len == 0 {
                    return BigUint::one();
                }
                let mut init = vec![BigUint::zero(); m];
                init[a] = BigUint::one();
                self.push_forward(init, len).into_iter().sum()
            })
            .collect()
    }

    /// Some admissible word of length `len` that may follow `a`.
    pub fn some_extension(&self, a: Option<u8>, len: usize) -> Word {
        let mut out = Vec::with_capacity(len);
        let mut last = a;
        for _ in 0..len {
            let next = match last {
                None => 0,
                Some(x) => self.successors(x).next().expect("no dead ends"),
            };
            out.push(next);
            last = Some(next);
        }
        out
    }

    /// Spectral radius of the transition matrix by power iteration.
    pub fn spectral_radius(&self) -> f64 {
        let m = self.m();
        let mut v = vec![1.0f64; m];
        let mut lambda = 0.0;
        for _ in 0..10_000 {
            let mut w = vec![0.0; m];
            for a in 0..m {
                for b in self.successors(a as u8) {
                    w[b as usize] += v[a];
                }
            }
            let norm = w.iter().copied().fold(0.0, f64::max);
            let w: Vec<f64> = w.iter().map(|x| x / norm).collect();
            let diff = w.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            // Average with the previous iterate to damp periodic oscillation.
            v = w.iter().zip(&v).map(|(a, b)| 0.5 * (a + b)).collect();
            let done = diff < 1e-15 && (norm - lambda).abs() < 1e-15;
            lambda = norm;
            if done {
                break;
            }
        }
        lambda
    }
}
