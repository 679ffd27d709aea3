use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Error, Result};
use crate::numeric::{decimal_rational, ln_rational, rational_to_f64};
use crate::symbolic::{CylinderSet, ShiftSystem, Word};

/// `p/q` as a rational.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureModel {
    Bernoulli { p: Vec<BigRational> },
    Markov { pi: Vec<BigRational>, p: Vec<Vec<BigRational>> },
    /// `(1/n) sum_{j<n} delta_{T^j w}`, windows read inside `word`.
    Empirical { word: Word, n: usize },
}

fn check_probability_vector(p: &[BigRational]) -> Result<()> {
    if p.iter().any(|x| x.is_negative()) {
        return Err(invalid("probabilities must be nonnegative"));
    }
    let s: BigRational = p.iter().sum();
    if s != BigRational::one() {
        return Err(invalid("probabilities must sum to 1"));
    }
    Ok(())
}

fn to_decimal_vec(p: &[f64]) -> Result<Vec<BigRational>> {
    if p.iter().any(|x| !x.is_finite()) {
        return Err(invalid("probabilities must be finite"));
    }
    let mut r: Vec<BigRational> = p.iter().map(|&x| decimal_rational(x)).collect();
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > 1e-12 {
        return Err(invalid("probabilities must sum to 1 within 1e-12"));
    }
    // Absorb a sub-1e-12 decimal discrepancy into the largest entry.
    let total: BigRational = r.iter().sum();
    if total != BigRational::one() {
        let i = (0..r.len()).max_by(|&a, &b| r[a].cmp(&r[b])).unwrap_or(0);
        r[i] = &r[i] + (BigRational::one() - total);
    }
    Ok(r)
}

impl MeasureModel {
    pub fn bernoulli(p: Vec<BigRational>) -> Result<Self> {
        if p.is_empty() {
            return Err(invalid("empty probability vector"));
        }
        check_probability_vector(&p)?;
        Ok(MeasureModel::Bernoulli { p })
    }

    /// Bernoulli measure from decimal doubles (`0.8` is read as `4/5`).
    pub fn bernoulli_f64(p: &[f64]) -> Result<Self> {
        MeasureModel::bernoulli(to_decimal_vec(p)?)
    }

    pub fn uniform(m: usize) -> Self {
        MeasureModel::Bernoulli { p: vec![ratio(1, m as i64); m] }
    }

    /// Markov measure with its stationary vector solved exactly.
    pub fn markov(p: Vec<Vec<BigRational>>) -> Result<Self> {
        let m = p.len();
        if m == 0 || p.iter().any(|r| r.len() != m) {
            return Err(invalid("transition matrix must be square and nonempty"));
        }
        for row in &p {
            check_probability_vector(row)?;
        }
        if !irreducible(&p) {
            return Err(invalid("transition matrix must be irreducible"));
        }
        let pi = stationary(&p)?;
        Ok(MeasureModel::Markov { pi, p })
    }

    pub fn markov_f64(p: &[Vec<f64>]) -> Result<Self> {
        MeasureModel::markov(p.iter().map(|r| to_decimal_vec(r)).collect::<Result<_>>()?)
    }

    /// Markov measure with a caller-supplied stationary vector, checked exactly.
    pub fn markov_with_stationary(pi: Vec<BigRational>, p: Vec<Vec<BigRational>>) -> Result<Self> {
        let solved = MeasureModel::markov(p)?;
        if let MeasureModel::Markov { pi: s, .. } = &solved {
            if s != &pi {
                return Err(invalid("supplied vector is not stationary"));
            }
        }
        Ok(solved)
    }

    pub fn empirical(word: Word, n: usize) -> Result<Self> {
        if n == 0 || n > word.len() {
            return Err(invalid("empirical window count must be in 1..=len(word)"));
        }
        Ok(MeasureModel::Empirical { word, n })
    }

    /// The shipped two-state chain `P = [[0.9, 0.1], [0.1, 0.9]]`.
    pub fn shipped_markov() -> Self {
        MeasureModel::markov(vec![vec![ratio(9, 10), ratio(1, 10)], vec![ratio(1, 10), ratio(9, 10)]])
            .expect("valid chain")
    }

    pub fn alphabet_size(&self) -> Option<usize> {
        match self {
            MeasureModel::Bernoulli { p } => Some(p.len()),
            MeasureModel::Markov { p, .. } => Some(p.len()),
            MeasureModel::Empirical { .. } => None,
        }
    }

    pub fn is_invariant(&self) -> bool {
        !matches!(self, MeasureModel::Empirical { .. })
    }

    /// Check that the measure lives on `sys`.
    pub fn check_support(&self, sys: &ShiftSystem) -> Result<()> {
        let m = sys.m();
        let bad = || Error::InvalidParameter("measure is not supported on the system".to_string());
        match self {
            MeasureModel::Bernoulli { p } => {
                if p.len() != m {
                    return Err(invalid("measure alphabet size differs from the system"));
                }
                for a in 0..m {
                    for b in 0..m {
                        if !p[a].is_zero() && !p[b].is_zero() && !sys.allows(a as u8, b as u8) {
                            return Err(bad());
                        }
                    }
                }
            }
            MeasureModel::Markov { p, .. } => {
                if p.len() != m {
                    return Err(invalid("measure alphabet size differs from the system"));
                }
                for a in 0..m {
                    for b in 0..m {
                        if !p[a][b].is_zero() && !sys.allows(a as u8, b as u8) {
                            return Err(bad());
                        }
                    }
                }
            }
            MeasureModel::Empirical { word, .. } => sys.check_word(word)?,
        }
        Ok(())
    }

    /// Mass of the word placed at coordinate 0.
    pub fn word_mass(&self, w: &[u8]) -> BigRational {
        match self {
            MeasureModel::Bernoulli { p } => w.iter().map(|&a| &p[a as usize]).product(),
            MeasureModel::Markov { pi, p } => match w.first() {
                None => BigRational::one(),
                Some(&a) => {
                    let mut acc = pi[a as usize].clone();
                    for t in w.windows(2) {
                        acc *= &p[t[0] as usize][t[1] as usize];
                    }
                    acc
                }
            },
            MeasureModel::Empirical { word, n } => {
                let hits = (0..*n).filter(|&j| word.get(j..j + w.len()) == Some(w)).count();
                BigRational::new((hits as i64).into(), (*n as i64).into())
            }
        }
    }

    /// Natural log of the word mass in floating point.
    pub fn ln_word_mass(&self, w: &[u8]) -> f64 {
        match self {
            MeasureModel::Bernoulli { p } => w.iter().map(|&a| ln_rational(&p[a as usize])).sum(),
            MeasureModel::Markov { pi, p } => match w.first() {
                None => 0.0,
                Some(&a) => {
                    ln_rational(&pi[a as usize])
                        + w.windows(2).map(|t| ln_rational(&p[t[0] as usize][t[1] as usize])).sum::<f64>()
                }
            },
            MeasureModel::Empirical { .. } => ln_rational(&self.word_mass(w)),
        }
    }

    /// `mu(C)`. Invariant measures ignore the base; empirical measures read
    /// windows at `j + base`.
    pub fn cylinder_mass(&self, c: &CylinderSet, sys: &ShiftSystem) -> Result<BigRational> {
        sys.check_word(&c.word)?;
        match self {
            MeasureModel::Empirical { word, n } => {
                if c.word.is_empty() {
                    return Ok(BigRational::one());
                }
                if c.base < 0 || c.base as usize + *n - 1 + c.word.len() > word.len() {
                    return Err(invalid("empirical windows exceed the orbit word"));
                }
                let b = c.base as usize;
                let hits = (0..*n).filter(|&j| word[j + b..j + b + c.word.len()] == c.word[..]).count();
                Ok(BigRational::new((hits as i64).into(), (*n as i64).into()))
            }
            _ => Ok(self.word_mass(&c.word)),
        }
    }

    /// Entropy rate in nats.
    pub fn entropy_rate(&self) -> Result<f64> {
        match self {
            MeasureModel::Bernoulli { p } => Ok(shannon(p)),
            MeasureModel::Markov { pi, p } => {
                Ok(pi.iter().zip(p).map(|(w, row)| rational_to_f64(w) * shannon(row)).sum())
            }
            MeasureModel::Empirical { .. } => Err(Error::UnsupportedMeasure("no entropy rate for empirical measures")),
        }
    }

    /// Block entropy `H_L = -sum_{|w| = L} mu(w) ln mu(w)` in closed form.
    pub fn block_entropy(&self, len: usize) -> Result<f64> {
        if len == 0 {
            return Ok(0.0);
        }
        match self {
            MeasureModel::Bernoulli { p } => Ok(len as f64 * shannon(p)),
            MeasureModel::Markov { pi, .. } => Ok(shannon(pi) + (len - 1) as f64 * self.entropy_rate()?),
            MeasureModel::Empirical { word, n } => {
                if n + len - 1 > word.len() {
                    return Err(invalid("empirical windows exceed the orbit word"));
                }
                let mut windows: Vec<&[u8]> = (0..*n).map(|j| &word[j..j + len]).collect();
                windows.sort_unstable();
                let mut h = 0.0;
                let mut i = 0;
                while i < windows.len() {
                    let mut j = i;
                    while j < windows.len() && windows[j] == windows[i] {
                        j += 1;
                    }
                    let q = (j - i) as f64 / *n as f64;
                    h -= q * libm::log(q);
                    i = j;
                }
                Ok(h)
            }
        }
    }
}

fn shannon(p: &[BigRational]) -> f64 {
    let s: f64 = p.iter().filter(|x| !x.is_zero()).map(|x| rational_to_f64(x) * ln_rational(x)).sum();
    // `0 - s` rather than `-s`, so a point mass gives +0.
    0.0 - s
}

fn irreducible(p: &[Vec<BigRational>]) -> bool {
    let m = p.len();
    let reach = |forward: bool| {
        let mut seen = vec![false; m];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(a) = stack.pop() {
            for b in 0..m {
                let e = if forward { &p[a][b] } else { &p[b][a] };
                if !e.is_zero() && !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach(true) && reach(false)
}

/// Solve `pi P = pi`, `sum pi = 1` exactly.
fn stationary(p: &[Vec<BigRational>]) -> Result<Vec<BigRational>> {
    let m = p.len();
    // Rows: (P^T - I) with the last equation replaced by the normalization.
    let mut a: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..m).map(|j| p[j][i].clone()).collect();
            row[i] -= BigRational::one();
            row.push(BigRational::zero());
            row
        })
        .collect();
    a[m - 1] = vec![BigRational::one(); m + 1];
    for col in 0..m {
        let piv = (col..m).find(|&r| !a[r][col].is_zero()).ok_or_else(|| invalid("singular stationary system"))?;
        a.swap(col, piv);
        let inv = BigRational::one() / &a[col][col];
        for k in col..=m {
            a[col][k] = &a[col][k] * &inv;
        }
        for r in 0..m {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in col..=m {
                    let v = &f * &a[col][k];
                    a[r][k] -= v;
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[m].clone()).collect())
}
