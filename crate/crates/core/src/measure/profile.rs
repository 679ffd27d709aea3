//! Cylinder mass profiles: the multiset of masses of depth-`L` cylinders,
//! grouped into classes of equal mass with multiplicities.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::MeasureModel;
use crate::error::{check_cap, invalid, Result};
use crate::numeric::{binomial, ln_binomial, ln_biguint, ln_rational, log_add_exp, rational_to_f64};
use crate::symbolic::{enumerate_words, ShiftSystem, Word};

/// Depth up to which `ProfileMode::Auto` keeps exact rationals.
pub const EXACT_PROFILE_DEPTH: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileMode {
    Exact,
    Float,
    Auto,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MassClass {
    pub ln_mass: f64,
    pub ln_count: f64,
    /// `(mass, multiplicity)` when computed exactly.
    pub exact: Option<(BigRational, BigUint)>,
}

/// Positive-mass classes sorted by decreasing mass.
#[derive(Debug, Clone, PartialEq)]
pub struct MassProfile {
    pub depth: usize,
    pub classes: Vec<MassClass>,
}

/// A cylinder count, exact when the profile is.
#[derive(Debug, Clone, PartialEq)]
pub struct CountValue {
    pub ln: f64,
    pub exact: Option<BigUint>,
}

impl CountValue {
    pub fn one() -> Self {
        CountValue { ln: 0.0, exact: Some(BigUint::one()) }
    }
}

impl MassProfile {
    pub fn is_exact(&self) -> bool {
        self.classes.iter().all(|c| c.exact.is_some())
    }

    /// Number of positive-mass cylinders.
    pub fn support_size(&self) -> CountValue {
        if self.is_exact() {
            let n: BigUint = self.classes.iter().map(|c| c.exact.as_ref().unwrap().1.clone()).sum();
            return CountValue { ln: ln_biguint(&n), exact: Some(n) };
        }
        CountValue { ln: crate::numeric::log_sum_exp(self.classes.iter().map(|c| c.ln_count)), exact: None }
    }

    /// Fewest cylinders whose total mass exceeds `target` (`strict`) or
    /// reaches it (non-strict). Greedy by mass is optimal for disjoint atoms.
    pub fn min_count(&self, target: &BigRational, strict: bool) -> Result<CountValue> {
        if self.is_exact() {
            self.min_count_exact(target, strict)
        } else {
            self.min_count_float(rational_to_f64(target), strict)
        }
    }

    fn min_count_exact(&self, target: &BigRational, strict: bool) -> Result<CountValue> {
        let mut cum = BigRational::zero();
        let mut count = BigUint::zero();
        let done = |cum: &BigRational| if strict { cum > target } else { cum >= target };
        if done(&cum) {
            return Ok(CountValue { ln: f64::NEG_INFINITY, exact: Some(count) });
        }
        for c in &self.classes {
            let (q, mult) = c.exact.as_ref().expect("exact profile");
            let need = (target - &cum) / q;
            // Smallest t with cum + t q > target (or >=).
            let t = if strict { need.floor().to_integer() + 1 } else { need.ceil().to_integer() };
            let t = t.to_biguint().unwrap_or_default();
            if &t <= mult {
                count += t;
                return Ok(CountValue { ln: ln_biguint(&count), exact: Some(count) });
            }
            count += mult;
            cum += q * BigRational::from_integer(mult.clone().into());
        }
        Err(invalid("mass target not reachable"))
    }

    fn min_count_float(&self, target: f64, strict: bool) -> Result<CountValue> {
        let mut cum = 0.0f64;
        let mut ln_count = f64::NEG_INFINITY;
        if (strict && cum > target) || (!strict && cum >= target) {
            return Ok(CountValue { ln: f64::NEG_INFINITY, exact: None });
        }
        for c in &self.classes {
            let need = target - cum;
            if need < 0.0 || (!strict && need == 0.0) {
                return Ok(CountValue { ln: ln_count, exact: None });
            }
            let ln_t_real = libm::log(need) - c.ln_mass;
            if ln_t_real <= c.ln_count + 1e-12 {
                let t_real = libm::exp(ln_t_real);
                let t = if strict { libm::floor(t_real) + 1.0 } else { libm::ceil(t_real).max(1.0) };
                let ln_t = if t < 1e15 { libm::log(t) } else { ln_t_real };
                if ln_t <= c.ln_count + 1e-12 {
                    return Ok(CountValue { ln: log_add_exp(ln_count, ln_t), exact: None });
                }
            }
            ln_count = log_add_exp(ln_count, c.ln_count);
            cum += libm::exp(c.ln_count + c.ln_mass);
        }
        // Rounding left the target a hair above the accumulated mass.
        Ok(CountValue { ln: ln_count, exact: None })
    }
}

/// Mass profile of depth-`len` cylinders under an invariant measure (or
/// windows at coordinate 0 for an empirical measure).
pub fn mass_profile(
    mu: &MeasureModel,
    sys: &ShiftSystem,
    len: usize,
    mode: ProfileMode,
    cap: u64,
) -> Result<MassProfile> {
    mu.check_support(sys)?;
    let exact = match mode {
        ProfileMode::Exact => true,
        ProfileMode::Float => false,
        ProfileMode::Auto => len <= EXACT_PROFILE_DEPTH,
    };
    let mut classes = match mu {
        MeasureModel::Bernoulli { p } if sys.is_full() => bernoulli_classes(p, len, exact, cap)?,
        MeasureModel::Markov { pi, p } if p.len() == 2 => markov2_classes(pi, p, len, exact),
        MeasureModel::Empirical { word, n } => empirical_classes(word, *n, len)?,
        _ => enumerated_classes(mu, sys, len, exact, cap)?,
    };
    classes.retain(|c| c.ln_mass > f64::NEG_INFINITY || c.exact.as_ref().is_some_and(|e| !e.0.is_zero()));
    if exact {
        classes.sort_by(|a, b| b.exact.as_ref().unwrap().0.cmp(&a.exact.as_ref().unwrap().0));
    } else {
        classes.sort_by(|a, b| b.ln_mass.total_cmp(&a.ln_mass));
    }
    Ok(MassProfile { depth: len, classes })
}

fn class_from(mass: BigRational, mult: BigUint, exact: bool) -> MassClass {
    MassClass {
        ln_mass: ln_rational(&mass),
        ln_count: ln_biguint(&mult),
        exact: if exact { Some((mass, mult)) } else { None },
    }
}

fn bernoulli_classes(p: &[BigRational], len: usize, exact: bool, cap: u64) -> Result<Vec<MassClass>> {
    let m = p.len();
    let n_classes = binomial((len + m - 1) as u64, (m - 1) as u64).to_u64().unwrap_or(u64::MAX);
    check_cap("profile classes", cap, n_classes)?;
    let ln_p: Vec<f64> = p.iter().map(ln_rational).collect();
    let mut out = Vec::new();
    let mut comp = alloc::vec![0usize; m];
    compositions(len, 0, &mut comp, &mut |c| {
        if c.iter().zip(p).any(|(&k, q)| k > 0 && q.is_zero()) {
            return;
        }
        let mut ln_mass = 0.0;
        let mut ln_count = crate::numeric::ln_gamma(len as f64 + 1.0);
        for (i, &k) in c.iter().enumerate() {
            if k > 0 {
                ln_mass += k as f64 * ln_p[i];
            }
            ln_count -= crate::numeric::ln_gamma(k as f64 + 1.0);
        }
        let exact_part = if exact {
            let mass: BigRational = c.iter().zip(p).map(|(&k, q)| num_traits::pow(q.clone(), k)).product();
            let mut mult = BigUint::one();
            let mut rest = len as u64;
            for &k in c {
                mult *= binomial(rest, k as u64);
                rest -= k as u64;
            }
            Some((mass, mult))
        } else {
            None
        };
        out.push(MassClass { ln_mass, ln_count, exact: exact_part });
    });
    Ok(out)
}

fn compositions(total: usize, i: usize, comp: &mut [usize], f: &mut impl FnMut(&[usize])) {
    if i == comp.len() - 1 {
        comp[i] = total;
        f(comp);
        return;
    }
    for k in 0..=total {
        comp[i] = k;
        compositions(total - k, i + 1, comp, f);
    }
}

/// Two-state chains: classes by (first symbol, switches, zeros).
fn markov2_classes(pi: &[BigRational], p: &[Vec<BigRational>], len: usize, exact: bool) -> Vec<MassClass> {
    if len == 0 {
        return alloc::vec![class_from(BigRational::one(), BigUint::one(), exact)];
    }
    let lp: Vec<Vec<f64>> = p.iter().map(|r| r.iter().map(ln_rational).collect()).collect();
    let mut out = Vec::new();
    for a in 0..2usize {
        if pi[a].is_zero() {
            continue;
        }
        let ln_pi = ln_rational(&pi[a]);
        for r in 0..len {
            let (r0, r1) = if a == 0 { (r / 2 + 1, (r + 1) / 2) } else { ((r + 1) / 2, r / 2 + 1) };
            let (n01, n10) = if a == 0 { (r1, r0 - 1) } else { (r1 - 1, r0) };
            for z in r0..=len {
                let o = len - z;
                if o < r1 || (r0 == 0 && z > 0) || (r1 == 0 && o > 0) {
                    continue;
                }
                let (n00, n11) = (z - r0, o - r1);
                let counts = [(0, 0, n00), (0, 1, n01), (1, 0, n10), (1, 1, n11)];
                if counts.iter().any(|&(i, j, k)| k > 0 && p[i][j].is_zero()) {
                    continue;
                }
                let ln_mass = ln_pi + counts.iter().filter(|c| c.2 > 0).map(|&(i, j, k)| k as f64 * lp[i][j]).sum::<f64>();
                let comp = |total: usize, parts: usize| -> (f64, BigUint) {
                    if parts == 0 {
                        (0.0, BigUint::one())
                    } else {
                        let (n, k) = ((total - 1) as u64, (parts - 1) as u64);
                        (ln_binomial(n, k), if exact { binomial(n, k) } else { BigUint::zero() })
                    }
                };
                let (lz, bz) = comp(z, r0);
                let (lo, bo) = comp(o, r1);
                let exact_part = if exact {
                    let mut mass = pi[a].clone();
                    for &(i, j, k) in &counts {
                        mass *= num_traits::pow(p[i][j].clone(), k);
                    }
                    Some((mass, bz * bo))
                } else {
                    None
                };
                out.push(MassClass { ln_mass, ln_count: lz + lo, exact: exact_part });
            }
        }
    }
    out
}

fn empirical_classes(word: &[u8], n: usize, len: usize) -> Result<Vec<MassClass>> {
    if n + len - 1 > word.len() && len > 0 {
        return Err(invalid("empirical windows exceed the orbit word"));
    }
    let mut counts: BTreeMap<&[u8], u64> = BTreeMap::new();
    for j in 0..n {
        *counts.entry(&word[j..j + len]).or_default() += 1;
    }
    let mut by_count: BTreeMap<u64, u64> = BTreeMap::new();
    for &c in counts.values() {
        *by_count.entry(c).or_default() += 1;
    }
    Ok(by_count
        .into_iter()
        .map(|(c, mult)| class_from(BigRational::new((c as i64).into(), (n as i64).into()), mult.into(), true))
        .collect())
}

fn enumerated_classes(mu: &MeasureModel, sys: &ShiftSystem, len: usize, exact: bool, cap: u64) -> Result<Vec<MassClass>> {
    let words: Vec<Word> = enumerate_words(sys, len, cap)?;
    if exact {
        let mut masses: Vec<BigRational> = words.iter().map(|w| mu.word_mass(w)).filter(|q| !q.is_zero()).collect();
        masses.sort();
        let mut out = Vec::new();
        let mut i = 0;
        while i < masses.len() {
            let mut j = i;
            while j < masses.len() && masses[j] == masses[i] {
                j += 1;
            }
            out.push(class_from(masses[i].clone(), BigUint::from((j - i) as u64), true));
            i = j;
        }
        Ok(out)
    } else {
        Ok(words
            .iter()
            .map(|w| MassClass { ln_mass: mu.ln_word_mass(w), ln_count: 0.0, exact: None })
            .filter(|c| c.ln_mass > f64::NEG_INFINITY)
            .collect())
    }
}
