use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::MeasureModel;
use crate::error::{Error, Result};
use crate::symbolic::Word;

/// Independent per-task seed derived from a base seed (SplitMix64 finalizer).
pub fn seed_for(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Cumulative thresholds in units of `2^-64`.
fn thresholds(p: &[BigRational]) -> Vec<u128> {
    let scale = BigRational::from_integer(BigInt::one() << 64usize);
    let mut cum = BigRational::from_integer(0.into());
    p.iter()
        .map(|q| {
            cum += q;
            (&cum * &scale).floor().to_integer().to_u128().unwrap_or(u128::MAX)
        })
        .collect()
}

/// Streaming sampler of a stationary orbit.
pub struct OrbitSampler {
    rng: ChaCha8Rng,
    initial: Vec<u128>,
    rows: Vec<Vec<u128>>,
    last: Option<u8>,
}

impl OrbitSampler {
    pub fn new(mu: &MeasureModel, seed: u64) -> Result<Self> {
        let (initial, rows) = match mu {
            MeasureModel::Bernoulli { p } => (thresholds(p), Vec::new()),
            MeasureModel::Markov { pi, p } => (thresholds(pi), p.iter().map(|r| thresholds(r)).collect()),
            MeasureModel::Empirical { .. } => {
                return Err(Error::UnsupportedMeasure("sampling needs a Bernoulli or Markov measure"))
            }
        };
        Ok(OrbitSampler { rng: ChaCha8Rng::seed_from_u64(seed), initial, rows, last: None })
    }

    fn draw(rng: &mut ChaCha8Rng, t: &[u128]) -> u8 {
        let u = rng.next_u64() as u128;
        // Zero-probability symbols share their predecessor's threshold.
        t.iter().position(|&c| u < c).unwrap_or_else(|| {
            let top = *t.last().unwrap();
            t.iter().position(|&c| c == top).unwrap()
        }) as u8
    }

    pub fn next_symbol(&mut self) -> u8 {
        let t = match (self.last, self.rows.is_empty()) {
            (Some(a), false) => &self.rows[a as usize],
            _ => &self.initial,
        };
        let s = Self::draw(&mut self.rng, t);
        self.last = Some(s);
        s
    }
}

/// Word of length `n` drawn from `mu`, deterministic in `seed`.
pub fn sample_orbit(mu: &MeasureModel, n: usize, seed: u64) -> Result<Word> {
    let mut s = OrbitSampler::new(mu, seed)?;
    Ok((0..n).map(|_| s.next_symbol()).collect())
}
