use alloc::vec::Vec;
use num_traits::ToPrimitive;

use super::{ShiftSystem, Word};
use crate::error::{check_cap, Result};

pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 22;

/// All admissible words of length `len` in lexicographic order.
pub fn enumerate_words(sys: &ShiftSystem, len: usize, cap: u64) -> Result<Vec<Word>> {
    let count = sys.count_words(len).to_u64().unwrap_or(u64::MAX);
    check_cap("enumeration", cap, count)?;
    let mut out = Vec::with_capacity(count as usize);
    let mut word = Word::with_capacity(len);
    extend(sys, len, &mut word, &mut out);
    Ok(out)
}

fn extend(sys: &ShiftSystem, len: usize, word: &mut Word, out: &mut Vec<Word>) {
    if word.len() == len {
        out.push(word.clone());
        return;
    }
    for a in 0..sys.m() as u8 {
        if word.last().is_none_or(|&b| sys.allows(b, a)) {
            word.push(a);
            extend(sys, len, word, out);
            word.pop();
        }
    }
}

/// Base-`m` code of a word, most significant symbol first.
pub fn encode_word(word: &[u8], m: usize) -> u64 {
    word.iter().fold(0u64, |acc, &a| acc * m as u64 + a as u64)
}

pub fn decode_word(mut code: u64, m: usize, len: usize) -> Word {
    let mut w = alloc::vec![0u8; len];
    for i in (0..len).rev() {
        w[i] = (code % m as u64) as u8;
        code /= m as u64;
    }
    w
}
