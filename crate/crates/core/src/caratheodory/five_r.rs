use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::symbolic::{enumerate_words, BallCenter, BowenBall, CylinderSet, ShiftSystem};

/// Greedy disjoint subfamily of closed Bowen balls with a common radius.
///
/// Balls are visited by increasing order `n` (larger balls first, ties in
/// input order) and kept when disjoint from every ball kept so far.
/// Returns indices into `balls`.
pub fn five_r_disjointify(sys: &ShiftSystem, balls: &[BowenBall]) -> Result<Vec<usize>> {
    if let Some(b) = balls.first() {
        if balls.iter().any(|x| x.eps != b.eps) {
            return Err(invalid("balls must share one radius"));
        }
    }
    let cyl: Vec<CylinderSet> = balls.iter().map(|b| b.cylinder(sys)).collect::<Result<_>>()?;
    let mut order: Vec<usize> = (0..balls.len()).collect();
    order.sort_by_key(|&i| balls[i].n);
    let mut kept: Vec<usize> = Vec::new();
    for i in order {
        if kept.iter().all(|&j| cyl[i].is_disjoint(&cyl[j])) {
            kept.push(i);
        }
    }
    Ok(kept)
}

/// The same closed ball with its radius multiplied by `factor >= 1`.
/// Word centres are re-cut to the (narrower) enlarged window.
pub fn enlarge(sys: &ShiftSystem, ball: &BowenBall, factor: f64) -> Result<BowenBall> {
    if !(factor >= 1.0) {
        return Err(invalid("enlargement factor must be at least 1"));
    }
    let eps = ball.eps * factor;
    let center = match &ball.center {
        BallCenter::Point(p) => BallCenter::Point(p.clone()),
        BallCenter::Word(_) => {
            let c = ball.cylinder(sys)?;
            let w = sys.closed_ball_window(ball.n, eps)?;
            let off = (w.start - c.base) as usize;
            BallCenter::Word(c.word[off..off + w.len].to_vec())
        }
    };
    Ok(BowenBall { center, n: ball.n, eps, closed: true })
}

/// Outcome of checking a 5r subfamily word by word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiveRCheck {
    pub disjoint: bool,
    pub covers: bool,
}

impl FiveRCheck {
    pub fn ok(&self) -> bool {
        self.disjoint && self.covers
    }
}

/// Checks that the kept balls are pairwise disjoint and that their 5-fold
/// enlargements cover every ball of the family, by enumerating all
/// admissible words over the union of the ball windows.
pub fn verify_five_r(sys: &ShiftSystem, balls: &[BowenBall], kept: &[usize], cap: u64) -> Result<FiveRCheck> {
    let cyl: Vec<CylinderSet> = balls.iter().map(|b| b.cylinder(sys)).collect::<Result<_>>()?;
    let big: Vec<CylinderSet> = kept.iter().map(|&i| enlarge(sys, &balls[i], 5.0)?.cylinder(sys)).collect::<Result<_>>()?;
    let mut disjoint = true;
    for (a, &i) in kept.iter().enumerate() {
        for &j in &kept[a + 1..] {
            if !cyl[i].is_disjoint(&cyl[j]) {
                disjoint = false;
            }
        }
    }
    let all = cyl.iter().chain(&big);
    let lo = all.clone().map(|c| c.base).min().unwrap_or(0);
    let hi = all.map(|c| c.base + c.word.len() as i64).max().unwrap_or(0);
    let inside = |c: &CylinderSet, w: &[u8]| {
        let off = (c.base - lo) as usize;
        w[off..off + c.word.len()] == c.word[..]
    };
    let mut covers = true;
    for w in enumerate_words(sys, (hi - lo) as usize, cap)? {
        if cyl.iter().any(|c| inside(c, &w)) && !big.iter().any(|c| inside(c, &w)) {
            covers = false;
            break;
        }
    }
    Ok(FiveRCheck { disjoint, covers })
}

/// Ball centred at a word placed on the ball window.
pub fn word_ball(word: Vec<u8>, n: u64, eps: f64) -> BowenBall {
    BowenBall { center: BallCenter::Word(word), n, eps, closed: true }
}
