use super::{bowen_distance, CylinderSet, PointRep, ShiftSystem, Word};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum BallCenter {
    Point(PointRep),
    /// Center word placed at the ball window (exact backend).
    Word(Word),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BowenBall {
    pub center: BallCenter,
    pub n: u64,
    pub eps: f64,
    pub closed: bool,
}

impl BowenBall {
    /// Membership `d_n(center, y) < eps` (closed: `<= eps`). `None` when the
    /// certified distance straddles the radius.
    pub fn contains(&self, y: &PointRep, sys: &ShiftSystem) -> Result<Option<bool>> {
        match &self.center {
            BallCenter::Point(x) => {
                let d = bowen_distance(x, y, self.n, sys)?;
                Ok(if self.closed { d.le(self.eps) } else { d.lt(self.eps) })
            }
            BallCenter::Word(_) => Ok(Some(self.cylinder(sys)?.contains(y))),
        }
    }

    /// The cylinder equal to this ball in the exact backend.
    pub fn cylinder(&self, sys: &ShiftSystem) -> Result<CylinderSet> {
        let w = if self.closed { sys.closed_ball_window(self.n, self.eps)? } else { sys.ball_window(self.n, self.eps)? };
        let word = match &self.center {
            BallCenter::Point(x) => x.window(w.start, w.len),
            BallCenter::Word(word) => {
                if word.len() < w.len {
                    return Err(invalid("center word shorter than the ball window"));
                }
                word[..w.len].to_vec()
            }
        };
        Ok(CylinderSet { base: w.start, word })
    }
}

/// Open Bowen ball `B_n(x, eps)` as a cylinder (exact backend, non-dyadic radius).
pub fn ball_to_cylinder(center: &PointRep, n: u64, eps: f64, sys: &ShiftSystem) -> Result<CylinderSet> {
    center.check(sys)?;
    let w = sys.ball_window(n, eps)?;
    Ok(CylinderSet { base: w.start, word: center.window(w.start, w.len) })
}

/// Closed Bowen ball as a cylinder; dyadic radii are allowed here.
pub fn closed_ball_to_cylinder(center: &PointRep, n: u64, eps: f64, sys: &ShiftSystem) -> Result<CylinderSet> {
    center.check(sys)?;
    let w = sys.closed_ball_window(n, eps)?;
    Ok(CylinderSet { base: w.start, word: center.window(w.start, w.len) })
}
