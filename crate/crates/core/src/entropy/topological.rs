use alloc::vec::Vec;

use super::{separated_count, EntropyEstimate, Mode, QuantityId, Region};
use crate::error::{invalid, Result};
use crate::numeric::{extrapolate, ln_biguint, Extrapolation};
use crate::symbolic::ShiftSystem;
use crate::Interval;

pub(crate) fn is_irreducible(sys: &ShiftSystem) -> bool {
    let m = sys.m();
    let reach = |forward: bool| {
        let mut seen = alloc::vec![false; m];
        let mut stack = alloc::vec![0u8];
        seen[0] = true;
        while let Some(a) = stack.pop() {
            for b in 0..m as u8 {
                let e = if forward { sys.allows(a, b) } else { sys.allows(b, a) };
                if e && !seen[b as usize] {
                    seen[b as usize] = true;
                    stack.push(b);
                }
            }
        }
        seen.iter().all(|&s| s)
    };
    reach(true) && reach(false)
}

/// `h_top(T, Z, d, eps) = limsup (1/n) ln s_n`.
pub fn eps_topological_entropy(
    sys: &ShiftSystem,
    z: Region<'_>,
    eps: f64,
    n_schedule: &[u64],
    cap: u64,
) -> Result<EntropyEstimate> {
    if n_schedule.is_empty() || n_schedule.windows(2).any(|w| w[0] >= w[1]) || n_schedule[0] == 0 {
        return Err(invalid("n schedule must be nonempty, positive, and increasing"));
    }
    let mut trace = Vec::new();
    let mut upper = Vec::new();
    for &n in n_schedule {
        let b = separated_count(sys, z, n, eps, cap)?;
        trace.push((n, ln_biguint(&b.lo) / n as f64));
        upper.push(ln_biguint(&b.hi) / n as f64);
    }
    let q = QuantityId::SepCountRate;
    if !sys.is_exact_backend() {
        let last = trace.len() - 1;
        let mut e = EntropyEstimate::new(q, eps, trace.clone(), extrapolate(&trace, Extrapolation::Affine), Mode::Certified);
        e.bounds = Some(Interval::new(trace[last].1.min(upper[last]), upper[last]));
        e.notes.push("bounds enclose (1/n) ln s_n at the largest n".into());
        return Ok(e);
    }
    let nonempty = match z {
        Region::Whole => true,
        Region::Leaves(l) => !l.is_empty(),
        Region::Points(p) => !p.is_empty(),
    };
    let est = match z {
        Region::Points(_) => EntropyEstimate::new(q, eps, trace, 0.0, Mode::Exact).with_note("finite set of points"),
        _ if !nonempty => EntropyEstimate::new(q, eps, trace, f64::NEG_INFINITY, Mode::Exact).with_note("empty set"),
        _ if eps > 1.0 => EntropyEstimate::new(q, eps, trace, 0.0, Mode::Exact).with_note("radius exceeds the diameter"),
        _ if sys.is_full() => {
            EntropyEstimate::new(q, eps, trace, libm::log(sys.m() as f64), Mode::Exact).with_note("closed form ln m")
        }
        _ if is_irreducible(sys) => EntropyEstimate::new(q, eps, trace, libm::log(sys.spectral_radius()), Mode::Exact)
            .with_note("closed form ln of the spectral radius"),
        _ => {
            let v = extrapolate(&trace, Extrapolation::Affine);
            EntropyEstimate::new(q, eps, trace, v, Mode::Extrapolated)
        }
    };
    Ok(est)
}
