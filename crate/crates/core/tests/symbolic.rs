use mdim_core::symbolic::*;
use mdim_core::Error;
use proptest::prelude::*;

fn pt(pre: &[u8], per: &[u8]) -> PointRep {
    PointRep::new(pre.to_vec(), per.to_vec()).unwrap()
}

fn weighted(m: usize, sided: Sidedness) -> ShiftSystem {
    ShiftSystem::new(
        Alphabet::grid(m, SymbolMetric::Euclidean).unwrap(),
        Admissibility::Full,
        sided,
        SequenceMetric::WeightedSum { window: DEFAULT_WINDOW },
    )
    .unwrap()
}

#[test]
fn bowen_distance_examples() {
    let sys = ShiftSystem::full_shift(2);
    let x = PointRep::constant(0);
    assert_eq!(bowen_distance(&x, &x, 3, &sys).unwrap(), mdim_core::Interval::point(0.0));
    let y = pt(&[1], &[0]);
    assert_eq!(bowen_distance(&x, &y, 3, &sys).unwrap(), mdim_core::Interval::point(1.0));
    let w = weighted(2, Sidedness::OneSided);
    let d = bowen_distance(&PointRep::constant(0), &PointRep::constant(1), 5, &w).unwrap();
    assert_eq!((d.lo, d.hi), (2.0, 2.0));
    let w2 = weighted(2, Sidedness::TwoSided);
    let d = distance(&PointRep::constant(0), &PointRep::constant(1), &w2).unwrap();
    assert_eq!((d.lo, d.hi), (3.0, 3.0));
}

#[test]
fn inadmissible_points_rejected() {
    let g = ShiftSystem::golden_mean();
    let bad = pt(&[], &[1]);
    assert!(matches!(bowen_distance(&bad, &bad, 1, &g), Err(Error::Inadmissible(_))));
    let wrap = pt(&[0], &[1, 0, 1]);
    assert!(wrap.check(&g).is_err());
}

#[test]
fn weighted_distance_matches_direct_sum() {
    // x = 0(10)^∞ vs y = (01)^∞ under the one-sided weighted metric with values {0, 1/2, 1}.
    let sys = weighted(3, Sidedness::OneSided);
    let x = pt(&[2], &[1, 0]);
    let y = pt(&[], &[0, 1]);
    let mut direct = 0.0;
    for i in 0..200i64 {
        let a = sys.alphabet().values()[x.coord(i) as usize];
        let b = sys.alphabet().values()[y.coord(i) as usize];
        direct += libm::ldexp(1.0, -(i as i32)) * (a - b).abs();
    }
    let d = distance(&x, &y, &sys).unwrap();
    assert!(d.lo <= direct + 1e-15 && direct - 1e-15 <= d.hi, "{d:?} vs {direct}");
}

fn brute_ball_depth_check(sys: &ShiftSystem, n: u64, eps: f64) {
    let m = sys.m();
    let cyl_center = PointRep::constant(0);
    let cyl = ball_to_cylinder(&cyl_center, n, eps, sys).unwrap();
    let k = scale_index(eps).unwrap() as usize;
    let len = n as usize + k + 1;
    for w in enumerate_words(sys, len, 1 << 20).unwrap() {
        let y = PointRep::new(w, vec![0]).unwrap();
        let ball = BowenBall { center: BallCenter::Point(cyl_center.clone()), n, eps, closed: false };
        let member = ball.contains(&y, sys).unwrap().unwrap();
        assert_eq!(member, cyl.contains(&y), "m={m} n={n} eps={eps} y={y:?}");
    }
}

#[test]
fn ball_reduction_matches_membership() {
    for m in 1..=3 {
        let sys = ShiftSystem::full_shift(m);
        for n in 1..=4 {
            for eps in [0.3, 0.6, 0.15] {
                brute_ball_depth_check(&sys, n, eps);
            }
        }
    }
    brute_ball_depth_check(&ShiftSystem::golden_mean(), 3, 0.3);
}

#[test]
fn ball_to_cylinder_examples() {
    let sys = ShiftSystem::full_shift(2);
    let c = PointRep::constant(0);
    assert_eq!(ball_to_cylinder(&c, 3, 0.3, &sys).unwrap().depth(), 4);
    assert_eq!(ball_to_cylinder(&c, 1, 0.6, &sys).unwrap().depth(), 1);
    assert_eq!(ball_to_cylinder(&c, 1, 1.5, &sys).unwrap().depth(), 0);
    assert_eq!(ball_to_cylinder(&c, 4, 1.5, &sys).unwrap().depth(), 0);
    assert!(matches!(ball_to_cylinder(&c, 1, 0.25, &sys), Err(Error::DyadicRadius(_))));
    let w = weighted(2, Sidedness::OneSided);
    assert!(matches!(ball_to_cylinder(&c, 1, 0.3, &w), Err(Error::UnsupportedBackend(_))));
    let two = ShiftSystem::full_shift(2).with_sidedness(Sidedness::TwoSided);
    let cyl = ball_to_cylinder(&c, 3, 0.3, &two).unwrap();
    assert_eq!((cyl.base, cyl.depth()), (-1, 5));
}

#[test]
fn two_sided_ball_matches_membership() {
    let sys = ShiftSystem::full_shift(2).with_sidedness(Sidedness::TwoSided);
    let center = PointRep::constant(0);
    for n in 1..=3u64 {
        for eps in [0.3, 0.6, 0.15] {
            let cyl = ball_to_cylinder(&center, n, eps, &sys).unwrap();
            // Points differing from 0^Z on a finite set of coordinates in [-4, n+4).
            let lo = -4i64;
            let span = (n as i64 + 8) as u32;
            for mask in 0u64..(1 << span) {
                let y: Vec<i64> = (0..span as i64).filter(|i| mask >> i & 1 == 1).map(|i| lo + i).collect();
                let dn = (0..n as i64)
                    .map(|j| y.iter().map(|&i| (i - j).unsigned_abs()).min().map_or(0.0, |d| libm::ldexp(1.0, -(d as i32))))
                    .fold(0.0, f64::max);
                let inside = y.iter().all(|&i| i < cyl.base || i >= cyl.base + cyl.depth() as i64);
                assert_eq!(dn < eps, inside, "n={n} eps={eps} ones={y:?}");
            }
        }
    }
}

#[test]
fn enumerate_words_examples() {
    assert_eq!(enumerate_words(&ShiftSystem::full_shift(2), 3, 100).unwrap().len(), 8);
    let g = enumerate_words(&ShiftSystem::golden_mean(), 3, 100).unwrap();
    assert_eq!(g.len(), 5);
    assert!(g.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(enumerate_words(&ShiftSystem::full_shift(3), 0, 100).unwrap(), vec![Vec::<u8>::new()]);
    assert!(matches!(
        enumerate_words(&ShiftSystem::full_shift(2), 10, 100),
        Err(Error::CapExceeded { what: "enumeration", cap: 100, .. })
    ));
}

#[test]
fn symbol_metrics_are_metrics() {
    for metric in [SymbolMetric::Discrete, SymbolMetric::Euclidean] {
        let a = Alphabet::new(vec![0.0, 0.3, 0.7, 1.0], metric).unwrap();
        for x in 0..4u8 {
            for y in 0..4u8 {
                assert_eq!(a.rho_exact(x, y), a.rho_exact(y, x));
                assert_eq!(num_traits::Zero::is_zero(&a.rho_exact(x, y)), x == y);
                for z in 0..4u8 {
                    assert!(a.rho_exact(x, z) <= a.rho_exact(x, y) + a.rho_exact(y, z));
                }
            }
        }
    }
    assert!(Alphabet::new(vec![0.5, 0.2], SymbolMetric::Discrete).is_err());
}

fn arb_point(m: u8) -> impl Strategy<Value = PointRep> {
    (prop::collection::vec(0..m, 0..4), prop::collection::vec(0..m, 1..4))
        .prop_map(|(pre, per)| PointRep::new(pre, per).unwrap())
}

fn systems() -> Vec<ShiftSystem> {
    vec![
        ShiftSystem::full_shift(3),
        ShiftSystem::full_shift(3).with_sidedness(Sidedness::TwoSided),
        weighted(3, Sidedness::OneSided),
        weighted(3, Sidedness::TwoSided),
    ]
}

proptest! {
    #[test]
    fn metric_axioms(x in arb_point(3), y in arb_point(3), z in arb_point(3)) {
        for sys in systems() {
            let dxy = distance(&x, &y, &sys).unwrap();
            let dyx = distance(&y, &x, &sys).unwrap();
            let dxz = distance(&x, &z, &sys).unwrap();
            let dyz = distance(&y, &z, &sys).unwrap();
            prop_assert_eq!(dxy, dyx);
            prop_assert!(dxz.lo <= dxy.hi + dyz.hi);
            // One-sided systems only see coordinates from 0 on.
            let from = if sys.sidedness() == Sidedness::TwoSided { -12 } else { 0 };
            let same = (from..30).all(|i| x.coord(i) == y.coord(i));
            prop_assert_eq!(dxy.hi == 0.0, same);
        }
    }

    #[test]
    fn bowen_distance_monotone_in_n(x in arb_point(3), y in arb_point(3), n in 1u64..6) {
        for sys in systems() {
            let a = bowen_distance(&x, &y, n, &sys).unwrap();
            let b = bowen_distance(&x, &y, n + 1, &sys).unwrap();
            prop_assert!(a.lo <= b.lo && a.hi <= b.hi);
        }
    }

    #[test]
    fn balls_nest(x in arb_point(2), n in 1u64..5, i in 0usize..3, j in 0usize..3) {
        let radii = [0.15, 0.3, 0.6];
        let (e1, e2) = (radii[i.min(j)], radii[i.max(j)]);
        for sys in [ShiftSystem::full_shift(2), ShiftSystem::full_shift(2).with_sidedness(Sidedness::TwoSided)] {
            let small = ball_to_cylinder(&x, n, e1, &sys).unwrap();
            let big = ball_to_cylinder(&x, n, e2, &sys).unwrap();
            prop_assert!(small.is_subset_of(&big));
            let longer = ball_to_cylinder(&x, n + 1, e1, &sys).unwrap();
            prop_assert!(longer.is_subset_of(&small));
        }
    }
}
