use mdim_core::caratheodory::*;
use mdim_core::entropy::Region;
use mdim_core::measure::*;
use mdim_core::symbolic::*;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

const CAP: u64 = 1 << 22;
const EPS: f64 = 0.3;

fn is_prefix(a: &[u8], b: &[u8]) -> bool {
    a.len() <= b.len() && b[..a.len()] == *a
}

fn compatible(a: &[u8], b: &[u8]) -> bool {
    is_prefix(a, b) || is_prefix(b, a)
}

/// Exhaustive cover/packing weight over arbitrary families of cylinders of
/// depth `n + 1` (one-sided, eps = 0.3) meeting `z`, by bitmask.
/// Returns the weight itself, not its log.
fn brute_weight(sys: &ShiftSystem, z: &[Word], depth: usize, n_lo: u64, n_hi: u64, s: f64, pack: bool) -> f64 {
    let mut balls: Vec<(Word, u64)> = Vec::new();
    for n in n_lo..=n_hi {
        for w in enumerate_words(sys, n as usize + 1, CAP).unwrap() {
            if z.iter().any(|x| compatible(x, &w)) {
                balls.push((w, n));
            }
        }
    }
    assert!(balls.len() <= 20, "oracle family too large: {}", balls.len());
    let r = depth.max(n_hi as usize + 1);
    let points: Vec<Word> = enumerate_words(sys, r, CAP).unwrap().into_iter().filter(|w| z.iter().any(|x| is_prefix(x, w))).collect();
    if points.is_empty() {
        return 0.0;
    }
    let mut best = if pack { 0.0 } else { f64::INFINITY };
    for mask in 0u32..1 << balls.len() {
        let chosen: Vec<&(Word, u64)> = (0..balls.len()).filter(|i| mask >> i & 1 == 1).map(|i| &balls[i]).collect();
        let weight: f64 = chosen.iter().map(|b| (-(b.1 as f64) * s).exp()).sum();
        if pack {
            let disjoint = chosen.iter().enumerate().all(|(i, a)| chosen[i + 1..].iter().all(|b| !compatible(&a.0, &b.0)));
            if disjoint {
                best = f64::max(best, weight);
            }
        } else if points.iter().all(|p| chosen.iter().any(|b| is_prefix(&b.0, p))) {
            best = f64::min(best, weight);
        }
    }
    best
}

fn close_ln(dp_ln: f64, w: f64) -> bool {
    if w == 0.0 {
        return dp_ln == f64::NEG_INFINITY;
    }
    (dp_ln - w.ln()).abs() <= 1e-12 * w.ln().abs().max(1.0)
}

fn check_against_brute(sys: &ShiftSystem, depth: usize, pick: &[usize], n_lo: u64, n_hi: u64, s: f64) {
    let words = enumerate_words(sys, depth, CAP).unwrap();
    let z: Vec<Word> = pick.iter().filter(|&&i| i < words.len()).map(|&i| words[i].clone()).collect();
    let leaves = LeafSet::new(sys, depth, &z).unwrap();
    let cover = bowen_weight_ln(sys, Region::Leaves(&leaves), s, n_lo, n_hi, EPS, CAP).unwrap();
    let pack = packing_weight_ln(sys, Region::Leaves(&leaves), s, n_lo, n_hi, EPS, CAP).unwrap();
    let bc = brute_weight(sys, &z, depth, n_lo, n_hi, s, false);
    let bp = brute_weight(sys, &z, depth, n_lo, n_hi, s, true);
    assert!(close_ln(cover, bc), "cover {} vs brute {bc} for z = {z:?}, [{n_lo}, {n_hi}], s = {s}", cover.exp());
    assert!(close_ln(pack, bp), "pack {} vs brute {bp} for z = {z:?}, [{n_lo}, {n_hi}], s = {s}", pack.exp());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tree_dp_matches_exhaustive_full2(pick in prop::collection::vec(0usize..8, 0..4), s in 0.0f64..2.0, lo in 1u64..3) {
        check_against_brute(&ShiftSystem::full_shift(2), 3, &pick, lo, 3, s);
    }

    #[test]
    fn tree_dp_matches_exhaustive_depth5(pick in prop::collection::vec(0usize..16, 1..3), s in 0.0f64..2.0) {
        check_against_brute(&ShiftSystem::full_shift(2), 4, &pick, 2, 4, s);
    }

    #[test]
    fn tree_dp_matches_exhaustive_golden(pick in prop::collection::vec(0usize..5, 0..4), s in 0.0f64..2.0, lo in 1u64..4) {
        check_against_brute(&ShiftSystem::golden_mean(), 3, &pick, lo, 3, s);
    }

    #[test]
    fn tree_dp_matches_exhaustive_full3(pick in prop::collection::vec(0usize..9, 0..3), s in 0.0f64..2.5) {
        check_against_brute(&ShiftSystem::full_shift(3), 2, &pick, 1, 2, s);
    }
}

#[test]
fn whole_space_at_ln2_weighs_two() {
    let sys = ShiftSystem::full_shift(2);
    let s = 2f64.ln();
    let b = bowen_weight(&sys, Region::Whole, s, 2, 8, EPS, CAP).unwrap();
    let p = packing_weight(&sys, Region::Whole, s, 2, 8, EPS, CAP).unwrap();
    assert!((b - 2.0).abs() < 1e-12 && (p - 2.0).abs() < 1e-12, "{b} {p}");
    // Exhaustive check on truncated order windows.
    let z: Vec<Word> = enumerate_words(&sys, 1, CAP).unwrap();
    for (lo, hi) in [(1, 2), (2, 2)] {
        assert!((brute_weight(&sys, &z, 1, lo, hi, s, false) - 2.0).abs() < 1e-12);
        assert!((brute_weight(&sys, &z, 1, lo, hi, s, true) - 2.0).abs() < 1e-12);
    }
}

#[test]
fn above_ln2_cover_weight_shrinks_with_n_max() {
    let sys = ShiftSystem::full_shift(2);
    let s = 2f64.ln() + 0.5;
    let mut prev = f64::INFINITY;
    for n_max in 2..=8 {
        let w = bowen_weight(&sys, Region::Whole, s, 2, n_max, EPS, CAP).unwrap();
        assert!(w < prev);
        prev = w;
    }
    assert!(prev < 0.1, "{prev}");
}

#[test]
fn packing_at_large_s_is_tiny() {
    let sys = ShiftSystem::full_shift(2);
    let w = packing_weight(&sys, Region::Whole, 10.0, 4, 8, EPS, CAP).unwrap();
    assert!(w <= 1e-3 && w <= 2f64.powi(5) * (-40f64).exp() * 1.000001, "{w}");
}

#[test]
fn empty_set_has_zero_weight_and_zero_critical() {
    let sys = ShiftSystem::full_shift(2);
    let empty = LeafSet::empty(&sys, 3);
    assert_eq!(bowen_weight(&sys, Region::Leaves(&empty), 0.5, 1, 4, EPS, CAP).unwrap(), 0.0);
    assert_eq!(packing_weight(&sys, Region::Leaves(&empty), 0.5, 1, 4, EPS, CAP).unwrap(), 0.0);
    let spec = CriticalSpec::new(vec![4, 8]);
    assert_eq!(bowen_critical(&sys, Region::Leaves(&empty), EPS, &spec).unwrap().s_star, 0.0);
    assert_eq!(packing_critical(&sys, Region::Leaves(&empty), EPS, &spec).unwrap().s_star, 0.0);
}

#[test]
fn weights_monotone_in_n() {
    let gm = ShiftSystem::golden_mean();
    let f2 = ShiftSystem::full_shift(2);
    let f3 = ShiftSystem::full_shift(3);
    let half = LeafSet::new(&f2, 2, &[vec![0, 1], vec![1, 1]]).unwrap();
    let gm_leaves = LeafSet::full(&gm, 3, CAP).unwrap();
    let cases: Vec<(&ShiftSystem, Region)> = vec![
        (&f2, Region::Whole),
        (&f3, Region::Whole),
        (&gm, Region::Whole),
        (&f2, Region::Leaves(&half)),
        (&gm, Region::Leaves(&gm_leaves)),
    ];
    let mut violations = 0;
    for (sys, z) in cases {
        for s in [0.2, 0.5, 0.69, 0.9, 1.2] {
            for n_max in [6u64, 9] {
                let mut prev_b = f64::NEG_INFINITY;
                let mut prev_p = f64::INFINITY;
                for n in 1..=n_max {
                    let b = bowen_weight_ln(sys, z, s, n, n_max, EPS, CAP).unwrap();
                    let p = packing_weight_ln(sys, z, s, n, n_max, EPS, CAP).unwrap();
                    violations += (b < prev_b - 1e-12) as usize + (p > prev_p + 1e-12) as usize;
                    prev_b = b;
                    prev_p = p;
                }
            }
        }
    }
    assert_eq!(violations, 0);
}

#[test]
fn jump_moves_by_factor_two() {
    let sys = ShiftSystem::full_shift(2);
    let ln2 = 2f64.ln();
    // Orders pinned to N = N_max, so the window moves with N_max.
    let w = |s: f64, n_max: u64| bowen_weight(&sys, Region::Whole, s, n_max, n_max, EPS, CAP).unwrap();
    assert!(w(ln2 - 0.2, 10) >= 2.0 * w(ln2 - 0.2, 6));
    assert!(w(ln2 + 0.2, 10) <= 0.5 * w(ln2 + 0.2, 6));
}

#[test]
fn criticals_of_full_shifts_are_ln_m() {
    let spec = CriticalSpec::new(vec![3000, 12000]);
    for m in [2usize, 3, 5] {
        let sys = ShiftSystem::full_shift(m);
        let ln_m = (m as f64).ln();
        for cv in [
            bowen_critical(&sys, Region::Whole, EPS, &spec).unwrap(),
            packing_critical(&sys, Region::Whole, EPS, &spec).unwrap(),
        ] {
            assert!(cv.width() < 1e-3, "width {}", cv.width());
            assert!(cv.s_lo <= ln_m && ln_m <= cv.s_hi, "m = {m}: [{}, {}]", cv.s_lo, cv.s_hi);
            assert_eq!(cv.trace.len(), 2);
        }
    }
}

#[test]
fn single_cylinder_and_points() {
    let sys = ShiftSystem::full_shift(3);
    let spec = CriticalSpec::new(vec![2000]);
    let cyl = LeafSet::new(&sys, 4, &[vec![0, 2, 1, 1]]).unwrap();
    let cv = bowen_critical(&sys, Region::Leaves(&cyl), EPS, &spec).unwrap();
    assert!((cv.s_star - 3f64.ln()).abs() < 5e-3, "{}", cv.s_star);
    let pts = [PointRep::constant(0), PointRep::periodic(vec![1, 2]).unwrap()];
    let spec = CriticalSpec::new(vec![200, 400]);
    let b = bowen_critical(&sys, Region::Points(&pts[..1]), EPS, &spec).unwrap();
    let p = packing_critical(&sys, Region::Points(&pts), EPS, &spec).unwrap();
    assert!(b.s_hi < 0.05 && p.s_hi < 0.05, "{} {}", b.s_hi, p.s_hi);
}

#[test]
fn bowen_below_packing_and_inclusion_monotone() {
    let spec = CriticalSpec::new(vec![400]);
    for sys in [ShiftSystem::full_shift(2), ShiftSystem::golden_mean(), ShiftSystem::full_shift(3)] {
        let words = enumerate_words(&sys, 3, CAP).unwrap();
        let small = LeafSet::new(&sys, 3, &words[..1]).unwrap();
        let mid = LeafSet::new(&sys, 3, &words[..words.len() / 2]).unwrap();
        let all = LeafSet::full(&sys, 3, CAP).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for z in [&small, &mid, &all] {
            let b = bowen_critical(&sys, Region::Leaves(z), EPS, &spec).unwrap();
            let p = packing_critical(&sys, Region::Leaves(z), EPS, &spec).unwrap();
            assert!(b.s_lo <= p.s_hi + 1e-12);
            assert!(p.s_hi >= prev - 1e-12);
            prev = p.s_lo;
        }
    }
}

#[test]
fn modified_packing_never_exceeds_undecomposed() {
    let sys = ShiftSystem::full_shift(2);
    let spec = CriticalSpec::new(vec![400]);
    let all = LeafSet::full(&sys, 2, CAP).unwrap();
    let halves = vec![
        LeafSet::new(&sys, 2, &[vec![0, 0], vec![0, 1]]).unwrap(),
        LeafSet::new(&sys, 2, &[vec![1, 0], vec![1, 1]]).unwrap(),
    ];
    let whole = packing_critical(&sys, Region::Leaves(&all), EPS, &spec).unwrap();
    let modified = packing_modified_critical(&sys, &[vec![all.clone()], halves], EPS, &spec).unwrap();
    assert!(modified.s_star <= whole.s_star + 1e-9);
}

fn uniform() -> MeasureModel {
    MeasureModel::uniform(2)
}

/// Minimal cover weight for the uniform measure: the union mass of any
/// family is realised by disjoint cylinders, so only the number of balls
/// per depth matters.
fn uniform_knapsack(n_lo: u64, n_hi: u64, s: f64, target: f64) -> f64 {
    let depths: Vec<u64> = (n_lo..=n_hi).collect();
    let mut best = f64::INFINITY;
    let mut counts = vec![0u64; depths.len()];
    loop {
        let mass: f64 = depths.iter().zip(&counts).map(|(&n, &c)| c as f64 * 0.5f64.powi(n as i32 + 1)).sum();
        if mass <= 1.0 + 1e-12 && mass > target {
            let w: f64 = depths.iter().zip(&counts).map(|(&n, &c)| c as f64 * (-(n as f64) * s).exp()).sum();
            best = best.min(w);
        }
        let mut i = 0;
        loop {
            if i == counts.len() {
                return best;
            }
            counts[i] += 1;
            if counts[i] <= 1 << (depths[i] + 1) {
                break;
            }
            counts[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn katok_cp_uniform_example() {
    let mu = uniform();
    let sys = ShiftSystem::full_shift(2);
    let s = 2f64.ln();
    let v = katok_cp_cover(&mu, &sys, s, 2, 4, EPS, 0.3, CAP).unwrap();
    let oracle = uniform_knapsack(2, 4, s, 0.7);
    assert!(v.exact);
    assert!((v.weight() - oracle).abs() < 1e-12, "{} vs {oracle}", v.weight());
    // Mixed depths reach mass 23/32 at weight 23/16.
    assert!((oracle - 1.4375).abs() < 1e-12);
    // Restricted to the single order N = 2: six depth-3 cylinders.
    let single = katok_cp_cover(&mu, &sys, s, 2, 2, EPS, 0.3, CAP).unwrap();
    assert!((single.weight() - 1.5).abs() < 1e-12);
}

/// Exhaustive katok cover weight over all subsets of depth-2 and depth-3
/// cylinders (orders 1 and 2 at eps = 0.3).
fn brute_katok(mu: &MeasureModel, sys: &ShiftSystem, s: f64, delta: f64) -> f64 {
    let target = BigRational::one() - BigRational::new(((delta * 1000.0).round() as i64).into(), 1000.into());
    let mut balls: Vec<(Word, u64)> = Vec::new();
    for n in 1..=2u64 {
        for w in enumerate_words(sys, n as usize + 1, CAP).unwrap() {
            balls.push((w, n));
        }
    }
    let leaves = enumerate_words(sys, 3, CAP).unwrap();
    let mut best = f64::INFINITY;
    for mask in 0u32..1 << balls.len() {
        let chosen: Vec<&(Word, u64)> = (0..balls.len()).filter(|i| mask >> i & 1 == 1).map(|i| &balls[i]).collect();
        let mut mass = BigRational::zero();
        for l in &leaves {
            if chosen.iter().any(|b| is_prefix(&b.0, l)) {
                mass += mu.word_mass(l);
            }
        }
        if mass > target {
            best = best.min(chosen.iter().map(|b| (-(b.1 as f64) * s).exp()).sum());
        }
    }
    best
}

#[test]
fn katok_cp_matches_exhaustive_on_small_trees() {
    let b82 = MeasureModel::bernoulli(vec![ratio(4, 5), ratio(1, 5)]).unwrap();
    let f2 = ShiftSystem::full_shift(2);
    for (mu, sys) in [(uniform(), &f2), (b82, &f2), (MeasureModel::shipped_markov(), &f2)] {
        for s in [0.1, 0.5, 0.7, 1.3] {
            for delta in [0.05, 0.2, 0.5, 0.9] {
                let v = katok_cp_cover(&mu, sys, s, 1, 2, EPS, delta, CAP).unwrap();
                let b = brute_katok(&mu, sys, s, delta);
                assert!(v.exact);
                assert!((v.weight() - b).abs() <= 1e-12 * b, "s = {s}, delta = {delta}: {} vs {b}", v.weight());
            }
        }
    }
}

#[test]
fn katok_cp_single_ball_and_critical() {
    let mu = uniform();
    let sys = ShiftSystem::full_shift(2);
    // One ball of order N carries mass 1/8 > 1 - 0.9.
    let v = katok_cp_cover(&mu, &sys, 0.8, 2, 2, EPS, 0.9, CAP).unwrap();
    assert!((v.ln_weight + 1.6).abs() < 1e-12);
    let spec = CriticalSpec::new(vec![8, 16, 32]);
    let cv = katok_cp_critical(&mu, &sys, EPS, 0.1, &spec).unwrap();
    assert!((cv.s_star - 2f64.ln()).abs() < 0.05, "{}", cv.s_star);
}

#[test]
fn packing_cp_examples() {
    let mu = uniform();
    let sys = ShiftSystem::full_shift(2);
    let spec = CriticalSpec::new(vec![16, 32]);
    let cv = packing_cp_lim(&mu, &sys, EPS, &[0.2, 0.1], &spec).unwrap();
    assert!((cv.s_star - 2f64.ln()).abs() < 0.05, "{}", cv.s_star);
    assert_eq!(cv.aux.len(), 2);
    let point = MeasureModel::bernoulli(vec![ratio(1, 1), ratio(0, 1)]).unwrap();
    let cv = packing_cp_critical(&point, &sys, EPS, 0.1, &CriticalSpec::new(vec![20, 40])).unwrap();
    assert_eq!(cv.s_star, 0.0);
    assert!(cv.s_hi < 0.2, "{}", cv.s_hi);
    // Larger delta allows lighter decompositions.
    let b82 = MeasureModel::bernoulli(vec![ratio(4, 5), ratio(1, 5)]).unwrap();
    let mut prev = f64::INFINITY;
    for delta in [0.05, 0.2, 0.5, 0.8, 0.95] {
        let v = packing_cp_measure(&b82, &sys, 0.6, 6, 6, EPS, delta, CAP).unwrap();
        assert!(v.ln_weight <= prev + 1e-12);
        prev = v.ln_weight;
    }
}

fn random_family(rng: &mut ChaCha8Rng) -> Vec<BowenBall> {
    let k = 1 + (rng.next_u32() % 12) as usize;
    (0..k)
        .map(|_| {
            let n = 1 + (rng.next_u32() % 4) as u64;
            let word: Word = (0..=n).map(|_| (rng.next_u32() % 2) as u8).collect();
            word_ball(word, n, EPS)
        })
        .collect()
}

#[test]
fn five_r_on_seeded_families() {
    let sys = ShiftSystem::full_shift(2);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut passed = 0;
    for _ in 0..200 {
        let balls = random_family(&mut rng);
        let kept = five_r_disjointify(&sys, &balls).unwrap();
        passed += verify_five_r(&sys, &balls, &kept, CAP).unwrap().ok() as usize;
    }
    assert_eq!(passed, 200);
}

#[test]
fn five_r_small_cases() {
    let sys = ShiftSystem::full_shift(2);
    let one = [word_ball(vec![0, 1, 1], 2, EPS)];
    assert_eq!(five_r_disjointify(&sys, &one).unwrap(), vec![0]);
    let chain = [word_ball(vec![0, 1, 1, 0], 3, EPS), word_ball(vec![0, 1], 1, EPS), word_ball(vec![0, 1, 1], 2, EPS)];
    assert_eq!(five_r_disjointify(&sys, &chain).unwrap(), vec![1]);
    // At eps = 0.03 the 5-fold enlargement has depth 3, so a ball that
    // differs in the first symbol is not covered by it.
    let eps = 0.03;
    let pair = [word_ball(vec![0; 6], 1, eps), word_ball(vec![1; 6], 1, eps)];
    let kept = five_r_disjointify(&sys, &pair).unwrap();
    assert_eq!(kept, vec![0, 1]);
    assert!(verify_five_r(&sys, &pair, &kept, CAP).unwrap().ok());
    let bad = verify_five_r(&sys, &pair, &[0], CAP).unwrap();
    assert!(bad.disjoint && !bad.covers);
}

#[test]
fn five_r_at_a_finer_radius() {
    let sys = ShiftSystem::full_shift(2);
    let eps = 0.03;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let k = 1 + (rng.next_u32() % 12) as usize;
        let balls: Vec<BowenBall> = (0..k)
            .map(|_| {
                let n = 1 + (rng.next_u32() % 4) as u64;
                // Shared prefixes make overlaps common.
                let word: Word = (0..n + 5).map(|i| if i < 3 { 0 } else { (rng.next_u32() % 2) as u8 }).collect();
                word_ball(word, n, eps)
            })
            .collect();
        let kept = five_r_disjointify(&sys, &balls).unwrap();
        assert!(verify_five_r(&sys, &balls, &kept, CAP).unwrap().ok());
    }
}

#[test]
fn generic_set_counts() {
    let mu = MeasureModel::bernoulli(vec![ratio(7, 10), ratio(3, 10)]).unwrap();
    let sys = ShiftSystem::full_shift(2);
    for (len, l, eta, n0) in [(10, 1, 0.1, 3), (12, 2, 0.15, 4), (12, 1, 0.05, 8), (9, 1, 1.0, 1)] {
        let set = generic_leafset(&mu, &sys, len, l, eta, n0, CAP).unwrap();
        let ln = generic_count_ln(&mu, &sys, len, l, eta, n0, CAP).unwrap();
        assert!((ln - (set.len() as f64).ln()).abs() < 1e-9, "{len} {l} {eta}: {} vs {}", set.len(), ln.exp());
        if eta >= 1.0 {
            assert_eq!(set.len(), 1 << len);
        }
        // Packing at the single order whose closed ball has depth L counts leaves.
        let n = len as u64 - 1;
        let spec = CriticalSpec::new(vec![n]);
        let cv = packing_critical(&sys, Region::Leaves(&set), EPS, &spec).unwrap();
        let direct = ln / n as f64;
        assert!(cv.s_lo <= direct + 1e-9 && direct <= cv.s_hi + 1e-9);
    }
}

#[test]
fn generic_binomial_window() {
    let mu = MeasureModel::bernoulli(vec![ratio(7, 10), ratio(3, 10)]).unwrap();
    let sys = ShiftSystem::full_shift(2);
    let h = mu.entropy_rate().unwrap();
    let binom = |k: u64| (0..k).fold(1u64, |acc, i| acc * (20 - i) / (i + 1));
    // Constraining only the full 20-symbol count leaves k ones with k/20
    // within eta of 0.3.
    for (eta, ks) in [(0.1, 4..=8u64), (0.05, 5..=7)] {
        let set = generic_leafset(&mu, &sys, 20, 1, eta, 20, CAP).unwrap();
        let expected: u64 = ks.map(binom).sum();
        assert_eq!(set.len() as u64, expected);
        let (lo, hi) = ((20.0 * (h - 0.1)).exp(), (20.0 * (h + 0.1)).exp());
        assert!(lo <= expected as f64 && expected as f64 <= hi);
    }
}

#[test]
fn generic_packing_entropy_near_entropy_rate() {
    let mu = MeasureModel::bernoulli(vec![ratio(7, 10), ratio(3, 10)]).unwrap();
    let sys = ShiftSystem::full_shift(2);
    let spec = GenericSpec {
        cells: vec![(1, 0.05), (2, 0.05)],
        lengths: vec![100, 200, 300, 400],
        n0: 40,
        extrapolation: mdim_core::numeric::Extrapolation::Affine,
        cap: CAP,
    };
    let e = packing_entropy_generic(&mu, &sys, EPS, &spec).unwrap();
    let h = mu.entropy_rate().unwrap();
    assert!((e.value - h).abs() < 0.1, "{} vs {h}", e.value);
    assert_eq!(e.aux.len(), 2);
    assert!(e.trace.iter().all(|t| t.1.to_f64().is_some()));
}
