//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Run with `cargo test -p mdim --test acceptance`.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use mdim::{execute, write_outputs, ExperimentConfig, ResultsFile, RunOutput, Validated};
use mdim_core::caratheodory::{bowen_weight_ln, five_r_disjointify, packing_weight_ln, verify_five_r, word_ball};
use mdim_core::entropy::{bk_entropy, katok_count, separated_count, separated_count_exact, BkSpec, QuantityId, Region};
use mdim_core::measure::{ratio, CountValue, MeasureModel};
use mdim_core::symbolic::{bowen_distance, enumerate_words, BowenBall, LeafSet, PointRep, ShiftSystem, Word};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

const CAP: u64 = 1 << 22;
const EPS: f64 = 0.3;

type Check = Result<String, String>;

fn config_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/acceptance").join(format!("{name}.json"))
}

/// All cores, but never fewer than four workers so that scheduling order
/// varies even on small machines.
fn parallel_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get()).max(4)
}

/// A config run at full parallelism, kept for the determinism rerun.
struct Run {
    name: String,
    validated: Validated,
    out: RunOutput,
    dir: tempfile::TempDir,
}

fn run_config(name: &str, runs: &mut Vec<Run>) -> Result<ResultsFile, String> {
    let v = ExperimentConfig::from_path(&config_path(name))
        .and_then(|c| c.validate())
        .map_err(|e| format!("{name}: {e}"))?;
    let out = execute(&v, Some(parallel_threads())).map_err(|e| format!("{name}: {e}"))?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    write_outputs(&out, dir.path(), &v.config).map_err(|e| format!("{name}: {e}"))?;
    if !out.results.errors.is_empty() {
        return Err(format!("{name}: {:?}", out.results.errors));
    }
    let res = out.results.clone();
    runs.push(Run { name: name.into(), validated: v, out, dir });
    Ok(res)
}

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Maximum clique by branch and bound with greedy-colouring bounds.
fn max_clique(adj: &[Vec<bool>]) -> usize {
    fn expand(adj: &[Vec<bool>], cands: Vec<usize>, size: usize, best: &mut usize) {
        if cands.is_empty() {
            *best = (*best).max(size);
            return;
        }
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in &cands {
            match classes.iter_mut().find(|c| c.iter().all(|&u| !adj[u][v])) {
                Some(c) => c.push(v),
                None => classes.push(vec![v]),
            }
        }
        let mut order = Vec::new();
        for (i, c) in classes.iter().enumerate() {
            for &v in c {
                order.push((v, i + 1));
            }
        }
        let mut live = cands;
        while let Some((v, colour)) = order.pop() {
            if size + colour <= *best {
                return;
            }
            let next: Vec<usize> = live.iter().copied().filter(|&u| adj[v][u]).collect();
            expand(adj, next, size + 1, best);
            live.retain(|&u| u != v);
        }
    }
    let mut best = 0;
    expand(adj, (0..adj.len()).collect(), 0, &mut best);
    best
}

/// Largest separated subset among eventually constant points over all words of length `len`.
fn brute_separated(sys: &ShiftSystem, n: u64, eps: f64, len: usize) -> usize {
    let pts: Vec<PointRep> = enumerate_words(sys, len, CAP)
        .unwrap()
        .into_iter()
        .map(|w| {
            let tail = *w.last().unwrap();
            PointRep::new(w, vec![tail]).unwrap()
        })
        .collect();
    let adj: Vec<Vec<bool>> = pts
        .iter()
        .map(|x| pts.iter().map(|y| x != y && bowen_distance(x, y, n, sys).unwrap().lo > eps).collect())
        .collect();
    max_clique(&adj)
}

fn exact_combinatorics() -> Check {
    let sys = ShiftSystem::full_shift(2);
    for n in 1..=10u64 {
        let want = (1u64 << (n + 1)).to_string();
        let got = separated_count_exact(&sys, Region::Whole, n, EPS).map_err(|e| e.to_string())?.to_string();
        let bounds = separated_count(&sys, Region::Whole, n, EPS, CAP).map_err(|e| e.to_string())?;
        if got != want || bounds.lo.to_string() != want || bounds.hi.to_string() != want {
            return Err(format!("n = {n}: got {got}, want {want}"));
        }
        if n <= 4 {
            let brute = brute_separated(&sys, n, EPS, n as usize + 2);
            if brute.to_string() != want {
                return Err(format!("n = {n}: brute-force oracle {brute}, want {want}"));
            }
        }
    }
    Ok("2^(n+1) for n = 1..10, oracle agrees for n <= 4".into())
}

fn collapse(runs: &mut Vec<Run>) -> Check {
    let mut worst: Vec<(&str, f64, f64)> =
        vec![("KS/BK", 0.0, 1e-9), ("KATOK_LIM/SHAPIRA", 0.0, 0.03), ("PS", 0.0, 0.15), ("OW_RETURN", 0.0, 0.1)];
    let mut count = 0;
    for (name, mu) in [
        ("collapse_uniform", MeasureModel::uniform(2)),
        ("collapse_b82", MeasureModel::bernoulli(vec![ratio(4, 5), ratio(1, 5)]).unwrap()),
        ("collapse_markov", MeasureModel::shipped_markov()),
    ] {
        let h = mu.entropy_rate().map_err(|e| e.to_string())?;
        let res = run_config(name, runs)?;
        for r in &res.records {
            let e = &r.estimate;
            let slot = match e.quantity {
                QuantityId::KsEps | QuantityId::BkUpper | QuantityId::BkLower => 0,
                QuantityId::KatokUpperLim | QuantityId::KatokLowerLim | QuantityId::ShapiraEps => 1,
                QuantityId::Ps => 2,
                QuantityId::OwReturn => {
                    if e.samples != Some(1000) || e.trace.last().map(|t| t.0) != Some(16) {
                        return Err(format!("{name}: OW run is not 1000 samples ending at n = 16"));
                    }
                    3
                }
                q => return Err(format!("{name}: unexpected quantity {q}")),
            };
            worst[slot].1 = worst[slot].1.max((e.value - h).abs());
            count += 1;
        }
    }
    let detail = worst.iter().map(|(q, err, tol)| format!("{q} {err:.2e} (tol {tol})")).collect::<Vec<_>>().join(", ");
    ensure(count == 72 && worst.iter().all(|(_, err, tol)| err <= tol), format!("{count} values; max errors {detail}"))
}

fn chain_summary(res: &ResultsFile) -> (bool, f64) {
    let ok = res.chains.len() == 1 && res.chains.iter().all(|c| c.passed()) && res.failures.is_empty();
    let min_slack = res.chains.iter().flat_map(|c| c.links.iter().map(|l| l.slack)).fold(f64::INFINITY, f64::min);
    (ok, min_slack)
}

fn first_chain(runs: &mut Vec<Run>) -> Check {
    let mut parts = Vec::new();
    let mut ok = true;
    for name in ["chain31_uniform", "chain31_b82", "chain31_markov"] {
        let res = run_config(name, runs)?;
        let (pass, slack) = chain_summary(&res);
        ok &= pass;
        parts.push(format!("{name} min slack {slack:.4}"));
    }
    ensure(ok, parts.join(", "))
}

fn second_chain(runs: &mut Vec<Run>) -> Check {
    let mut parts = Vec::new();
    let mut ok = true;
    for name in ["chain32_uniform", "chain32_b82", "chain32_markov", "chain32_b73"] {
        let res = run_config(name, runs)?;
        let (pass, slack) = chain_summary(&res);
        ok &= pass;
        parts.push(format!("{name} min slack {slack:.4}"));
        if name == "chain32_b73" {
            let h = MeasureModel::bernoulli(vec![ratio(7, 10), ratio(3, 10)]).unwrap().entropy_rate().unwrap();
            let generic = res.chains[0]
                .nodes()
                .into_iter()
                .find(|n| n.quantity == QuantityId::PackingGeneric)
                .map(|n| n.value)
                .ok_or("no generic-set node")?;
            ok &= (generic - h).abs() <= 0.1;
            parts.push(format!("generic {generic:.4} vs {h:.4}"));
        }
    }
    ensure(ok, parts.join(", "))
}

fn is_prefix(a: &[u8], b: &[u8]) -> bool {
    a.len() <= b.len() && b[..a.len()] == *a
}

fn compatible(a: &[u8], b: &[u8]) -> bool {
    is_prefix(a, b) || is_prefix(b, a)
}

/// Exhaustive cover (`pack = false`) or packing weight over every family of
/// depth-`n + 1` cylinders meeting `z`, for `n` in `[n_lo, n_hi]`.
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
    let points: Vec<Word> =
        enumerate_words(sys, r, CAP).unwrap().into_iter().filter(|w| z.iter().any(|x| is_prefix(x, w))).collect();
    if points.is_empty() {
        return 0.0;
    }
    let mut best = if pack { 0.0 } else { f64::INFINITY };
    for mask in 0u32..1 << balls.len() {
        let chosen: Vec<&(Word, u64)> = (0..balls.len()).filter(|i| mask >> i & 1 == 1).map(|i| &balls[i]).collect();
        let weight: f64 = chosen.iter().map(|b| (-(b.1 as f64) * s).exp()).sum();
        if pack {
            if chosen.iter().enumerate().all(|(i, a)| chosen[i + 1..].iter().all(|b| !compatible(&a.0, &b.0))) {
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

fn criticals(runs: &mut Vec<Run>) -> Check {
    let mut parts = Vec::new();
    let mut ok = true;
    for m in [2usize, 3, 5] {
        let res = run_config(&format!("criticals_full{m}"), runs)?;
        let ln_m = (m as f64).ln();
        let mut widest = 0.0f64;
        for r in &res.records {
            let b = r.estimate.bounds.ok_or("critical without a bracket")?;
            widest = widest.max(b.hi - b.lo);
            ok &= b.lo <= ln_m && ln_m <= b.hi && b.hi - b.lo < 1e-3;
        }
        ok &= res.records.len() == 2;
        parts.push(format!("m = {m} width {widest:.1e}"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0xd9);
    let systems = [ShiftSystem::full_shift(2), ShiftSystem::full_shift(3), ShiftSystem::golden_mean()];
    let mut cases = 0;
    for _ in 0..60 {
        let sys = &systems[(rng.next_u32() % 3) as usize];
        let depth = 1 + (rng.next_u32() % 5) as usize;
        let words = enumerate_words(sys, depth, CAP).map_err(|e| e.to_string())?;
        let k = (rng.next_u32() % 5) as usize;
        let z: Vec<Word> = (0..k).map(|_| words[rng.next_u32() as usize % words.len()].clone()).collect();
        let n_hi = depth.saturating_sub(1).max(1) as u64;
        let n_lo = n_hi.saturating_sub((rng.next_u32() % 3) as u64).max(1);
        let s = (rng.next_u32() % 2000) as f64 / 1000.0;
        let leaves = LeafSet::new(sys, depth, &z).map_err(|e| e.to_string())?;
        let cover = bowen_weight_ln(sys, Region::Leaves(&leaves), s, n_lo, n_hi, EPS, CAP).map_err(|e| e.to_string())?;
        let pack = packing_weight_ln(sys, Region::Leaves(&leaves), s, n_lo, n_hi, EPS, CAP).map_err(|e| e.to_string())?;
        let bc = brute_weight(sys, &z, depth, n_lo, n_hi, s, false);
        let bp = brute_weight(sys, &z, depth, n_lo, n_hi, s, true);
        if !close_ln(cover, bc) || !close_ln(pack, bp) {
            return Err(format!("tree DP differs from exhaustive search: z = {z:?}, N in [{n_lo}, {n_hi}], s = {s}"));
        }
        cases += 1;
    }
    parts.push(format!("tree DP = exhaustive on {cases} seeded cases, depth <= 5"));
    ensure(ok, parts.join(", "))
}

fn five_r() -> Check {
    let sys = ShiftSystem::full_shift(2);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut passed = 0;
    for _ in 0..200 {
        let k = 1 + (rng.next_u32() % 12) as usize;
        let balls: Vec<BowenBall> = (0..k)
            .map(|_| {
                let n = 1 + (rng.next_u32() % 4) as u64;
                let word: Word = (0..=n).map(|_| (rng.next_u32() % 2) as u8).collect();
                word_ball(word, n, EPS)
            })
            .collect();
        let kept = five_r_disjointify(&sys, &balls).map_err(|e| e.to_string())?;
        passed += verify_five_r(&sys, &balls, &kept, CAP).map_err(|e| e.to_string())?.ok() as usize;
    }
    ensure(passed == 200, format!("{passed}/200 families disjoint and covered"))
}

fn measures() -> Vec<MeasureModel> {
    vec![
        MeasureModel::uniform(2),
        MeasureModel::bernoulli(vec![ratio(4, 5), ratio(1, 5)]).unwrap(),
        MeasureModel::shipped_markov(),
        MeasureModel::bernoulli(vec![ratio(7, 10), ratio(3, 10)]).unwrap(),
    ]
}

fn monotonicity(runs: &[Run]) -> Check {
    let mut checked = 0usize;
    let mut violations = Vec::new();
    let f2 = ShiftSystem::full_shift(2);
    let f3 = ShiftSystem::full_shift(3);
    let gm = ShiftSystem::golden_mean();
    for (label, sys) in [("full2", &f2), ("full3", &f3), ("golden", &gm)] {
        for s in [0.2, 0.5, 0.69, 0.9, 1.2] {
            for n_max in [6u64, 9, 12] {
                let mut prev = (f64::NEG_INFINITY, f64::INFINITY);
                for n in 1..=n_max {
                    let b = bowen_weight_ln(sys, Region::Whole, s, n, n_max, EPS, CAP).map_err(|e| e.to_string())?;
                    let p = packing_weight_ln(sys, Region::Whole, s, n, n_max, EPS, CAP).map_err(|e| e.to_string())?;
                    if b < prev.0 || p > prev.1 {
                        violations.push(format!("weights {label} s = {s} N = {n}"));
                    }
                    prev = (b, p);
                    checked += 2;
                }
            }
        }
    }
    let deltas = [0.05, 0.1, 0.2, 0.3, 0.5, 0.8];
    let eps = [0.07, 0.15, 0.3, 0.6];
    for (i, mu) in measures().iter().enumerate() {
        for n in [1u64, 5, 20, 60] {
            let mut grid = Vec::new();
            for &e in &eps {
                let row = deltas
                    .iter()
                    .map(|&d| katok_count(mu, &f2, n, e, d, CAP))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| e.to_string())?;
                grid.push(row);
            }
            for (a, row) in grid.iter().enumerate() {
                for (b, c) in row.iter().enumerate() {
                    // Exact when both counts are; otherwise compare logs.
                    let le = |x: &CountValue, y: &CountValue| match (&x.exact, &y.exact) {
                        (Some(a), Some(b)) => a <= b,
                        _ => x.ln <= y.ln + 1e-12 * y.ln.abs().max(1.0),
                    };
                    if b + 1 < row.len() && !le(&row[b + 1], c) {
                        violations.push(format!("katok_count measure {i} n = {n} in delta"));
                    }
                    if a + 1 < grid.len() && !le(&grid[a + 1][b], c) {
                        violations.push(format!("katok_count measure {i} n = {n} in eps"));
                    }
                    checked += 2;
                }
            }
        }
    }
    for mu in measures() {
        for e in [0.3, 0.15, 0.07] {
            for mc in [None, Some((1000, 7))] {
                let spec = BkSpec { n_schedule: vec![4, 8, 12, 16, 20, 24], monte_carlo: mc };
                let lo = bk_entropy(&mu, &f2, e, false, &spec).map_err(|e| e.to_string())?.value;
                let hi = bk_entropy(&mu, &f2, e, true, &spec).map_err(|e| e.to_string())?.value;
                if lo > hi {
                    violations.push(format!("BK lower {lo} > upper {hi} at eps {e}"));
                }
                checked += 1;
            }
        }
    }
    for run in runs.iter().filter(|r| r.name.starts_with("collapse")) {
        let recs = &run.out.results.records;
        for r in recs.iter().filter(|r| r.estimate.quantity == QuantityId::BkLower) {
            let upper = recs.iter().find(|u| u.estimate.quantity == QuantityId::BkUpper && u.estimate.eps == r.estimate.eps);
            if upper.map_or(true, |u| r.estimate.value > u.estimate.value) {
                violations.push(format!("{}: BK_LOWER > BK_UPPER at eps {}", run.name, r.estimate.eps));
            }
            checked += 1;
        }
    }
    ensure(
        violations.is_empty(),
        format!("{checked} comparisons, {} violations{}", violations.len(), violations.first().map(|v| format!(" ({v})")).unwrap_or_default()),
    )
}

fn grid_family(runs: &mut Vec<Run>) -> Check {
    let res = run_config("grid_family", runs)?;
    let g = res.grid_family.as_ref().ok_or("no grid-family report")?;
    let spacing_ok = g.levels.iter().all(|l| l.spacing <= l.eps / 4.0);
    let nondecreasing = g.sandwich_nondecreasing();
    let final_lo = g.final_lower_ratio().unwrap_or(f64::NAN);
    let gaps: Vec<f64> = g.levels.iter().filter_map(|l| Some((l.ratio_bk? - l.ratio_lo?).abs())).collect();
    let bk_close = !gaps.is_empty() && gaps.iter().all(|&d| d <= 0.1);
    let fmt = |xs: Vec<f64>| xs.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(" ");
    let detail = format!(
        "lower ratios [{}], upper [{}], BK [{}]; nondecreasing {nondecreasing}, final lower {final_lo:.3} (>= 0.8), BK gap to lower end max {:.3} (<= 0.1)",
        fmt(g.lower_ratios()),
        fmt(g.upper_ratios()),
        fmt(g.bk_ratios()),
        gaps.iter().copied().fold(0.0, f64::max),
    );
    ensure(spacing_ok && nondecreasing && final_lo >= 0.8 && bk_close, detail)
}

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != "timings.json")
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

fn determinism(runs: &[Run]) -> Check {
    let mut mismatched = Vec::new();
    let mut files = 0;
    for run in runs {
        let single = execute(&run.validated, Some(1)).map_err(|e| e.to_string())?;
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        write_outputs(&single, dir.path(), &run.validated.config).map_err(|e| e.to_string())?;
        let (a, b) = (dir_bytes(run.dir.path()), dir_bytes(dir.path()));
        files += a.len();
        if a != b || single.exit_code != run.out.exit_code {
            mismatched.push(run.name.clone());
        }
    }
    let threads = runs.first().map_or(0, |r| r.out.timings.threads);
    ensure(
        mismatched.is_empty() && !runs.is_empty(),
        format!("{} configs, {files} files, 1 vs {threads} threads; mismatches: {mismatched:?}", runs.len()),
    )
}

fn main() {
    let mut runs: Vec<Run> = Vec::new();
    let mut results = Vec::new();
    let mut report = |id: u32, title: &str, limit: Option<Duration>, f: &mut dyn FnMut(&mut Vec<Run>) -> Check| {
        let start = Instant::now();
        let outcome = f(&mut runs);
        let took = start.elapsed();
        let (mut pass, mut detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        if let Some(l) = limit {
            if took > l {
                pass = false;
                detail = format!("{detail}; over the {} s limit", l.as_secs());
            }
        }
        let word = if pass { "PASS" } else { "FAIL" };
        println!("{word} {id} {title} [{:.1} s]: {detail}", took.as_secs_f64());
        results.push(pass);
    };
    let secs = |s| Some(Duration::from_secs(s));
    report(1, "exact combinatorics", secs(1), &mut |_| exact_combinatorics());
    report(2, "exact-backend collapse", secs(120), &mut collapse);
    report(3, "first chain", secs(120), &mut first_chain);
    report(4, "second chain", secs(300), &mut second_chain);
    report(5, "critical exponents", secs(60), &mut criticals);
    report(6, "5r covering", secs(30), &mut |_| five_r());
    report(7, "monotonicity", None, &mut |r| monotonicity(r));
    report(8, "grid-family trend", secs(1200), &mut grid_family);
    report(9, "determinism", None, &mut |r| determinism(r));
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
