use std::f64::consts::LN_2;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mdim::{execute, write_outputs, ExperimentConfig, ResultRecord, ResultsFile};
use mdim_core::entropy::{EntropyEstimate, Mode, QuantityId};
use mdim_core::Interval;
use proptest::prelude::*;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mdim"))
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(format!("{name}.json"));
    std::fs::write(&p, body).unwrap();
    p
}

fn run(config: &Path, out: &Path, threads: usize) -> Output {
    bin().arg("run").arg(config).arg("--out").arg(out).arg("--threads").arg(threads.to_string()).output().unwrap()
}

fn shipped(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(format!("{name}.json"))
}

fn read_results(dir: &Path) -> ResultsFile {
    ResultsFile::from_json(&std::fs::read(dir.join("results.json")).unwrap()).unwrap()
}

#[test]
fn minimal_bk_config_gives_ln2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&shipped("bk_minimal"), tmp.path(), 1);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let res = read_results(tmp.path());
    assert_eq!(res.records.len(), 1);
    let e = &res.records[0].estimate;
    assert_eq!(e.quantity, QuantityId::BkUpper);
    assert_eq!(e.mode, Mode::Exact);
    assert!((e.value - LN_2).abs() < 1e-12);
    assert_eq!(res.records[0].units, "nats");
    assert_eq!(res.records[0].config_digest, res.config_digest);
    let csv = std::fs::read_to_string(tmp.path().join("bk_minimal.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("epsilon,quantity,value,ratio,lo,hi,mode"));
    assert!(lines.next().unwrap().starts_with("0.3,BK_UPPER,0.69314718055994"));
    assert_eq!(lines.next(), None);
}

#[test]
fn chain31_writes_one_table_and_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&shipped("chain31"), tmp.path(), 2);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let res = read_results(tmp.path());
    assert_eq!(res.chains.len(), 1);
    assert!(res.chains[0].passed());
    assert!(res.failures.is_empty());
    let table = tmp.path().join("chain31_b82_lemma31_eps0p3.csv");
    let rows = std::fs::read_to_string(table).unwrap().lines().count() - 1;
    assert_eq!(rows, res.chains[0].nodes().len());
}

#[test]
fn dyadic_radius_is_a_validation_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "dyadic",
        r#"{"schema_version":1,"name":"dyadic","command":"entropy","quantities":["KS_EPS"],"eps":[0.25]}"#,
    );
    let out = run(&cfg, &tmp.path().join("out"), 1);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("eps[0]") && err.contains("dyadic"), "{err}");
    assert!(!tmp.path().join("out").exists());

    let out = bin().arg("validate").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_fields_name_their_path() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "typo",
        r#"{"schema_version":1,"name":"typo","command":"entropy","quantities":["KS_EPS"],"eps":[0.3],"monte_carlo":{"sample":5}}"#,
    );
    let out = bin().arg("validate").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("monte_carlo"));
}

#[test]
fn cap_errors_exit_three_and_are_recorded() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "cap",
        r#"{"schema_version":1,"name":"cap","command":"example46","grid":{"levels":[2,4],"word_cap":1}}"#,
    );
    let out = run(&cfg, &tmp.path().join("out"), 1);
    assert_eq!(out.status.code(), Some(3));
    let res = read_results(&tmp.path().join("out"));
    assert_eq!(res.errors.len(), 1);
    assert_eq!(res.errors[0].kind, "cap");
}

#[test]
fn failed_links_exit_four() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "strict",
        r#"{"schema_version":1,"name":"strict","command":"chain31","measure":"shipped_markov","eps":[0.3],"tolerances":{"tau":0.0}}"#,
    );
    let out = run(&cfg, &tmp.path().join("out"), 1);
    assert_eq!(out.status.code(), Some(4));
    let res = read_results(&tmp.path().join("out"));
    assert!(!res.failures.is_empty());
    assert!(res.failures.iter().all(|f| f.starts_with("lemma31(eps=0.3)")));
}

#[test]
fn output_dir_defaults_next_to_the_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "here",
        r#"{"schema_version":1,"name":"here","command":"entropy","quantities":["KS_EPS"],"eps":[0.3],"output":{"dir":"res","timings":null}}"#,
    );
    let out = bin().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(tmp.path().join("res/results.json").exists());
    assert!(tmp.path().join("res/here.csv").exists());
    assert!(!tmp.path().join("res/timings.json").exists());
}

#[test]
fn version_subcommand_prints_the_core_version() {
    let out = bin().arg("version").output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains(mdim_core::VERSION));
}

#[test]
fn empty_record_list_is_valid_json() {
    let res = ResultsFile::empty("nothing", mdim::Command::Entropy, "00");
    let v: serde_json::Value = serde_json::from_slice(&res.to_json()).unwrap();
    assert_eq!(v["records"], serde_json::json!([]));
    assert_eq!(ResultsFile::from_json(&res.to_json()).unwrap(), res);
    assert_eq!(mdim::emit::csv_tables(&res)[0].1.len(), 0);
}

fn outputs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != "timings.json")
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn theorem11_tables_are_identical_across_thread_counts() {
    let v = ExperimentConfig::from_path(&shipped("theorem11_markov")).unwrap().validate().unwrap();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let one = execute(&v, Some(1)).unwrap();
    let many = execute(&v, Some(8)).unwrap();
    assert_eq!(one.exit_code, many.exit_code);
    write_outputs(&one, a.path(), &v.config).unwrap();
    write_outputs(&many, b.path(), &v.config).unwrap();
    let (fa, fb) = (outputs(a.path()), outputs(b.path()));
    assert_eq!(fa.len(), 2);
    assert_eq!(fa, fb);

    let res = &one.results;
    let per_q = v.config.eps.len();
    let csv = String::from_utf8(fa.iter().find(|(n, _)| n.ends_with(".csv")).unwrap().1.clone()).unwrap();
    assert_eq!(csv.lines().count() - 1, res.records.len());
    assert_eq!(res.records.len() % per_q, 0);
    assert!(res.records.iter().any(|r| r.estimate.quantity == QuantityId::PackingGeneric));
    assert!(res.coincidence.is_some());
}

fn arb_estimate() -> impl Strategy<Value = EntropyEstimate> {
    (0usize..4, -1e3f64..1e3, 1e-6f64..0.9, prop::collection::vec((1u64..64, -10f64..10.0), 0..5), any::<bool>()).prop_map(
        |(q, value, eps, trace, bounded)| {
            let quantity = [QuantityId::KsEps, QuantityId::Ps, QuantityId::BowenCritical, QuantityId::OwReturn][q];
            let mut e = EntropyEstimate::new(quantity, eps, trace, value, Mode::Extrapolated);
            if bounded {
                e.bounds = Some(Interval { lo: value - 1.0, hi: value + 0.5 });
            }
            e
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn records_round_trip(estimates in prop::collection::vec(arb_estimate(), 0..6)) {
        let mut res = ResultsFile::empty("rt", mdim::Command::Entropy, "abc");
        res.records = estimates.into_iter().map(|e| ResultRecord::new("abc", e)).collect();
        let bytes = res.to_json();
        let back = ResultsFile::from_json(&bytes).unwrap();
        prop_assert_eq!(&back, &res);
        prop_assert_eq!(back.to_json(), bytes);
    }
}
