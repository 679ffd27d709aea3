//! Expands a validated config into independent work items, runs them on a
//! rayon pool, and assembles results in item order.

use std::path::{Path, PathBuf};
use std::time::Instant;

use mdim_core::analysis::{
    estimate_quantity, example46_experiment, lemma31_chain, lemma32_chain, slope_report, ChainReport, CoincidenceConfig,
    CoincidenceReport, GridFamilyReport,
};
use mdim_core::entropy::{EntropyEstimate, QuantityId};
use rayon::prelude::*;

use crate::config::{resolve_dir, Command, ExperimentConfig, Validated};
use crate::emit::{emit, write_atomic};
use crate::error::{error_kind, kind_exit_code, RunError, EXIT_CHAIN, EXIT_OK};
use crate::record::{ItemError, ResultRecord, ResultsFile, Timings};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Item {
    Estimate(QuantityId, f64),
    Chain31(f64),
    Chain32(f64),
    Grid,
}

impl Item {
    fn label(&self) -> String {
        match self {
            Item::Estimate(q, e) => format!("{q}(eps={e})"),
            Item::Chain31(e) => format!("chain31(eps={e})"),
            Item::Chain32(e) => format!("chain32(eps={e})"),
            Item::Grid => "example46".into(),
        }
    }
}

enum Output {
    Estimate(EntropyEstimate),
    Chain(ChainReport),
    Grid(GridFamilyReport),
}

fn items(v: &Validated) -> Vec<Item> {
    let c = &v.config;
    let mut qs = v.quantities.clone();
    if c.command == Command::Theorem11 && !qs.contains(&QuantityId::PackingGeneric) {
        qs.push(QuantityId::PackingGeneric);
    }
    match c.command {
        Command::Entropy | Command::Cp | Command::Theorem11 => {
            qs.iter().flat_map(|&q| c.eps.iter().map(move |&e| Item::Estimate(q, e))).collect()
        }
        Command::Chain31 => c.eps.iter().map(|&e| Item::Chain31(e)).collect(),
        Command::Chain32 => c.eps.iter().map(|&e| Item::Chain32(e)).collect(),
        Command::Example46 => vec![Item::Grid],
    }
}

fn run_item(v: &Validated, cc: &CoincidenceConfig, item: Item) -> mdim_core::Result<Output> {
    let c = &v.config;
    let (mu, sys) = (&v.measure, &v.system);
    Ok(match item {
        Item::Estimate(q, e) => Output::Estimate(estimate_quantity(mu, sys, q, e, cc)?),
        Item::Chain31(e) => Output::Chain(lemma31_chain(mu, sys, e, c.delta, c.tau(), &c.estimators)?),
        Item::Chain32(e) => Output::Chain(lemma32_chain(mu, sys, e, c.tau(), &c.estimators)?),
        Item::Grid => Output::Grid(example46_experiment(&c.grid)?),
    })
}

/// Everything a run produced, before anything is written.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub results: ResultsFile,
    pub timings: Timings,
    pub exit_code: u8,
}

/// Runs every item of `v` on `threads` workers (all cores when `None`).
/// Results do not depend on the thread count.
pub fn execute(v: &Validated, threads: Option<usize>) -> Result<RunOutput, RunError> {
    let start = Instant::now();
    let c = &v.config;
    let cc = c.coincidence(&v.quantities);
    let work = items(v);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder.build().map_err(|e| RunError::Pool(e.to_string()))?;
    let outputs: Vec<(mdim_core::Result<Output>, f64)> = pool.install(|| {
        work.par_iter()
            .map(|&item| {
                let t = Instant::now();
                let r = run_item(v, &cc, item);
                (r, t.elapsed().as_secs_f64())
            })
            .collect()
    });

    let mut res = ResultsFile::empty(&c.name, c.command, &v.digest);
    let mut timing_items = Vec::new();
    let mut exit_code = EXIT_OK;
    for (item, (out, secs)) in work.iter().zip(outputs) {
        timing_items.push((item.label(), secs));
        match out {
            Ok(Output::Estimate(e)) => res.records.push(ResultRecord::new(&v.digest, e)),
            Ok(Output::Chain(ch)) => {
                res.failures.extend(ch.failures().into_iter().map(|f| format!("{}(eps={}): {f}", ch.name, ch.eps)));
                res.chains.push(ch);
            }
            Ok(Output::Grid(g)) => res.grid_family = Some(g),
            Err(e) => {
                let kind = error_kind(&e);
                if exit_code == EXIT_OK {
                    exit_code = kind_exit_code(kind);
                }
                res.errors.push(ItemError { item: item.label(), kind: kind.into(), message: e.to_string() });
            }
        }
    }
    if !res.failures.is_empty() && exit_code == EXIT_OK {
        exit_code = EXIT_CHAIN;
    }
    if c.command == Command::Theorem11 && res.errors.is_empty() {
        assemble_coincidence(c, &mut res);
    }
    let threads = pool.current_num_threads();
    Ok(RunOutput {
        results: res,
        timings: Timings { threads, total_seconds: start.elapsed().as_secs_f64(), items: timing_items },
        exit_code,
    })
}

fn assemble_coincidence(c: &ExperimentConfig, res: &mut ResultsFile) {
    let mut order: Vec<QuantityId> = Vec::new();
    for r in &res.records {
        if !order.contains(&r.estimate.quantity) {
            order.push(r.estimate.quantity);
        }
    }
    let mut reports = Vec::new();
    let mut generic = None;
    for q in order {
        let values: Vec<f64> = res.records.iter().filter(|r| r.estimate.quantity == q).map(|r| r.estimate.value).collect();
        match slope_report(q, &c.eps, &values) {
            Ok(s) if q == QuantityId::PackingGeneric => generic = Some(s),
            Ok(s) => reports.push(s),
            Err(e) => res.errors.push(ItemError { item: format!("slope {q}"), kind: "computation".into(), message: e.to_string() }),
        }
    }
    res.slopes = reports.iter().chain(generic.iter()).cloned().collect();
    res.coincidence = Some(CoincidenceReport::new(reports, generic, Vec::new(), c.tolerances.flag));
}

/// Single writer: results, CSV tables, then timings.
pub fn write_outputs(out: &RunOutput, dir: &Path, cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, RunError> {
    let mut written = emit(&out.results, dir, &cfg.output.results)?;
    if let Some(name) = &cfg.output.timings {
        let path = dir.join(name);
        let mut bytes = serde_json::to_vec_pretty(&out.timings).expect("timings serialize");
        bytes.push(b'\n');
        write_atomic(&path, &bytes)?;
        written.push(path);
    }
    Ok(written)
}

/// Loads, validates, runs and writes. `out_dir` overrides the configured
/// output directory.
pub fn run_path(
    config: &Path,
    out_dir: Option<&Path>,
    threads: Option<usize>,
) -> Result<(RunOutput, Vec<PathBuf>), RunError> {
    let v = ExperimentConfig::from_path(config)?.validate()?;
    let dir = match out_dir {
        Some(d) => d.to_path_buf(),
        None => resolve_dir(config, &v.config.output.dir),
    };
    let out = execute(&v, threads)?;
    let written = write_outputs(&out, &dir, &v.config)?;
    Ok((out, written))
}
