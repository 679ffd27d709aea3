//! Plot-ready CSV tables and atomic file output.

use std::io::Write;
use std::path::{Path, PathBuf};

use mdim_core::entropy::Mode;

use crate::config::Command;
use crate::error::RunError;
use crate::record::ResultsFile;

pub const CSV_HEADER: [&str; 7] = ["epsilon", "quantity", "value", "ratio", "lo", "hi", "mode"];

#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub epsilon: f64,
    pub quantity: String,
    pub value: f64,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub mode: Option<Mode>,
}

impl CsvRow {
    /// `value / ln(1/eps)`, empty when `eps >= 1`.
    pub fn ratio(&self) -> Option<f64> {
        (self.epsilon < 1.0).then(|| self.value / -self.epsilon.ln())
    }
}

fn num(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn csv_bytes(rows: &[CsvRow]) -> Result<Vec<u8>, RunError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.epsilon.to_string(),
            r.quantity.clone(),
            r.value.to_string(),
            num(r.ratio()),
            num(r.lo),
            num(r.hi),
            r.mode.map(|m| m.name().to_string()).unwrap_or_default(),
        ])?;
    }
    w.into_inner().map_err(|e| RunError::Csv(e.into_error().into()))
}

fn tag(eps: f64) -> String {
    eps.to_string().replace('.', "p")
}

/// `(file name, rows)` for every table the results carry.
pub fn csv_tables(res: &ResultsFile) -> Vec<(String, Vec<CsvRow>)> {
    let mut out = Vec::new();
    match res.command {
        Command::Entropy | Command::Cp | Command::Theorem11 => {
            let rows = res
                .records
                .iter()
                .map(|r| {
                    let e = &r.estimate;
                    CsvRow {
                        epsilon: e.eps,
                        quantity: e.quantity.to_string(),
                        value: e.value,
                        lo: e.bounds.map(|b| b.lo),
                        hi: e.bounds.map(|b| b.hi),
                        mode: Some(e.mode),
                    }
                })
                .collect();
            out.push((format!("{}.csv", res.name), rows));
        }
        Command::Chain31 | Command::Chain32 => {
            for c in &res.chains {
                let rows = c
                    .nodes()
                    .into_iter()
                    .map(|n| CsvRow {
                        epsilon: n.eps,
                        quantity: n.label.clone(),
                        value: n.value,
                        lo: None,
                        hi: None,
                        mode: Some(n.mode),
                    })
                    .collect();
                out.push((format!("{}_{}_eps{}.csv", res.name, c.name, tag(c.eps)), rows));
            }
        }
        Command::Example46 => {
            if let Some(g) = &res.grid_family {
                let mut rows = Vec::new();
                for l in &g.levels {
                    let row = |q: &str, v: f64, mode| CsvRow { epsilon: l.eps, quantity: q.into(), value: v, lo: None, hi: None, mode };
                    rows.push(row("SANDWICH_LO", l.v_lo, Some(Mode::Exact)));
                    if let Some(v) = l.v_hi {
                        rows.push(row("SANDWICH_HI", v, Some(Mode::Exact)));
                    }
                    rows.push(CsvRow {
                        lo: l.bk.bounds.map(|b| b.lo),
                        hi: l.bk.bounds.map(|b| b.hi),
                        ..row("BK_UPPER", l.bk.value, Some(l.bk.mode))
                    });
                }
                out.push((format!("{}.csv", res.name), rows));
            }
        }
    }
    out
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), RunError> {
    let io = |e: std::io::Error| RunError::Io { path: path.to_path_buf(), source: e };
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Writes `results.json` and every CSV table into `dir`.
pub fn emit(res: &ResultsFile, dir: &Path, results_name: &str) -> Result<Vec<PathBuf>, RunError> {
    let mut written = Vec::new();
    let path = dir.join(results_name);
    write_atomic(&path, &res.to_json())?;
    written.push(path);
    for (name, rows) in csv_tables(res) {
        let path = dir.join(name);
        write_atomic(&path, &csv_bytes(&rows)?)?;
        written.push(path);
    }
    Ok(written)
}
