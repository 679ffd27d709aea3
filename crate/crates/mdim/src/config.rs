//! Experiment configuration files: UTF-8 JSON, schema-versioned, with
//! unknown keys rejected at every level.

use std::fmt;
use std::path::{Path, PathBuf};

use mdim_core::analysis::{ChainConfig, CoincidenceConfig, GridFamilyConfig};
use mdim_core::entropy::QuantityId;
use mdim_core::measure::MeasureModel;
use mdim_core::numeric::{decimal_rational, parse_rational};
use mdim_core::symbolic::{Admissibility, Alphabet, SequenceMetric, ShiftSystem, Sidedness, SymbolMetric};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// One record per `(quantity, eps)`.
    Entropy,
    Chain31,
    Chain32,
    Theorem11,
    Example46,
    /// Caratheodory critical values; quantities default to all four.
    Cp,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Entropy => "entropy",
            Command::Chain31 => "chain31",
            Command::Chain32 => "chain32",
            Command::Theorem11 => "theorem11",
            Command::Example46 => "example46",
            Command::Cp => "cp",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AdmissibilitySpec {
    Full,
    GoldenMean,
    /// 0/1 transition matrix.
    Sft(Vec<Vec<u8>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MetricSpec {
    FirstDifference,
    WeightedSum { window: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemSpec {
    /// Alphabet size `m`; ignored when `values` is given.
    pub alphabet: usize,
    /// Symbol positions in `[0, 1]`; defaults to `m` equally spaced values.
    pub values: Option<Vec<f64>>,
    pub symbol_metric: SymbolMetric,
    pub admissibility: AdmissibilitySpec,
    pub sidedness: Sidedness,
    pub metric: MetricSpec,
}

impl Default for SystemSpec {
    fn default() -> Self {
        SystemSpec {
            alphabet: 2,
            values: None,
            symbol_metric: SymbolMetric::Discrete,
            admissibility: AdmissibilitySpec::Full,
            sidedness: Sidedness::OneSided,
            metric: MetricSpec::FirstDifference,
        }
    }
}

impl SystemSpec {
    pub fn build(&self) -> mdim_core::Result<ShiftSystem> {
        let alphabet = match &self.values {
            Some(v) => Alphabet::new(v.clone(), self.symbol_metric)?,
            None => Alphabet::grid(self.alphabet, self.symbol_metric)?,
        };
        let adm = match &self.admissibility {
            AdmissibilitySpec::Full => Admissibility::Full,
            AdmissibilitySpec::GoldenMean => Admissibility::Sft(vec![vec![1, 1], vec![1, 0]]),
            AdmissibilitySpec::Sft(m) => Admissibility::Sft(m.clone()),
        };
        let metric = match self.metric {
            MetricSpec::FirstDifference => SequenceMetric::FirstDifference,
            MetricSpec::WeightedSum { window } => SequenceMetric::WeightedSum { window },
        };
        ShiftSystem::new(alphabet, adm, self.sidedness, metric)
    }
}

/// A probability: a JSON number (read as the decimal it prints as) or a
/// string `"p/q"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Prob {
    Decimal(f64),
    Ratio(String),
}

impl Prob {
    fn to_rational(&self, field: &str) -> Result<BigRational, ConfigError> {
        match self {
            Prob::Decimal(v) if v.is_finite() && *v >= 0.0 => Ok(decimal_rational(*v)),
            Prob::Ratio(s) => parse_rational(s).ok_or_else(|| ConfigError::new(field, format!("cannot parse {s:?} as p/q"))),
            Prob::Decimal(v) => Err(ConfigError::new(field, format!("{v} is not a probability"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasureSpec {
    /// Uniform Bernoulli on the system alphabet.
    Uniform,
    Bernoulli(Vec<Prob>),
    /// Row-stochastic transition matrix; started from its stationary law.
    Markov(Vec<Vec<Prob>>),
    /// Two-state chain `[[0.9, 0.1], [0.1, 0.9]]`.
    ShippedMarkov,
}

impl Default for MeasureSpec {
    fn default() -> Self {
        MeasureSpec::Uniform
    }
}

impl MeasureSpec {
    pub fn build(&self, m: usize) -> Result<MeasureModel, ConfigError> {
        let core = |e: mdim_core::Error| ConfigError::new("measure", e.to_string());
        match self {
            MeasureSpec::Uniform => Ok(MeasureModel::uniform(m)),
            MeasureSpec::Bernoulli(p) => {
                let p = p.iter().map(|x| x.to_rational("measure.bernoulli")).collect::<Result<Vec<_>, _>>()?;
                MeasureModel::bernoulli(p).map_err(core)
            }
            MeasureSpec::Markov(rows) => {
                let p = rows
                    .iter()
                    .map(|r| r.iter().map(|x| x.to_rational("measure.markov")).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                MeasureModel::markov(p).map_err(core)
            }
            MeasureSpec::ShippedMarkov => Ok(MeasureModel::shipped_markov()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MonteCarloSpec {
    pub samples: u64,
    pub seed: u64,
    /// Window lengths for the return-time estimator.
    pub ow_n_schedule: Vec<u64>,
}

impl Default for MonteCarloSpec {
    fn default() -> Self {
        MonteCarloSpec { samples: 1000, seed: 7, ow_n_schedule: vec![10, 12, 14, 16] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Chain slack tolerance; `None` means 0.05 for chain31 and 0.1 for chain32.
    pub tau: Option<f64>,
    /// BK upper/lower surrogate gap that gets flagged in coincidence reports.
    pub flag: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { tau: None, flag: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    /// Relative paths resolve against the config file's directory.
    pub dir: PathBuf,
    pub results: String,
    /// Timings go to a separate file so results stay byte-stable.
    pub timings: Option<String>,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec { dir: PathBuf::from("out"), results: "results.json".into(), timings: Some("timings.json".into()) }
    }
}

fn default_delta() -> f64 {
    0.2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    /// Prefix for CSV files; `[A-Za-z0-9_.-]` only.
    pub name: String,
    pub command: Command,
    #[serde(default)]
    pub system: SystemSpec,
    #[serde(default)]
    pub measure: MeasureSpec,
    #[serde(default)]
    pub quantities: Vec<QuantityId>,
    #[serde(default)]
    pub eps: Vec<f64>,
    /// Mass defect for the fixed-delta Katok and Shapira quantities.
    #[serde(default = "default_delta")]
    pub delta: f64,
    /// Schedules, delta grids, neighborhood grids, orders and caps.
    #[serde(default)]
    pub estimators: ChainConfig,
    #[serde(default)]
    pub monte_carlo: MonteCarloSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Grid-family settings, read by `example46` only.
    #[serde(default)]
    pub grid: GridFamilyConfig,
    #[serde(default)]
    pub output: OutputSpec,
}

/// Invalid configuration, naming the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError { field: field.into(), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

/// A parsed and checked configuration with its system and measure built.
#[derive(Debug, Clone)]
pub struct Validated {
    pub config: ExperimentConfig,
    pub system: ShiftSystem,
    pub measure: MeasureModel,
    pub quantities: Vec<QuantityId>,
    pub digest: String,
}

const CP_QUANTITIES: [QuantityId; 4] =
    [QuantityId::BowenCritical, QuantityId::PackingCritical, QuantityId::KatokCp, QuantityId::PackingCp];

fn is_dyadic(e: f64) -> bool {
    e > 0.0 && e.is_finite() && {
        let bits = e.to_bits();
        bits & ((1u64 << 52) - 1) == 0 && (bits >> 52) != 0
    }
}

fn check(ok: bool, field: impl Into<String>, msg: impl Into<String>) -> Result<(), ConfigError> {
    if ok {
        Ok(())
    } else {
        Err(ConfigError::new(field, msg))
    }
}

fn check_schedule(xs: &[u64], field: &str) -> Result<(), ConfigError> {
    check(!xs.is_empty(), field, "must be nonempty")?;
    check(xs[0] > 0 && xs.windows(2).all(|w| w[0] < w[1]), field, "must be positive and strictly increasing")
}

fn check_unit(xs: &[f64], field: &str) -> Result<(), ConfigError> {
    check(!xs.is_empty(), field, "must be nonempty")?;
    for (i, &d) in xs.iter().enumerate() {
        check(d > 0.0 && d < 1.0, format!("{field}[{i}]"), format!("{d} is outside (0, 1)"))?;
    }
    Ok(())
}

fn check_cells(cells: &[(usize, f64)], field: &str) -> Result<(), ConfigError> {
    check(!cells.is_empty(), field, "must be nonempty")?;
    for (i, &(l, eta)) in cells.iter().enumerate() {
        check(l >= 1 && eta > 0.0 && eta.is_finite(), format!("{field}[{i}]"), "need l >= 1 and eta > 0")?;
    }
    Ok(())
}

/// Radii each command evaluates for a configured `eps`.
fn derived_radii(cmd: Command, eps: f64) -> Vec<(&'static str, f64)> {
    match cmd {
        // The first chain only rescales by powers of two.
        Command::Chain31 => vec![("eps", eps)],
        Command::Chain32 => vec![("eps", eps), ("eps/10", eps / 10.0), ("eps/60", eps / 60.0), ("eps/120", eps / 120.0)],
        _ => vec![("eps", eps)],
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let field = if path == "." { "<root>".to_string() } else { path };
            ConfigError::new(field, e.into_inner().to_string())
        })
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::new("<file>", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// SHA-256 of the canonical JSON form (defaults filled in).
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let bytes = serde_json::to_vec(self).expect("config serializes");
        format!("{:x}", Sha256::digest(&bytes))
    }

    pub fn tau(&self) -> f64 {
        self.tolerances.tau.unwrap_or(if self.command == Command::Chain32 { 0.1 } else { 0.05 })
    }

    pub fn coincidence(&self, quantities: &[QuantityId]) -> CoincidenceConfig {
        CoincidenceConfig {
            quantities: quantities.to_vec(),
            katok_delta: self.delta,
            estimators: self.estimators.clone(),
            ow: (self.monte_carlo.samples, self.monte_carlo.seed),
            ow_n_schedule: self.monte_carlo.ow_n_schedule.clone(),
            flag_tol: self.tolerances.flag,
        }
    }

    pub fn validate(self) -> Result<Validated, ConfigError> {
        check(
            self.schema_version == SCHEMA_VERSION,
            "schema_version",
            format!("expected {SCHEMA_VERSION}, got {}", self.schema_version),
        )?;
        check(
            !self.name.is_empty() && self.name.chars().all(|c| c.is_ascii_alphanumeric() || "_.-".contains(c)),
            "name",
            "must be nonempty and use only letters, digits, '_', '.', '-'",
        )?;
        let system = self.system.build().map_err(|e| ConfigError::new("system", e.to_string()))?;
        let measure = self.measure.build(system.m())?;
        measure.check_support(&system).map_err(|e| ConfigError::new("measure", e.to_string()))?;

        let cmd = self.command;
        if cmd != Command::Example46 {
            check(!self.eps.is_empty(), "eps", "must be nonempty")?;
        }
        for (i, &e) in self.eps.iter().enumerate() {
            check(e > 0.0 && e.is_finite(), format!("eps[{i}]"), format!("{e} is not a positive radius"))?;
            for (label, r) in derived_radii(cmd, e) {
                check(!is_dyadic(r), format!("eps[{i}]"), format!("{label} = {r} is dyadic"))?;
            }
        }
        if cmd == Command::Theorem11 {
            check(self.eps.len() >= 4, "eps", "need at least four radii")?;
            check(self.eps.windows(2).all(|w| w[0] > w[1]), "eps", "must be strictly decreasing")?;
            check(self.eps.iter().all(|&e| e < 1.0), "eps", "radii must lie below 1")?;
        }
        check(self.delta > 0.0 && self.delta < 1.0, "delta", "must lie in (0, 1)")?;

        let est = &self.estimators;
        check_schedule(&est.n_schedule, "estimators.n_schedule")?;
        check_schedule(&est.ps_n_schedule, "estimators.ps_n_schedule")?;
        check_schedule(&est.cp_n_schedule, "estimators.cp_n_schedule")?;
        check(est.generic_lengths.windows(2).all(|w| w[0] < w[1]), "estimators.generic_lengths", "must be increasing")?;
        check(!est.generic_lengths.is_empty(), "estimators.generic_lengths", "must be nonempty")?;
        check_unit(&est.katok_deltas, "estimators.katok_deltas")?;
        check_unit(&est.cp_deltas, "estimators.cp_deltas")?;
        check_cells(&est.ps_grid, "estimators.ps_grid")?;
        check_cells(&est.generic_cells, "estimators.generic_cells")?;
        check(est.cap > 0, "estimators.cap", "must be positive")?;
        check(est.set_order > 0, "estimators.set_order", "must be positive")?;

        check(self.monte_carlo.samples > 0, "monte_carlo.samples", "must be positive")?;
        check_schedule(&self.monte_carlo.ow_n_schedule, "monte_carlo.ow_n_schedule")?;
        if let Some(t) = self.tolerances.tau {
            check(t >= 0.0 && t.is_finite(), "tolerances.tau", "must be finite and nonnegative")?;
        }
        check(self.tolerances.flag > 0.0, "tolerances.flag", "must be positive")?;
        check(!self.output.results.is_empty(), "output.results", "must be a file name")?;

        let quantities = match cmd {
            Command::Entropy => {
                check(!self.quantities.is_empty(), "quantities", "must be nonempty")?;
                self.quantities.clone()
            }
            Command::Cp if self.quantities.is_empty() => CP_QUANTITIES.to_vec(),
            Command::Cp => self.quantities.clone(),
            Command::Theorem11 if self.quantities.is_empty() => CoincidenceConfig::default().quantities,
            Command::Theorem11 => self.quantities.clone(),
            _ => {
                check(self.quantities.is_empty(), "quantities", format!("not used by {}", cmd.name()))?;
                Vec::new()
            }
        };
        for (i, q) in quantities.iter().enumerate() {
            check(
                *q != QuantityId::PackingFullMeasureInf,
                format!("quantities[{i}]"),
                "evaluated inside chain32 only",
            )?;
            if cmd == Command::Cp {
                check(CP_QUANTITIES.contains(q), format!("quantities[{i}]"), format!("{q} is not a critical value"))?;
            }
        }
        if cmd == Command::Example46 {
            self.validate_grid()?;
        }
        let digest = self.digest();
        Ok(Validated { config: self, system, measure, quantities, digest })
    }

    fn validate_grid(&self) -> Result<(), ConfigError> {
        let g = &self.grid;
        check(!g.levels.is_empty(), "grid.levels", "must be nonempty")?;
        let eps = g.eps_grid();
        check(eps.len() == g.levels.len(), "grid.eps", "need one radius per level")?;
        for (i, (&m, &e)) in g.levels.iter().zip(&eps).enumerate() {
            check((2..=255).contains(&m), format!("grid.levels[{i}]"), "need 2 <= m <= 255")?;
            check(e > 0.0 && e.is_finite() && !is_dyadic(e), format!("grid.eps[{i}]"), format!("{e} is not a usable radius"))?;
            let h = 1.0 / (m - 1) as f64;
            check(h <= e / 4.0, format!("grid.eps[{i}]"), format!("spacing {h} exceeds eps/4 = {}", e / 4.0))?;
        }
        check(g.lower_factor > 1.0, "grid.lower_factor", "must exceed 1")?;
        check(g.upper_factor > 0.0 && g.upper_factor < 1.0, "grid.upper_factor", "must lie in (0, 1)")?;
        check(g.n_max >= 1, "grid.n_max", "must be positive")?;
        check(g.word_cap > 0, "grid.word_cap", "must be positive")?;
        check(g.bk_samples > 0, "grid.bk_samples", "must be positive")?;
        check(g.bins >= 4, "grid.bins", "need at least 4")?;
        let orders: Vec<u64> = g.bk_orders.iter().map(|&n| n as u64).collect();
        check_schedule(&orders, "grid.bk_orders")
    }
}

/// Output directory: relative paths resolve against the config's directory.
pub fn resolve_dir(config_path: &Path, dir: &Path) -> PathBuf {
    if dir.is_absolute() {
        dir.to_path_buf()
    } else {
        config_path.parent().unwrap_or(Path::new(".")).join(dir)
    }
}
