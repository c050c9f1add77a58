//! Command-line front end: argument and config merging, the experiment drivers and
//! CSV/JSON table output.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::attack::{success_rate, AttackConfig, AuxSource, TargetDistribution};
use crate::cloning::{cascade, CloneMachine};
use crate::error::Error;
use crate::measurement::{empirical_snr, snr_grows, snr_index, statistical_snr, BinomialModel, MeasurementMode};
use crate::qubit::Qubit;
use crate::rng::substream;
use crate::y00::{dk_threshold, security_margin, wheel_table, y00_campaign, Y00AttackConfig, Y00Params};

pub const TOOL: &str = "qamp";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Bumped whenever a column is renamed, added or reordered.
pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Validation(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Runtime(m) => write!(f, "simulation error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::AngleOutOfRange { .. }
            | Error::InvalidDensityMatrix(_)
            | Error::InvalidWeights { .. }
            | Error::InvalidCloneParams { .. }
            | Error::InvalidSplit(_)
            | Error::InvalidConfig(_) => CliError::Validation(e.to_string()),
            Error::ParityUndefined(_) | Error::InsufficientPhotons { .. } | Error::DegenerateDirection { .. } => {
                CliError::Runtime(e.to_string())
            }
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "qamp", version, about = "Quantum-amplification attack simulator")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct GlobalArgs {
    /// Master seed (required by Monte Carlo subcommands)
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output format (default csv)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file (written atomically); stdout when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Flat JSON object of flag values; command-line flags take precedence
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Monte Carlo trials per campaign row
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    /// Stokes measurement mode: idealized or partitioned
    #[arg(long, global = true)]
    pub mode: Option<MeasurementMode>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cloning-machine constants for one (p, q) or a sweep
    Machine(MachineArgs),
    /// S/N against cascade depth
    SnrSweep(SnrSweepArgs),
    /// Level-by-level cascade weights and Stokes vector
    Cascade(CascadeArgs),
    /// Attack campaign against a generic multiphoton source
    Attack(AttackArgs),
    /// Attack campaign against Y-00, with a no-cloning baseline
    Y00(Y00Args),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Machine(_) => "machine",
            Command::SnrSweep(_) => "snr-sweep",
            Command::Cascade(_) => "cascade",
            Command::Attack(_) => "attack",
            Command::Y00(_) => "y00",
        }
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct MachineArgs {
    /// Input copies per cloning step
    #[arg(long)]
    pub p: Option<u64>,
    /// Output copies per cloning step (q > p)
    #[arg(long)]
    pub q: Option<u64>,
    /// Sweep 1 <= p <= p-max
    #[arg(long)]
    pub p_max: Option<u64>,
    /// Sweep p < q <= q-max
    #[arg(long)]
    pub q_max: Option<u64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct SnrSweepArgs {
    /// Input copies per cloning step
    #[arg(long)]
    pub p: Option<u64>,
    /// Output copies per cloning step (q > p)
    #[arg(long)]
    pub q: Option<u64>,
    /// First cascade depth (default 0)
    #[arg(long)]
    pub l_min: Option<u32>,
    /// Last cascade depth (default 10)
    #[arg(long)]
    pub l_max: Option<u32>,
    /// Photons entering the cascade (default 1)
    #[arg(long)]
    pub n0: Option<u64>,
    /// Add a Monte Carlo S/N column (needs --seed and --trials)
    #[arg(long)]
    pub mc: Option<bool>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct CascadeArgs {
    /// Input copies per cloning step
    #[arg(long)]
    pub p: Option<u64>,
    /// Output copies per cloning step (q > p)
    #[arg(long)]
    pub q: Option<u64>,
    /// Cascade depth
    #[arg(long)]
    pub levels: Option<u32>,
    /// Photons entering the cascade
    #[arg(long)]
    pub n0: Option<u64>,
    /// Polar angle of the input state, in [0, pi]
    #[arg(long)]
    pub theta: Option<f64>,
    /// Azimuth of the input state
    #[arg(long)]
    pub phi: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct AttackArgs {
    /// Input copies per cloning step
    #[arg(long)]
    pub p: Option<u64>,
    /// Output copies per cloning step (q > p)
    #[arg(long)]
    pub q: Option<u64>,
    /// One campaign per listed depth
    #[arg(long, value_delimiter = ',')]
    pub levels: Option<Vec<u32>>,
    /// Photons per pulse (default 2)
    #[arg(long)]
    pub n0: Option<u64>,
    /// Fraction of photons Eve diverts to the amplifier (default 0.5)
    #[arg(long)]
    pub split: Option<f64>,
    /// amplified, exact or random
    #[arg(long)]
    pub aux_source: Option<AuxSource>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Y00Args {
    /// Basis count M (default 64)
    #[arg(long)]
    pub m_levels: Option<u64>,
    /// Mean photon number |alpha|^2 of each pulse (default 100)
    #[arg(long)]
    pub alpha_sq: Option<f64>,
    /// Fraction of the pulse Eve taps (default 0.5)
    #[arg(long)]
    pub split: Option<f64>,
    /// Number of weak pulses the tap is cut into (default 1000)
    #[arg(long)]
    pub j_pulses: Option<u64>,
    /// Input copies per cloning step
    #[arg(long)]
    pub p: Option<u64>,
    /// Output copies per cloning step (q > p)
    #[arg(long)]
    pub q: Option<u64>,
    /// One campaign per listed depth (default 2)
    #[arg(long, value_delimiter = ',')]
    pub levels: Option<Vec<u32>>,
    /// amplified, exact or random
    #[arg(long)]
    pub aux_source: Option<AuxSource>,
}

/// One output cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Bool(bool),
    Str(String),
    Empty,
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => float_text(*v),
            Cell::Bool(v) => v.to_string(),
            Cell::Str(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(v) => json!(float_text(*v)),
            Cell::Bool(v) => json!(v),
            Cell::Str(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

fn float_text(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        // Shortest representation that round-trips.
        format!("{v:?}")
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}
impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as u64)
    }
}
impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Str(v.into())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub meta: Map<String, Value>,
}

impl ResultTable {
    pub fn new(columns: &[&'static str]) -> Self {
        ResultTable { columns: columns.to_vec(), rows: Vec::new(), meta: Map::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the schema");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    pub fn to_csv(&self) -> CliResult<Vec<u8>> {
        let mut out = Vec::new();
        for (k, v) in &self.meta {
            let v = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            writeln!(out, "# {k}: {v}").expect("write to Vec");
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let io = |e: csv::Error| CliError::Runtime(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::text)).map_err(io)?;
        }
        w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))
    }

    pub fn to_json(&self) -> CliResult<Vec<u8>> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let obj: Map<String, Value> =
                    self.columns.iter().zip(r).map(|(c, cell)| (c.to_string(), cell.json())).collect();
                Value::Object(obj)
            })
            .collect();
        let doc = json!({ "meta": self.meta, "columns": self.columns, "rows": rows });
        let mut out = serde_json::to_vec_pretty(&doc).map_err(|e| CliError::Runtime(e.to_string()))?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn render(&self, format: Format) -> CliResult<Vec<u8>> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// Writes via a temporary file in the target directory, then renames over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn read_config(path: &Path) -> CliResult<Map<String, Value>> {
    let text =
        std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read config {}: {e}", path.display())))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(invalid("config must be a flat JSON object")),
        Err(e) => Err(invalid(format!("config {}: {e}", path.display()))),
    }
}

fn keys_of<T: Serialize + Default>() -> Vec<String> {
    match serde_json::to_value(T::default()) {
        Ok(Value::Object(m)) => m.keys().cloned().collect(),
        _ => Vec::new(),
    }
}

/// Config values under command-line values, deserialized back into `T`.
fn merge<T: Serialize + DeserializeOwned>(cli: &T, config: &Map<String, Value>) -> CliResult<T> {
    let mut merged = config.clone();
    if let Value::Object(m) = serde_json::to_value(cli).map_err(|e| invalid(e.to_string()))? {
        for (k, v) in m {
            if !v.is_null() {
                merged.insert(k, v);
            }
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| invalid(format!("config: {e}")))
}

/// Resolved global settings.
#[derive(Debug, Clone)]
pub struct Globals {
    pub args: GlobalArgs,
}

impl Globals {
    fn format(&self) -> Format {
        self.args.format.unwrap_or_default()
    }

    fn mode(&self) -> MeasurementMode {
        self.args.mode.unwrap_or_default()
    }

    fn seed(&self) -> CliResult<u64> {
        self.args.seed.ok_or_else(|| invalid("--seed is required for Monte Carlo runs"))
    }

    fn trials(&self) -> CliResult<u64> {
        match self.args.trials {
            Some(0) => Err(invalid("--trials must be at least 1")),
            Some(t) => Ok(t),
            None => Err(invalid("--trials is required for Monte Carlo runs")),
        }
    }
}

fn require<T>(v: Option<T>, name: &str) -> CliResult<T> {
    v.ok_or_else(|| invalid(format!("--{name} is required")))
}

fn machine(p: Option<u64>, q: Option<u64>) -> CliResult<CloneMachine> {
    Ok(CloneMachine::new(require(p, "p")?, require(q, "q")?)?)
}

/// Parses `argv`, runs the command and returns the rendered output together with the
/// destination path, if any.
pub fn execute<I, S>(argv: I) -> CliResult<(Vec<u8>, Option<PathBuf>)>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| invalid(e.to_string()))?;
    let config = match &cli.global.config {
        Some(path) => read_config(path)?,
        None => Map::new(),
    };
    let mut known = keys_of::<GlobalArgs>();
    known.extend(match &cli.command {
        Command::Machine(_) => keys_of::<MachineArgs>(),
        Command::SnrSweep(_) => keys_of::<SnrSweepArgs>(),
        Command::Cascade(_) => keys_of::<CascadeArgs>(),
        Command::Attack(_) => keys_of::<AttackArgs>(),
        Command::Y00(_) => keys_of::<Y00Args>(),
    });
    if let Some(k) = config.keys().find(|k| !known.contains(k)) {
        return Err(invalid(format!("unknown config key '{k}' for {}", cli.command.name())));
    }
    let globals = Globals { args: merge(&cli.global, &config)? };

    let (mut table, echo) = match &cli.command {
        Command::Machine(a) => {
            let a = merge(a, &config)?;
            (cmd_machine(&a)?, serde_json::to_value(&a))
        }
        Command::SnrSweep(a) => {
            let a = merge(a, &config)?;
            (cmd_snr_sweep(&a, &globals)?, serde_json::to_value(&a))
        }
        Command::Cascade(a) => {
            let a = merge(a, &config)?;
            (cmd_cascade(&a)?, serde_json::to_value(&a))
        }
        Command::Attack(a) => {
            let a = merge(a, &config)?;
            (cmd_attack(&a, &globals)?, serde_json::to_value(&a))
        }
        Command::Y00(a) => {
            let a = merge(a, &config)?;
            (cmd_y00(&a, &globals)?, serde_json::to_value(&a))
        }
    };

    let mut echoed = match echo.map_err(|e| CliError::Runtime(e.to_string()))? {
        Value::Object(m) => m,
        _ => Map::new(),
    };
    if let Value::Object(g) = serde_json::to_value(&globals.args).map_err(|e| CliError::Runtime(e.to_string()))? {
        echoed.extend(g);
    }
    // Where the table goes is not part of what it contains.
    echoed.remove("out");
    echoed.retain(|_, v| !v.is_null());
    let extra = std::mem::take(&mut table.meta);
    table.meta.insert("tool".into(), json!(TOOL));
    table.meta.insert("version".into(), json!(VERSION));
    table.meta.insert("schema".into(), json!(SCHEMA_VERSION));
    table.meta.insert("command".into(), json!(cli.command.name()));
    table.meta.insert("seed".into(), globals.args.seed.map_or(Value::Null, |s| json!(s)));
    table.meta.insert("config".into(), Value::Object(echoed));
    table.meta.extend(extra);

    Ok((table.render(globals.format())?, globals.args.out.clone()))
}

/// Entry point for the binary: returns the process exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<S> = argv.into_iter().collect();
    // Help and version go through clap directly so they print normally.
    if let Err(e) = Cli::try_parse_from(argv.clone()) {
        if !e.use_stderr() {
            let _ = e.print();
            return 0;
        }
    }
    let result = execute(argv).and_then(|(bytes, out)| {
        match out {
            Some(path) => write_atomic(&path, &bytes),
            None => std::io::stdout().write_all(&bytes),
        }
        .map_err(|e| CliError::Runtime(format!("write failed: {e}")))
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("qamp: {}", e.to_string().lines().next().unwrap_or_default());
            e.exit_code()
        }
    }
}

pub const MACHINE_COLUMNS: &[&str] = &["p", "q", "fidelity", "disturbance", "shrink_factor", "snr_index", "snr_grows"];

pub fn cmd_machine(a: &MachineArgs) -> CliResult<ResultTable> {
    let mut t = ResultTable::new(MACHINE_COLUMNS);
    let pairs: Vec<(u64, u64)> = match (a.p, a.q, a.p_max, a.q_max) {
        (Some(p), Some(q), None, None) => vec![(p, q)],
        (None, None, Some(pm), Some(qm)) => {
            if pm < 1 || qm < 2 {
                return Err(invalid("sweep needs p-max >= 1 and q-max >= 2"));
            }
            (1..=pm).flat_map(|p| (p + 1..=qm).map(move |q| (p, q))).collect()
        }
        _ => return Err(invalid("give either --p and --q, or --p-max and --q-max")),
    };
    for (p, q) in pairs {
        let m = CloneMachine::new(p, q)?;
        t.push(vec![
            p.into(),
            q.into(),
            m.fidelity().into(),
            m.disturbance().into(),
            m.shrink_factor().into(),
            snr_index(&m).into(),
            snr_grows(&m).into(),
        ]);
    }
    Ok(t)
}

pub const SNR_SWEEP_COLUMNS: &[&str] =
    &["p", "q", "levels", "eta_pow", "clone_count", "stokes_factor", "snr_analytic", "snr_statistical", "snr_mc"];

pub fn cmd_snr_sweep(a: &SnrSweepArgs, g: &Globals) -> CliResult<ResultTable> {
    let m = machine(a.p, a.q)?;
    let l_min = a.l_min.unwrap_or(0);
    let l_max = a.l_max.unwrap_or(10);
    if l_min > l_max {
        return Err(invalid(format!("l-min {l_min} exceeds l-max {l_max}")));
    }
    let n0 = a.n0.unwrap_or(1);
    if n0 < 1 {
        return Err(invalid("n0 must be at least 1"));
    }
    let mc = a.mc.unwrap_or(false);
    let (seed, trials) = if mc { (g.seed()?, g.trials()?) } else { (0, 0) };
    let mut t = ResultTable::new(SNR_SWEEP_COLUMNS);
    let (p, q) = (m.p() as f64, m.q() as f64);
    for l in l_min..=l_max {
        let model = BinomialModel::new(&m, l, n0);
        let snr_mc = if mc {
            let mut rng = substream(seed, l as u64);
            Cell::Float(empirical_snr(&model, trials, &mut rng).snr)
        } else {
            Cell::Empty
        };
        t.push(vec![
            m.p().into(),
            m.q().into(),
            l.into(),
            model.eta_pow().into(),
            (m.gain().powi(l as i32) * n0 as f64).into(),
            ((q + 2.0) / (p + 2.0)).powi(l as i32).into(),
            snr_index(&m).powf(l as f64 / 2.0).into(),
            statistical_snr(&model).into(),
            snr_mc,
        ]);
    }
    Ok(t)
}

pub const CASCADE_COLUMNS: &[&str] =
    &["level", "a", "b", "a_closed", "b_closed", "eta_pow", "clone_count", "s1", "s2", "s3"];

pub fn cmd_cascade(a: &CascadeArgs) -> CliResult<ResultTable> {
    let m = machine(a.p, a.q)?;
    let levels = require(a.levels, "levels")?;
    let n0 = a.n0.unwrap_or(1);
    if n0 < 1 {
        return Err(invalid("n0 must be at least 1"));
    }
    let q0 = Qubit::new(a.theta.unwrap_or(0.0), a.phi.unwrap_or(0.0))?;
    let res = cascade(&q0, &m, levels, n0);
    let unit = q0.stokes();
    let mut t = ResultTable::new(CASCADE_COLUMNS);
    for (k, &(wa, wb)) in res.levels.iter().enumerate() {
        let e = m.shrink_factor().powi(k as i32);
        let s = unit.scale(wa - wb);
        t.push(vec![
            (k as u64).into(),
            wa.into(),
            wb.into(),
            ((1.0 + e) / 2.0).into(),
            ((1.0 - e) / 2.0).into(),
            e.into(),
            (m.gain().powi(k as i32) * n0 as f64).into(),
            s.s1.into(),
            s.s2.into(),
            s.s3.into(),
        ]);
    }
    Ok(t)
}

pub const ATTACK_COLUMNS: &[&str] = &[
    "p",
    "q",
    "levels",
    "n0",
    "split",
    "mode",
    "aux_source",
    "trials",
    "successes",
    "failures",
    "rate",
    "ci_low",
    "ci_high",
    "ci95",
    "mean_angular_error",
    "clone_count",
    "snr_analytic",
];

pub fn cmd_attack(a: &AttackArgs, g: &Globals) -> CliResult<ResultTable> {
    let m = machine(a.p, a.q)?;
    let seed = g.seed()?;
    let trials = g.trials()?;
    let levels = a.levels.clone().unwrap_or_else(|| vec![2]);
    if levels.is_empty() {
        return Err(invalid("--levels needs at least one value"));
    }
    let mut t = ResultTable::new(ATTACK_COLUMNS);
    for l in levels {
        let mut cfg = AttackConfig::new(m, l, a.n0.unwrap_or(2), a.split.unwrap_or(0.5));
        cfg.mode = g.mode();
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.aux_source = a.aux_source.unwrap_or_default();
        cfg.validate()?;
        let (clones, snr) = match cfg.amplification() {
            Ok((amp, snr)) => (Cell::Int(amp.clone_count), Cell::Float(snr)),
            Err(Error::InsufficientPhotons { .. }) => (Cell::Int(0), Cell::Float(0.0)),
            Err(e) => return Err(e.into()),
        };
        let r = success_rate(&TargetDistribution::UniformSphere, &cfg)?;
        t.push(vec![
            m.p().into(),
            m.q().into(),
            l.into(),
            cfg.source_photons.into(),
            cfg.split.into(),
            cfg.mode.as_str().into(),
            cfg.aux_source.as_str().into(),
            r.trials.into(),
            r.successes.into(),
            r.failures.into(),
            r.rate.into(),
            r.ci_low.into(),
            r.ci_high.into(),
            r.ci95.into(),
            r.mean_angular_error.into(),
            clones,
            snr,
        ]);
    }
    Ok(t)
}

pub const Y00_COLUMNS: &[&str] = &[
    "m_levels",
    "alpha_sq",
    "split",
    "j_pulses",
    "p",
    "q",
    "levels",
    "mode",
    "aux_source",
    "trials",
    "security_ratio",
    "secure",
    "dk_threshold",
    "mean_photons_extracted",
    "attack_successes",
    "attack_rate",
    "attack_ci95",
    "attack_k_error_rate",
    "attack_failures",
    "attack_mean_angular_error",
    "baseline_successes",
    "baseline_rate",
    "baseline_ci95",
    "baseline_k_error_rate",
    "baseline_mean_angular_error",
    "cw_plus_even",
    "cw_minus_even",
    "cw_plus_odd",
    "cw_minus_odd",
];

pub fn cmd_y00(a: &Y00Args, g: &Globals) -> CliResult<ResultTable> {
    let params = Y00Params::new(a.m_levels.unwrap_or(64), a.alpha_sq.unwrap_or(100.0))?;
    let m = CloneMachine::new(a.p.unwrap_or(25), a.q.unwrap_or(50))?;
    let seed = g.seed()?;
    let trials = g.trials()?;
    let levels = a.levels.clone().unwrap_or_else(|| vec![2]);
    if levels.is_empty() {
        return Err(invalid("--levels needs at least one value"));
    }
    let margin = security_margin(&params);
    let wheel = wheel_table();
    let mut t = ResultTable::new(Y00_COLUMNS);
    t.meta.insert("security_ratio".into(), json!(margin.ratio));
    t.meta.insert("secure".into(), json!(margin.secure));
    t.meta.insert("dk_threshold".into(), json!(dk_threshold(&params)));
    t.meta.insert("wheel".into(), json!({"+even": wheel[0], "-even": wheel[1], "+odd": wheel[2], "-odd": wheel[3]}));
    for l in levels {
        let cfg = Y00AttackConfig {
            params,
            split_ratio: a.split.unwrap_or(0.5),
            j_pulses: a.j_pulses.unwrap_or(1000),
            machine: m,
            levels: l,
            mode: g.mode(),
            trials,
            seed,
            aux_source: a.aux_source.unwrap_or_default(),
        };
        let s = y00_campaign(&cfg)?;
        t.push(vec![
            params.m_levels().into(),
            params.alpha_sq().into(),
            cfg.split_ratio.into(),
            cfg.j_pulses.into(),
            m.p().into(),
            m.q().into(),
            l.into(),
            cfg.mode.as_str().into(),
            cfg.aux_source.as_str().into(),
            trials.into(),
            margin.ratio.into(),
            margin.secure.into(),
            dk_threshold(&params).into(),
            s.mean_photons_extracted.into(),
            s.attack.successes.into(),
            s.attack.rate.into(),
            s.attack.ci95.into(),
            s.attack_k_error_rate().into(),
            s.attack.failures.into(),
            s.attack.mean_angular_error.into(),
            s.baseline.successes.into(),
            s.baseline.rate.into(),
            s.baseline.ci95.into(),
            s.baseline_k_error_rate().into(),
            s.baseline.mean_angular_error.into(),
            u64::from(wheel[0]).into(),
            u64::from(wheel[1]).into(),
            u64::from(wheel[2]).into(),
            u64::from(wheel[3]).into(),
        ]);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(args: &[&str]) -> CliResult<String> {
        let mut argv = vec!["qamp"];
        argv.extend_from_slice(args);
        execute(argv).map(|(b, _)| String::from_utf8(b).unwrap())
    }

    #[test]
    fn float_cells_round_trip() {
        for v in [0.1, 1.0 / 3.0, 5.0 / 6.0, 1e-300, 12345.678] {
            assert_eq!(float_text(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(float_text(f64::INFINITY), "inf");
        assert_eq!(Cell::Float(f64::NAN).json(), json!("nan"));
    }

    #[test]
    fn error_classes() {
        assert_eq!(table(&["machine", "--p", "3", "--q", "3"]).unwrap_err().exit_code(), EXIT_VALIDATION);
        assert_eq!(table(&["attack", "--p", "1", "--q", "5"]).unwrap_err().exit_code(), EXIT_VALIDATION);
        assert_eq!(CliError::from(Error::DegenerateDirection { norm: 0.0 }).exit_code(), EXIT_RUNTIME);
    }
}
