//! CSV/JSON front door: ingest price files, run the estimators or the full
//! pipeline, and emit machine-readable reports.
//!
//! Configuration is a flat `key = value` file (`#` starts a comment);
//! command-line `--set key=value` overrides win over the file, and the
//! dedicated `--seed` flag wins over both. Unknown keys are rejected.
//!
//! Every artifact is written deterministically: markets are sorted by id,
//! floats are printed in shortest round-trip form (the exact value is
//! recoverable bit-for-bit), and no timestamps are embedded. Two runs with
//! the same inputs, config, and seed produce byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::apen::{compute_apen, ApEnConfig, ApEnError};
use crate::dfa::{estimate_hurst, DfaConfig, DfaError, DfaOutcome};
use crate::nn::{walk_forward_forecasts, EmbeddingConfig, NnError};
use crate::pipeline::{
    cross_market_correlations, run_panel_returns, MarketSummary, PipelineError,
};
use crate::synthetic::{gen_panel, PanelKind, PanelSpec, SynthError};
use crate::timeseries::{
    build_window_plan, log_returns, price_series_from_returns, PlanError, PriceSeries,
    ReturnSeries, SeriesError, WindowPlan,
};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Malformed {
        path: PathBuf,
        line: u64,
        message: String,
    },
    #[error("{path}: expected header `date,close`, found `{found}`")]
    BadHeader { path: PathBuf, found: String },
    #[error("config: unknown key `{0}`")]
    UnknownKey(String),
    #[error("config: key `{key}`: {message}")]
    BadValue { key: String, message: String },
    #[error("no input series; pass --input or configure a synthetic panel")]
    NoInput,
    #[error("command needs exactly one --input (the summary.json of a pipeline run)")]
    NeedsSummaryInput,
    #[error("artifact {path} failed validation: {message}")]
    Validation { path: PathBuf, message: String },
    #[error("market {market}, window t={t}: degenerate estimation window (zero fluctuation at scale {scale})")]
    DegenerateWindow {
        market: String,
        t: usize,
        scale: usize,
    },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Dfa(#[from] DfaError),
    #[error(transparent)]
    ApEn(#[from] ApEnError),
    #[error(transparent)]
    Nn(#[from] NnError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Everything a run needs: window calendar, estimator configs, synthetic
/// panel parameters, seed, and output formats.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub estimation_len: usize,
    pub shift_len: usize,
    pub prediction_len: usize,
    pub dfa_scales: Vec<usize>,
    pub dfa_detrend_degree: usize,
    pub apen_m: usize,
    pub apen_r_fraction: f64,
    pub nn_m: usize,
    pub nn_tau: usize,
    pub nn_k: usize,
    pub seed: u64,
    pub panel_markets: usize,
    pub panel_len: usize,
    pub panel_hurst_min: f64,
    pub panel_hurst_max: f64,
    pub panel_scale: f64,
    pub panel_kind: PanelKind,
    pub initial_price: f64,
    pub emit_json: bool,
    pub emit_csv: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            estimation_len: 1260,
            shift_len: 252,
            prediction_len: 252,
            dfa_scales: vec![16, 32, 64, 128, 256],
            dfa_detrend_degree: 1,
            apen_m: 2,
            apen_r_fraction: 0.20,
            nn_m: 2,
            nn_tau: 1,
            nn_k: 20,
            seed: 42,
            panel_markets: 27,
            panel_len: 3780,
            panel_hurst_min: 0.45,
            panel_hurst_max: 0.70,
            panel_scale: 0.01,
            panel_kind: PanelKind::Fgn,
            initial_price: 100.0,
            emit_json: true,
            emit_csv: true,
        }
    }
}

fn parse_as<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ReportError>
where
    T::Err: std::fmt::Display,
{
    value.trim().parse().map_err(|e| ReportError::BadValue {
        key: key.to_string(),
        message: format!("{e}"),
    })
}

impl RunConfig {
    /// Reads a flat `key = value` file and applies it over the defaults.
    pub fn from_file(path: &Path) -> Result<Self, ReportError> {
        let text = fs::read_to_string(path).map_err(|source| ReportError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg = Self::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), ReportError> {
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ReportError::BadValue {
                key: line.to_string(),
                message: "expected `key = value`".to_string(),
            })?;
            self.apply_kv(key.trim(), value.trim())?;
        }
        Ok(())
    }

    /// Applies one override; values use the same syntax as the file.
    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<(), ReportError> {
        let value = value.trim().trim_matches('"');
        match key {
            "estimation_len" => self.estimation_len = parse_as(key, value)?,
            "shift_len" => self.shift_len = parse_as(key, value)?,
            "prediction_len" => self.prediction_len = parse_as(key, value)?,
            "dfa_scales" => {
                self.dfa_scales = value
                    .split(',')
                    .map(|s| parse_as(key, s))
                    .collect::<Result<_, _>>()?;
            }
            "dfa_detrend_degree" => self.dfa_detrend_degree = parse_as(key, value)?,
            "apen_m" => self.apen_m = parse_as(key, value)?,
            "apen_r_fraction" => self.apen_r_fraction = parse_as(key, value)?,
            "nn_m" => self.nn_m = parse_as(key, value)?,
            "nn_tau" => self.nn_tau = parse_as(key, value)?,
            "nn_k" => self.nn_k = parse_as(key, value)?,
            "seed" => self.seed = parse_as(key, value)?,
            "panel_markets" => self.panel_markets = parse_as(key, value)?,
            "panel_len" => self.panel_len = parse_as(key, value)?,
            "panel_hurst_min" => self.panel_hurst_min = parse_as(key, value)?,
            "panel_hurst_max" => self.panel_hurst_max = parse_as(key, value)?,
            "panel_scale" => self.panel_scale = parse_as(key, value)?,
            "panel_kind" => {
                self.panel_kind = match value {
                    "fgn" => PanelKind::Fgn,
                    "surrogate" => PanelKind::Surrogate,
                    other => {
                        return Err(ReportError::BadValue {
                            key: key.to_string(),
                            message: format!("expected `fgn` or `surrogate`, got `{other}`"),
                        })
                    }
                }
            }
            "initial_price" => self.initial_price = parse_as(key, value)?,
            "formats" => {
                self.emit_json = false;
                self.emit_csv = false;
                for f in value.split(',') {
                    match f.trim() {
                        "json" => self.emit_json = true,
                        "csv" => self.emit_csv = true,
                        other => {
                            return Err(ReportError::BadValue {
                                key: key.to_string(),
                                message: format!("unknown format `{other}`"),
                            })
                        }
                    }
                }
            }
            other => return Err(ReportError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    pub fn window_plan(&self) -> Result<WindowPlan, ReportError> {
        Ok(WindowPlan::new(
            self.estimation_len,
            self.shift_len,
            self.prediction_len,
        )?)
    }

    pub fn dfa_config(&self) -> Result<DfaConfig, ReportError> {
        Ok(DfaConfig::with_degree(
            self.dfa_scales.clone(),
            self.dfa_detrend_degree,
        )?)
    }

    pub fn apen_config(&self) -> Result<ApEnConfig, ReportError> {
        Ok(ApEnConfig::new(self.apen_m, self.apen_r_fraction)?)
    }

    pub fn embedding_config(&self) -> Result<EmbeddingConfig, ReportError> {
        Ok(EmbeddingConfig::new(self.nn_m, self.nn_tau, self.nn_k)?)
    }

    pub fn panel_spec(&self) -> PanelSpec {
        PanelSpec {
            markets: self.panel_markets,
            len: self.panel_len,
            hurst_min: self.panel_hurst_min,
            hurst_max: self.panel_hurst_max,
            scale: self.panel_scale,
            kind: self.panel_kind,
            seed: self.seed,
        }
    }
}

/// Reads a `date,close` CSV into a validated price series; the market id is
/// the file stem. Malformed rows and out-of-order dates are reported with
/// their line number.
pub fn ingest_csv(path: &Path) -> Result<PriceSeries, ReportError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| csv_open_error(path, e))?;

    let headers = reader.headers().map_err(|e| csv_open_error(path, e))?;
    if headers.len() != 2 || &headers[0] != "date" || &headers[1] != "close" {
        return Err(ReportError::BadHeader {
            path: path.to_path_buf(),
            found: headers.iter().collect::<Vec<_>>().join(","),
        });
    }

    let mut dates = Vec::new();
    let mut prices = Vec::new();
    let mut prev: Option<NaiveDate> = None;
    for record in reader.records() {
        let record = record.map_err(|e| csv_open_error(path, e))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let malformed = |message: String| ReportError::Malformed {
            path: path.to_path_buf(),
            line,
            message,
        };
        if record.len() != 2 {
            return Err(malformed(format!("expected 2 fields, got {}", record.len())));
        }
        let date = NaiveDate::parse_from_str(&record[0], "%Y-%m-%d")
            .map_err(|e| malformed(format!("bad date `{}`: {e}", &record[0])))?;
        let close: f64 = record[1]
            .parse()
            .map_err(|e| malformed(format!("bad close `{}`: {e}", &record[1])))?;
        if !(close.is_finite() && close > 0.0) {
            return Err(malformed(format!("close must be a positive number, got {close}")));
        }
        if let Some(p) = prev {
            if date <= p {
                return Err(malformed(format!("date {date} not after {p}")));
            }
        }
        prev = Some(date);
        dates.push(date);
        prices.push(close);
    }
    let market_id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "unnamed".to_string());
    Ok(PriceSeries::new(market_id, dates, prices)?)
}

fn csv_open_error(path: &Path, e: csv::Error) -> ReportError {
    match e.kind() {
        csv::ErrorKind::Io(_) => {
            if let csv::ErrorKind::Io(io) = e.into_kind() {
                ReportError::Io {
                    path: path.to_path_buf(),
                    source: io,
                }
            } else {
                unreachable!("kind checked above")
            }
        }
        _ => ReportError::Malformed {
            path: path.to_path_buf(),
            line: e.position().map(|p| p.line()).unwrap_or(0),
            message: e.to_string(),
        },
    }
}

/// Paths written by a command, in write order.
#[derive(Debug, Default)]
pub struct Artifacts {
    pub written: Vec<PathBuf>,
}

impl Artifacts {
    fn record(&mut self, path: PathBuf) {
        self.written.push(path);
    }
}

fn load_inputs(cfg: &RunConfig, inputs: &[PathBuf]) -> Result<Vec<ReturnSeries>, ReportError> {
    if inputs.is_empty() {
        return Ok(gen_panel(&cfg.panel_spec())?);
    }
    let mut files = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut entries: Vec<PathBuf> = fs::read_dir(input)
                .map_err(|source| ReportError::Io {
                    path: input.clone(),
                    source,
                })?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|ext| ext == "csv"))
                .collect();
            entries.sort();
            files.extend(entries);
        } else {
            files.push(input.clone());
        }
    }
    if files.is_empty() {
        return Err(ReportError::NoInput);
    }
    files
        .iter()
        .map(|f| Ok(log_returns(&ingest_csv(f)?)))
        .collect()
}

fn write_file(out: &mut Artifacts, path: PathBuf, contents: &str) -> Result<(), ReportError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|source| ReportError::Io {
            path: parent.to_path_buf(),
            source,
        })?;
    }
    fs::write(&path, contents).map_err(|source| ReportError::Io {
        path: path.clone(),
        source,
    })?;
    out.record(path);
    Ok(())
}

fn write_json<T: Serialize>(
    out: &mut Artifacts,
    path: PathBuf,
    value: &T,
) -> Result<(), ReportError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_file(out, path.clone(), &text)?;
    verify_json(&path)
}

fn verify_json(path: &Path) -> Result<(), ReportError> {
    let text = fs::read_to_string(path).map_err(|source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str::<serde_json::Value>(&text).map_err(|e| ReportError::Validation {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    Ok(())
}

fn verify_csv(path: &Path, expected_rows: usize) -> Result<(), ReportError> {
    let text = fs::read_to_string(path).map_err(|source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let rows = text.lines().skip(1).filter(|l| !l.trim().is_empty()).count();
    if rows != expected_rows {
        return Err(ReportError::Validation {
            path: path.to_path_buf(),
            message: format!("expected {expected_rows} data rows, found {rows}"),
        });
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct WindowedHurst {
    t: usize,
    hurst: f64,
    log_intercept: f64,
    r_squared: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct MarketHurst {
    market: String,
    windows: Vec<WindowedHurst>,
}

/// `hurst`: per-window DFA results (JSON) and one `scale,fluctuation` CSV
/// per window. Degenerate windows abort with a diagnostic.
pub fn cmd_hurst(
    cfg: &RunConfig,
    inputs: &[PathBuf],
    out_dir: &Path,
) -> Result<Artifacts, ReportError> {
    let plan = cfg.window_plan()?;
    let dfa = cfg.dfa_config()?;
    let mut markets = load_inputs(cfg, inputs)?;
    markets.sort_by(|a, b| a.market_id().cmp(b.market_id()));

    let mut out = Artifacts::default();
    let mut report = Vec::new();
    for series in &markets {
        let subs = build_window_plan(series.len(), &plan)?;
        let mut windows = Vec::with_capacity(subs.len());
        for sub in &subs {
            let window = &series.values()[sub.estimation.clone()];
            match estimate_hurst(window, &dfa)? {
                DfaOutcome::Estimate(r) => {
                    if cfg.emit_csv {
                        let mut csv_text = String::from("scale,fluctuation\n");
                        for &(n, f) in &r.per_scale {
                            writeln!(csv_text, "{n},{f}").expect("string write");
                        }
                        let path =
                            out_dir.join(format!("{}_t{:02}_dfa.csv", series.market_id(), sub.index));
                        let rows = r.per_scale.len();
                        write_file(&mut out, path.clone(), &csv_text)?;
                        verify_csv(&path, rows)?;
                    }
                    windows.push(WindowedHurst {
                        t: sub.index,
                        hurst: r.hurst,
                        log_intercept: r.log_intercept,
                        r_squared: r.r_squared,
                    });
                }
                DfaOutcome::Degenerate { scale } => {
                    return Err(ReportError::DegenerateWindow {
                        market: series.market_id().to_string(),
                        t: sub.index,
                        scale,
                    });
                }
            }
        }
        report.push(MarketHurst {
            market: series.market_id().to_string(),
            windows,
        });
    }
    if cfg.emit_json {
        write_json(&mut out, out_dir.join("hurst.json"), &report)?;
    }
    Ok(out)
}

#[derive(Debug, Serialize, Deserialize)]
struct WindowedApEn {
    t: usize,
    value: f64,
    phi_m: f64,
    phi_m_plus_1: f64,
    n_used: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct MarketApEn {
    market: String,
    windows: Vec<WindowedApEn>,
}

/// `apen`: per-window approximate entropy (JSON).
pub fn cmd_apen(
    cfg: &RunConfig,
    inputs: &[PathBuf],
    out_dir: &Path,
) -> Result<Artifacts, ReportError> {
    let plan = cfg.window_plan()?;
    let apen = cfg.apen_config()?;
    let mut markets = load_inputs(cfg, inputs)?;
    markets.sort_by(|a, b| a.market_id().cmp(b.market_id()));

    let mut out = Artifacts::default();
    let mut report = Vec::new();
    for series in &markets {
        let subs = build_window_plan(series.len(), &plan)?;
        let mut windows = Vec::with_capacity(subs.len());
        for sub in &subs {
            let window = &series.values()[sub.estimation.clone()];
            let r = compute_apen(window, &apen)?;
            windows.push(WindowedApEn {
                t: sub.index,
                value: r.value,
                phi_m: r.phi_m,
                phi_m_plus_1: r.phi_m_plus_1,
                n_used: r.n_used,
            });
        }
        report.push(MarketApEn {
            market: series.market_id().to_string(),
            windows,
        });
    }
    write_json(&mut out, out_dir.join("apen.json"), &report)?;
    Ok(out)
}

#[derive(Debug, Serialize, Deserialize)]
struct WindowedHitRate {
    t: usize,
    hits: usize,
    total: usize,
    hit_rate: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct MarketHitRate {
    market: String,
    windows: Vec<WindowedHitRate>,
}

/// `predict`: per-window hit-rates (JSON) plus a per-day forecast trace CSV
/// `date,predicted,actual,hit` per market.
pub fn cmd_predict(
    cfg: &RunConfig,
    inputs: &[PathBuf],
    out_dir: &Path,
) -> Result<Artifacts, ReportError> {
    let plan = cfg.window_plan()?;
    let nn = cfg.embedding_config()?;
    let mut markets = load_inputs(cfg, inputs)?;
    markets.sort_by(|a, b| a.market_id().cmp(b.market_id()));

    let mut out = Artifacts::default();
    let mut report = Vec::new();
    for series in &markets {
        let subs = build_window_plan(series.len(), &plan)?;
        let mut windows = Vec::with_capacity(subs.len());
        let mut trace = String::from("date,predicted,actual,hit\n");
        let mut trace_rows = 0usize;
        for sub in &subs {
            let days = walk_forward_forecasts(series, sub, &nn)?;
            let hits = days.iter().filter(|d| d.hit).count();
            windows.push(WindowedHitRate {
                t: sub.index,
                hits,
                total: days.len(),
                hit_rate: hits as f64 / days.len() as f64,
            });
            for day in &days {
                writeln!(
                    trace,
                    "{},{},{},{}",
                    series.dates()[day.day],
                    day.predicted,
                    day.actual,
                    u8::from(day.hit)
                )
                .expect("string write");
                trace_rows += 1;
            }
        }
        if cfg.emit_csv {
            let path = out_dir.join(format!("{}_trace.csv", series.market_id()));
            write_file(&mut out, path.clone(), &trace)?;
            verify_csv(&path, trace_rows)?;
        }
        report.push(MarketHitRate {
            market: series.market_id().to_string(),
            windows,
        });
    }
    if cfg.emit_json {
        write_json(&mut out, out_dir.join("predict.json"), &report)?;
    }
    Ok(out)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SummaryDocument {
    pub markets: Vec<MarketSummary>,
}

/// `pipeline`: full rolling run over every market — `summary.json`,
/// `correlations.json`, and the flat `subperiods.csv`
/// (`market,t,H,A,NN`).
pub fn cmd_pipeline(
    cfg: &RunConfig,
    inputs: &[PathBuf],
    out_dir: &Path,
) -> Result<Artifacts, ReportError> {
    let plan = cfg.window_plan()?;
    let dfa = cfg.dfa_config()?;
    let apen = cfg.apen_config()?;
    let nn = cfg.embedding_config()?;
    let mut markets = load_inputs(cfg, inputs)?;
    markets.sort_by(|a, b| a.market_id().cmp(b.market_id()));

    let mut summaries = run_panel_returns(&markets, &plan, &dfa, &apen, &nn)?;
    summaries.sort_by(|a, b| a.market_id.cmp(&b.market_id));
    let correlations = cross_market_correlations(&summaries)?;

    let mut out = Artifacts::default();
    if cfg.emit_json {
        write_json(
            &mut out,
            out_dir.join("summary.json"),
            &SummaryDocument { markets: summaries.clone() },
        )?;
        write_json(&mut out, out_dir.join("correlations.json"), &correlations)?;
    }
    if cfg.emit_csv {
        let mut csv_text = String::from("market,t,H,A,NN\n");
        let mut rows = 0usize;
        for s in &summaries {
            for row in &s.per_subperiod {
                writeln!(
                    csv_text,
                    "{},{},{},{},{}",
                    s.market_id, row.t, row.hurst, row.apen, row.hit_rate
                )
                .expect("string write");
                rows += 1;
            }
        }
        let path = out_dir.join("subperiods.csv");
        write_file(&mut out, path.clone(), &csv_text)?;
        verify_csv(&path, rows)?;
    }
    Ok(out)
}

/// `synth`: write the configured synthetic panel as `date,close` price
/// CSVs, one file per market, ready for re-ingestion.
pub fn cmd_synth(cfg: &RunConfig, out_dir: &Path) -> Result<Artifacts, ReportError> {
    let panel = gen_panel(&cfg.panel_spec())?;
    let mut out = Artifacts::default();
    for series in &panel {
        let prices = price_series_from_returns(series, cfg.initial_price)?;
        let mut csv_text = String::from("date,close\n");
        for (date, price) in prices.dates().iter().zip(prices.prices()) {
            writeln!(csv_text, "{date},{price}").expect("string write");
        }
        let path = out_dir.join(format!("{}.csv", series.market_id()));
        let rows = prices.len();
        write_file(&mut out, path.clone(), &csv_text)?;
        verify_csv(&path, rows)?;
    }
    Ok(out)
}

/// `scatter`: project a pipeline `summary.json` onto plot-ready axes —
/// `scatter_HA.csv` (x = mean ApEn, y = mean Hurst), `scatter_NNA.csv`
/// (x = mean ApEn, y = mean hit-rate), `scatter_NNH.csv` (x = mean Hurst,
/// y = mean hit-rate); one `x,y,label` row per market.
pub fn cmd_scatter(inputs: &[PathBuf], out_dir: &Path) -> Result<Artifacts, ReportError> {
    if inputs.len() != 1 {
        return Err(ReportError::NeedsSummaryInput);
    }
    let path = if inputs[0].is_dir() {
        inputs[0].join("summary.json")
    } else {
        inputs[0].clone()
    };
    let text = fs::read_to_string(&path).map_err(|source| ReportError::Io {
        path: path.clone(),
        source,
    })?;
    let summary: SummaryDocument = serde_json::from_str(&text)?;
    let mut markets = summary.markets;
    markets.sort_by(|a, b| a.market_id.cmp(&b.market_id));

    type Projection = fn(&MarketSummary) -> (f64, f64);
    let mut out = Artifacts::default();
    let planes: [(&str, Projection); 3] = [
        ("scatter_HA.csv", |s| (s.mean_apen, s.mean_hurst)),
        ("scatter_NNA.csv", |s| (s.mean_apen, s.mean_hit_rate)),
        ("scatter_NNH.csv", |s| (s.mean_hurst, s.mean_hit_rate)),
    ];
    for (name, project) in planes {
        let mut csv_text = String::from("x,y,label\n");
        for s in &markets {
            let (x, y) = project(s);
            writeln!(csv_text, "{x},{y},{}", s.market_id).expect("string write");
        }
        let path = out_dir.join(name);
        write_file(&mut out, path.clone(), &csv_text)?;
        verify_csv(&path, markets.len())?;
    }
    Ok(out)
}
