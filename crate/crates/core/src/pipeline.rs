//! Experiment driver: simulate measurements, reconstruct, score and write
//! the output files.
//!
//! Output directory layout:
//!
//! ```text
//! data/manifest.json       distinct wavenumbers and the modes they serve
//! data/trace_l0.csv        zero-mode measurement
//! data/trace_m2_00005.csv  measurement at |l|^2 = 5
//! coefficients.csv
//! grid.csv                 x1, x2, re, im, exact, abs_err
//! report.json              deterministic
//! timing.json              wall-clock times
//! table.csv, table.txt     from `run_table`
//! ```
//!
//! Measurement files are noiseless; noise is applied at reconstruction time,
//! so one data set serves every noise level and every truncation order up to
//! the one it was generated for.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::config::{ExactGradient, ExperimentConfig, SourceKind};
use crate::error::{Error, Result};
use crate::forward::DiscreteSource;
use crate::geometry::{CartesianGrid, CircleGrid};
use crate::io::{self, fmt_f64, SCHEMA_VERSION};
use crate::lift::lift_trace;
use crate::metrics::{fd_gradient, rel_h1, rel_l2, ErrorReport};
use crate::noise::perturb_trace;
use crate::recon::{synthesize, synthesize_gradient, truncation_order, CoefficientTable, TruncationRule, WavenumberTable};
use crate::sources::SourceSpec;
use crate::trace::CauchyTrace;

/// Truncation order for a noise level under the configured rule.
pub fn truncation_for(cfg: &ExperimentConfig, delta: f64) -> Result<usize> {
    match cfg.truncation {
        TruncationRule::Fixed(n) => Ok(n),
        rule if delta == 0.0 => Err(Error::Config(format!(
            "the {} truncation rule is undefined at delta = 0; set `truncation` to an integer",
            rule_name(rule)
        ))),
        rule => truncation_order(delta, rule),
    }
}

fn rule_name(rule: TruncationRule) -> String {
    match rule {
        TruncationRule::Paper => "paper".into(),
        TruncationRule::Alt => "alt".into(),
        TruncationRule::Fixed(n) => n.to_string(),
    }
}

pub fn wavenumber_table(cfg: &ExperimentConfig, n: usize) -> Result<WavenumberTable> {
    WavenumberTable::new(n, cfg.a, cfg.lambda, cfg.k_scale)
}

pub fn load_source(cfg: &ExperimentConfig) -> Result<SourceSpec<f64>> {
    match (cfg.source.analytic(), &cfg.source_file) {
        (Some(s), _) => Ok(s.into()),
        (None, Some(path)) => io::read_gridded_source(path),
        (None, None) => Err(Error::Config("gridded source without source_file".into())),
    }
}

/// Simulation hash, extended by the contents of a gridded source file.
pub fn simulation_hash(cfg: &ExperimentConfig) -> Result<String> {
    let base = cfg.simulation_hash();
    match (&cfg.source_file, cfg.source) {
        (Some(path), SourceKind::Gridded) => {
            let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
            let mut h = Sha256::new();
            h.update(base.as_bytes());
            h.update(&bytes);
            Ok(hex::encode(&h.finalize()[..8]))
        }
        _ => Ok(base),
    }
}

/// `|l|^2` per distinct wavenumber; `None` for the zero mode.
fn distinct_norms2(table: &WavenumberTable) -> Vec<Option<i64>> {
    let mut out = vec![None; table.distinct_k.len()];
    for e in table.integer_entries() {
        let (l1, l2) = e.l.as_integer().expect("integer entry");
        out[e.distinct] = Some(i64::from(l1 * l1 + l2 * l2));
    }
    out
}

fn trace_file_name(norm2: Option<i64>) -> String {
    match norm2 {
        None => "trace_l0.csv".into(),
        Some(m2) => format!("trace_m2_{m2:05}.csv"),
    }
}

/// What the data stage did.
#[derive(Debug, Clone, Default, Serialize)]
pub struct DataStatus {
    pub data_dir: PathBuf,
    pub generated: usize,
    pub reused: usize,
    /// Stale cache files that were regenerated.
    pub warnings: Vec<String>,
    pub simulation_s: f64,
}

fn cached_trace(path: &Path, hash: &str, k: f64) -> std::result::Result<CauchyTrace<f64>, String> {
    let (trace, meta) = io::read_trace(path).map_err(|e| e.to_string())?;
    if meta.get("simulation_hash").and_then(Value::as_str) != Some(hash) {
        return Err(format!("{}: simulation hash differs, regenerating", path.display()));
    }
    if trace.wavenumber().to_bits() != k.to_bits() {
        return Err(format!("{}: wavenumber differs, regenerating", path.display()));
    }
    Ok(trace)
}

/// Measurements for every distinct wavenumber of `table`, reading valid cache
/// files from `dir` and simulating (and writing) the rest.
pub fn ensure_data(cfg: &ExperimentConfig, table: &WavenumberTable, dir: &Path) -> Result<(Vec<CauchyTrace<f64>>, DataStatus)> {
    let hash = simulation_hash(cfg)?;
    let norms = distinct_norms2(table);
    let mut status = DataStatus { data_dir: dir.to_path_buf(), ..Default::default() };
    let mut traces: Vec<Option<CauchyTrace<f64>>> = vec![None; norms.len()];
    let mut missing = Vec::new();
    for (d, &m2) in norms.iter().enumerate() {
        let path = dir.join(trace_file_name(m2));
        if !path.exists() {
            missing.push(d);
            continue;
        }
        match cached_trace(&path, &hash, table.distinct_k[d]) {
            Ok(t) => {
                traces[d] = Some(t);
                status.reused += 1;
            }
            Err(w) => {
                status.warnings.push(w);
                missing.push(d);
            }
        }
    }
    if !missing.is_empty() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let t0 = Instant::now();
        let source = load_source(cfg)?;
        let quad = CartesianGrid::new(cfg.a, cfg.quad_points_per_side)?;
        let discrete = DiscreteSource::new(&source, &quad)?;
        let circle = CircleGrid::new(cfg.r, cfg.n_m, cfg.theta_max)?;
        let fresh: Vec<CauchyTrace<f64>> =
            missing.par_iter().map(|&d| discrete.radiate(table.distinct_k[d], &circle, false)).collect::<Result<_>>()?;
        status.simulation_s = t0.elapsed().as_secs_f64();
        for (&d, trace) in missing.iter().zip(fresh) {
            let mut meta = Map::new();
            meta.insert("simulation_hash".into(), hash.clone().into());
            meta.insert("source".into(), serde_json::to_value(cfg.source).unwrap());
            meta.insert("norm2".into(), norms[d].map_or(Value::Null, Value::from));
            meta.insert("a".into(), cfg.a.into());
            meta.insert("lambda".into(), cfg.lambda.into());
            meta.insert("quad_points_per_side".into(), cfg.quad_points_per_side.into());
            meta.insert("noiseless".into(), true.into());
            io::write_trace(&dir.join(trace_file_name(norms[d])), &trace, meta)?;
            traces[d] = Some(trace);
            status.generated += 1;
        }
    }
    write_manifest(dir, table, &norms, &hash)?;
    Ok((traces.into_iter().map(|t| t.expect("every trace loaded or generated")).collect(), status))
}

fn write_manifest(dir: &Path, table: &WavenumberTable, norms: &[Option<i64>], hash: &str) -> Result<()> {
    let modes = table.modes_by_k();
    let files: Vec<Value> = norms
        .iter()
        .enumerate()
        .map(|(d, m2)| {
            json!({
                "file": trace_file_name(*m2),
                "k": table.distinct_k[d],
                "norm2": m2,
                "modes": modes[d].iter().map(|l| [l.l1, l.l2]).collect::<Vec<_>>(),
            })
        })
        .collect();
    io::write_json(
        &dir.join("manifest.json"),
        &json!({ "schema_version": SCHEMA_VERSION, "simulation_hash": hash, "n": table.n, "files": files }),
    )
}

/// Measurements for `table` read strictly from `dir`; nothing is simulated.
pub fn load_data(cfg: &ExperimentConfig, table: &WavenumberTable, dir: &Path) -> Result<Vec<CauchyTrace<f64>>> {
    let hash = simulation_hash(cfg)?;
    distinct_norms2(table)
        .iter()
        .enumerate()
        .map(|(d, &m2)| {
            let path = dir.join(trace_file_name(m2));
            if !path.exists() {
                return Err(Error::MissingData(table.distinct_k[d]));
            }
            cached_trace(&path, &hash, table.distinct_k[d]).map_err(|msg| Error::Schema { path, msg })
        })
        .collect()
}

/// Exact source on the evaluation grid, with the gradient used by the H1 error.
#[derive(Debug, Clone)]
pub struct Reference {
    pub grid: CartesianGrid<f64>,
    pub values: Vec<f64>,
    pub gradient: Option<Vec<[f64; 2]>>,
}

impl Reference {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self> {
        let grid = CartesianGrid::new(cfg.a, cfg.eval_points_per_side)?;
        let source = load_source(cfg)?;
        let values = source.sample(&grid)?;
        let gradient = if cfg.source.is_smooth() {
            Some(match cfg.exact_gradient {
                ExactGradient::FiniteDifference => fd_gradient(&values, &grid)?,
                ExactGradient::Analytic => grid
                    .points()
                    .iter()
                    .map(|&p| source.analytic_gradient(p))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::Config("no analytic gradient for this source".into()))?,
            })
        } else {
            None
        };
        Ok(Self { grid, values, gradient })
    }
}

#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub coefficients: CoefficientTable,
    pub field: Vec<Complex64>,
    pub report: ErrorReport,
}

/// Perturb, lift, invert, synthesize and score. `data` holds one noiseless
/// trace per distinct wavenumber of `table`; the wall time covers everything
/// except scoring.
pub fn reconstruct(
    cfg: &ExperimentConfig,
    table: &WavenumberTable,
    data: &[CauchyTrace<f64>],
    reference: &Reference,
) -> Result<Reconstruction> {
    let noise = cfg.noise()?;
    let t0 = Instant::now();
    let outer = CircleGrid::full(cfg.rho, cfg.out_angle_count)?;
    let lifted: Vec<CauchyTrace<f64>> = data
        .par_iter()
        .map(|t| lift_trace(&perturb_trace(t, &noise)?, &outer, cfg.n_max))
        .collect::<Result<_>>()?;
    let coefficients = CoefficientTable::from_cauchy_data(table, &lifted)?;
    let field = synthesize(&coefficients, &reference.grid);
    let gradient = reference.gradient.as_ref().map(|_| synthesize_gradient(&coefficients, &reference.grid));
    let wall_time_s = t0.elapsed().as_secs_f64();
    let l2 = rel_l2(&field, &reference.values)?;
    let h1 = match (&gradient, &reference.gradient) {
        (Some(g), Some(eg)) => Some(rel_h1(&field, g, &reference.values, eg)?),
        _ => None,
    };
    let report = ErrorReport { rel_l2: l2, rel_h1: h1, n_used: table.n, delta: cfg.delta, wall_time_s };
    Ok(Reconstruction { coefficients, field, report })
}

/// Deterministic summary written to `report.json`.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u64,
    pub config_hash: String,
    pub simulation_hash: String,
    pub errors: ErrorReport,
    pub truncation: String,
    pub seed: u64,
    pub k_scale: f64,
    pub distinct_wavenumbers: usize,
    pub zero_mode: [f64; 2],
    /// The configuration, without output locations.
    pub config: Value,
}

fn config_echo(cfg: &ExperimentConfig) -> Value {
    let mut v = serde_json::to_value(cfg).expect("config serializes");
    let m = v.as_object_mut().unwrap();
    m.remove("output_dir");
    m.remove("data_dir");
    v
}

fn write_outputs(cfg: &ExperimentConfig, table: &WavenumberTable, rec: &Reconstruction, reference: &Reference, data: &DataStatus) -> Result<RunReport> {
    let out = &cfg.output_dir;
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let config_hash = cfg.config_hash();
    let mut meta = Map::new();
    meta.insert("config_hash".into(), config_hash.clone().into());
    io::write_coefficients(&out.join("coefficients.csv"), &rec.coefficients, meta.clone())?;
    let rows: Vec<Vec<String>> = reference
        .grid
        .points()
        .iter()
        .zip(&rec.field)
        .zip(&reference.values)
        .map(|((p, s), e)| {
            vec![fmt_f64(p.x1), fmt_f64(p.x2), fmt_f64(s.re), fmt_f64(s.im), fmt_f64(*e), fmt_f64((s - e).norm())]
        })
        .collect();
    let mut gmeta = meta;
    gmeta.insert("points_per_side".into(), reference.grid.points_per_side().into());
    gmeta.insert("a".into(), cfg.a.into());
    io::write_csv(&out.join("grid.csv"), &io::header("grid", gmeta), &["x1", "x2", "re", "im", "exact", "abs_err"], &rows)?;
    let z = rec.coefficients.zero_mode().unwrap_or_default();
    let report = RunReport {
        schema_version: SCHEMA_VERSION,
        config_hash,
        simulation_hash: simulation_hash(cfg)?,
        errors: rec.report.clone(),
        truncation: rule_name(cfg.truncation),
        seed: cfg.seed,
        k_scale: table.k_scale,
        distinct_wavenumbers: table.distinct_k.len(),
        zero_mode: [z.re, z.im],
        config: config_echo(cfg),
    };
    io::write_json(&out.join("report.json"), &report)?;
    io::write_json(
        &out.join("timing.json"),
        &json!({
            "reconstruction_s": rec.report.wall_time_s,
            "simulation_s": data.simulation_s,
            "generated": data.generated,
            "reused": data.reused,
        }),
    )?;
    Ok(report)
}

/// Simulate the measurements required by `cfg` into its data directory.
pub fn run_simulate(cfg: &ExperimentConfig) -> Result<DataStatus> {
    cfg.validate()?;
    let table = wavenumber_table(cfg, truncation_for(cfg, cfg.delta)?)?;
    Ok(ensure_data(cfg, &table, &cfg.data_dir())?.1)
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub reconstruction: Reconstruction,
    pub report: RunReport,
    pub data: DataStatus,
}

/// Reconstruct from existing data files and write all outputs.
pub fn run_reconstruct(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let table = wavenumber_table(cfg, truncation_for(cfg, cfg.delta)?)?;
    let dir = cfg.data_dir();
    let data = load_data(cfg, &table, &dir)?;
    let status = DataStatus { data_dir: dir, reused: data.len(), ..Default::default() };
    finish(cfg, &table, &data, status)
}

/// Simulate what is missing from the cache, then reconstruct.
pub fn run_pipeline(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let table = wavenumber_table(cfg, truncation_for(cfg, cfg.delta)?)?;
    let (data, status) = ensure_data(cfg, &table, &cfg.data_dir())?;
    finish(cfg, &table, &data, status)
}

fn finish(cfg: &ExperimentConfig, table: &WavenumberTable, data: &[CauchyTrace<f64>], status: DataStatus) -> Result<RunOutcome> {
    let reference = Reference::new(cfg)?;
    let rec = reconstruct(cfg, table, data, &reference)?;
    let report = write_outputs(cfg, table, &rec, &reference, &status)?;
    Ok(RunOutcome { reconstruction: rec, report, data: status })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub delta: f64,
    pub seed: u64,
    pub n: usize,
    pub rel_l2: f64,
    pub rel_h1: Option<f64>,
    pub wall_time_s: f64,
}

/// Error table over noise levels and seeds. Data are simulated once for the
/// largest truncation order; smaller orders use a subset of the same files.
pub fn run_table(cfg: &ExperimentConfig, deltas: &[f64], seeds: &[u64]) -> Result<(Vec<TableRow>, DataStatus)> {
    cfg.validate()?;
    if deltas.is_empty() || seeds.is_empty() {
        return Err(Error::Config("table needs at least one delta and one seed".into()));
    }
    let orders = deltas.iter().map(|&d| truncation_for(cfg, d)).collect::<Result<Vec<_>>>()?;
    let n_top = *orders.iter().max().unwrap();
    let top = wavenumber_table(cfg, n_top)?;
    let (all_data, status) = ensure_data(cfg, &top, &cfg.data_dir())?;
    let by_k: BTreeMap<u64, &CauchyTrace<f64>> = top.distinct_k.iter().map(|k| k.to_bits()).zip(&all_data).collect();
    let reference = Reference::new(cfg)?;
    let mut rows = Vec::new();
    for (&delta, &n) in deltas.iter().zip(&orders) {
        let table = wavenumber_table(cfg, n)?;
        let data: Vec<CauchyTrace<f64>> = table.distinct_k.iter().map(|k| by_k[&k.to_bits()].clone()).collect();
        for &seed in seeds {
            let c = ExperimentConfig { delta, seed, ..cfg.clone() };
            let r = reconstruct(&c, &table, &data, &reference)?.report;
            rows.push(TableRow { delta, seed, n, rel_l2: r.rel_l2, rel_h1: r.rel_h1, wall_time_s: r.wall_time_s });
        }
    }
    write_table(&cfg.output_dir, &rows)?;
    Ok((rows, status))
}

fn write_table(out: &Path, rows: &[TableRow]) -> Result<()> {
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let opt = |v: Option<f64>| v.map_or_else(String::new, fmt_f64);
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![fmt_f64(r.delta), r.seed.to_string(), r.n.to_string(), fmt_f64(r.rel_l2), opt(r.rel_h1), fmt_f64(r.wall_time_s)]
        })
        .collect();
    io::write_csv(
        &out.join("table.csv"),
        &io::header("table", Map::new()),
        &["delta", "seed", "n", "rel_l2", "rel_h1", "wall_time_s"],
        &csv_rows,
    )?;
    let mut txt = format!("{:>8} {:>6} {:>4} {:>10} {:>10} {:>9}\n", "delta", "seed", "N", "L2 (%)", "H1 (%)", "time (s)");
    for r in rows {
        let h1 = r.rel_h1.map_or_else(|| "-".into(), |v| format!("{:.4}", 100.0 * v));
        let _ = writeln!(
            txt,
            "{:>8} {:>6} {:>4} {:>10.4} {:>10} {:>9.3}",
            format!("{}%", 100.0 * r.delta),
            r.seed,
            r.n,
            100.0 * r.rel_l2,
            h1,
            r.wall_time_s
        );
    }
    let path = out.join("table.txt");
    fs::write(&path, txt).map_err(|e| Error::io(&path, e))
}
