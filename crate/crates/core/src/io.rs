//! CSV files with a one-line JSON header comment.
//!
//! ```text
//! # {"schema_version":1,"kind":"trace",...}
//! col_a,col_b
//! 1e0,2.5e-1
//! ```
//!
//! Floats are written in shortest round-trip exponent form, so a file
//! rewritten from its own contents is byte-identical.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use num_complex::Complex64;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::geometry::{CartesianGrid, CircleGrid};
use crate::recon::CoefficientTable;
use crate::sources::SourceSpec;
use crate::trace::CauchyTrace;

pub const SCHEMA_VERSION: u64 = 1;

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:e}")
}

/// Header for a file of the given kind; extra metadata is merged in.
pub fn header(kind: &str, meta: Map<String, Value>) -> Map<String, Value> {
    let mut h = Map::new();
    h.insert("schema_version".into(), SCHEMA_VERSION.into());
    h.insert("kind".into(), kind.into());
    h.extend(meta);
    h
}

pub fn write_csv(path: &Path, header: &Map<String, Value>, columns: &[&str], rows: &[Vec<String>]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut buf = Vec::new();
    writeln!(buf, "# {}", Value::Object(header.clone())).expect("write to memory");
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        let io_err = |e: csv::Error| Error::io(path, std::io::Error::other(e));
        w.write_record(columns).map_err(io_err)?;
        for r in rows {
            w.write_record(r).map_err(io_err)?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
    }
    fs::write(path, buf).map_err(|e| Error::io(path, e))
}

/// A parsed file: header, column names and string cells.
#[derive(Debug, Clone)]
pub struct CsvTable {
    pub header: Map<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn column(&self, path: &Path, name: &str) -> Result<usize> {
        self.columns.iter().position(|c| c == name).ok_or_else(|| Error::Schema {
            path: path.into(),
            msg: format!("missing column `{name}`"),
        })
    }

    /// Parse column `col` of every row as `f64`.
    pub fn floats(&self, path: &Path, name: &str) -> Result<Vec<f64>> {
        let col = self.column(path, name)?;
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r[col].parse::<f64>().map_err(|e| Error::Parse {
                    path: path.into(),
                    line: i + 3,
                    msg: format!("column `{name}`: {e}"),
                })
            })
            .collect()
    }

    pub fn complex(&self, path: &Path, re: &str, im: &str) -> Result<Vec<Complex64>> {
        let (re, im) = (self.floats(path, re)?, self.floats(path, im)?);
        Ok(re.into_iter().zip(im).map(|(a, b)| Complex64::new(a, b)).collect())
    }

    pub fn meta_f64(&self, path: &Path, key: &str) -> Result<f64> {
        self.header.get(key).and_then(Value::as_f64).ok_or_else(|| Error::Schema {
            path: path.into(),
            msg: format!("header lacks numeric `{key}`"),
        })
    }
}

pub fn read_csv(path: &Path, kind: &str) -> Result<CsvTable> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = BufReader::new(file);
    let mut first = String::new();
    reader.read_line(&mut first).map_err(|e| Error::io(path, e))?;
    let parse_err = |line: usize, msg: String| Error::Parse { path: path.into(), line, msg };
    let json = first.trim_end().strip_prefix("# ").ok_or_else(|| parse_err(1, "missing `# {json}` header".into()))?;
    let header: Map<String, Value> = serde_json::from_str(json).map_err(|e| parse_err(1, e.to_string()))?;
    let version = header.get("schema_version").and_then(Value::as_u64);
    if version != Some(SCHEMA_VERSION) {
        return Err(Error::Schema {
            path: path.into(),
            msg: format!("schema version {version:?}, expected {SCHEMA_VERSION}"),
        });
    }
    if header.get("kind").and_then(Value::as_str) != Some(kind) {
        return Err(Error::Schema { path: path.into(), msg: format!("expected a `{kind}` file") });
    }
    let mut r = csv::Reader::from_reader(reader);
    let columns = r
        .headers()
        .map_err(|e| parse_err(2, e.to_string()))?
        .iter()
        .map(str::to_owned)
        .collect();
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| parse_err(i + 3, e.to_string()))?;
        rows.push(rec.iter().map(str::to_owned).collect());
    }
    Ok(CsvTable { header, columns, rows })
}

const TRACE_COLUMNS: [&str; 6] = ["j", "theta", "u_re", "u_im", "lap_u_re", "lap_u_im"];

/// Dirichlet trace; `meta` must not collide with the geometric keys written here.
pub fn write_trace(path: &Path, trace: &CauchyTrace<f64>, mut meta: Map<String, Value>) -> Result<()> {
    let c = trace.circle();
    meta.insert("k".into(), trace.wavenumber().into());
    meta.insert("radius".into(), c.radius().into());
    meta.insert("aperture".into(), c.aperture().into());
    meta.insert("angle_count".into(), c.angle_count().into());
    let rows = (0..c.angle_count())
        .map(|j| {
            let (u, l) = (trace.u()[j], trace.lap_u()[j]);
            vec![(j + 1).to_string(), fmt_f64(c.angles()[j]), fmt_f64(u.re), fmt_f64(u.im), fmt_f64(l.re), fmt_f64(l.im)]
        })
        .collect::<Vec<_>>();
    write_csv(path, &header("trace", meta), &TRACE_COLUMNS, &rows)
}

pub fn read_trace(path: &Path) -> Result<(CauchyTrace<f64>, Map<String, Value>)> {
    let t = read_csv(path, "trace")?;
    let count = t.meta_f64(path, "angle_count")? as usize;
    let circle = CircleGrid::new(t.meta_f64(path, "radius")?, count, t.meta_f64(path, "aperture")?)?;
    let u = t.complex(path, "u_re", "u_im")?;
    let lap = t.complex(path, "lap_u_re", "lap_u_im")?;
    let trace = CauchyTrace::dirichlet(t.meta_f64(path, "k")?, circle, u, lap)
        .map_err(|e| Error::Schema { path: path.into(), msg: e.to_string() })?;
    Ok((trace, t.header))
}

const COEFF_COLUMNS: [&str; 5] = ["mode", "l1", "l2", "re", "im"];

pub fn write_coefficients(path: &Path, table: &CoefficientTable, meta: Map<String, Value>) -> Result<()> {
    let mut meta = meta;
    meta.insert("a".into(), table.a.into());
    meta.insert("n".into(), table.n.into());
    meta.insert("lambda".into(), table.lambda.into());
    let mut rows: Vec<Vec<String>> = Vec::new();
    if let Some(z) = table.zero_mode() {
        rows.push(vec!["zero".into(), fmt_f64(table.lambda), "0".into(), fmt_f64(z.re), fmt_f64(z.im)]);
    }
    for ((l1, l2), v) in table.integer_modes() {
        rows.push(vec!["int".into(), l1.to_string(), l2.to_string(), fmt_f64(v.re), fmt_f64(v.im)]);
    }
    write_csv(path, &header("coefficients", meta), &COEFF_COLUMNS, &rows)
}

pub fn read_coefficients(path: &Path) -> Result<CoefficientTable> {
    let t = read_csv(path, "coefficients")?;
    let mut table =
        CoefficientTable::empty(t.meta_f64(path, "a")?, t.meta_f64(path, "n")? as usize, t.meta_f64(path, "lambda")?);
    let (mode, l1c, l2c) = (t.column(path, "mode")?, t.column(path, "l1")?, t.column(path, "l2")?);
    let values = t.complex(path, "re", "im")?;
    for (i, (row, v)) in t.rows.iter().zip(values).enumerate() {
        let bad = |msg: String| Error::Parse { path: path.into(), line: i + 3, msg };
        match row[mode].as_str() {
            "zero" => table.set_zero_mode(v),
            "int" => {
                let l1 = row[l1c].parse::<i32>().map_err(|e| bad(e.to_string()))?;
                let l2 = row[l2c].parse::<i32>().map_err(|e| bad(e.to_string()))?;
                table.set(l1, l2, v).map_err(|e| bad(e.to_string()))?;
            }
            other => return Err(bad(format!("unknown mode kind `{other}`"))),
        }
    }
    Ok(table)
}

/// Gridded source from columns `x1, x2, value` in grid order (x1 fastest).
pub fn read_gridded_source(path: &Path) -> Result<SourceSpec<f64>> {
    let t = read_csv(path, "source_grid")?;
    let (x1, x2, v) = (t.floats(path, "x1")?, t.floats(path, "x2")?, t.floats(path, "value")?);
    let n = (v.len() as f64).sqrt().round() as usize;
    let bad = |msg: &str| Error::Schema { path: path.into(), msg: msg.into() };
    if n < 2 || n * n != v.len() {
        return Err(bad("row count is not a square of at least 4"));
    }
    let side = (x1[n - 1] - x1[0]) * n as f64 / (n - 1) as f64;
    let grid = CartesianGrid::new(side, n).map_err(|e| bad(&e.to_string()))?;
    let tol = 1e-9 * side;
    for (p, (a, b)) in grid.points().iter().zip(x1.iter().zip(&x2)) {
        if (p.x1 - a).abs() > tol || (p.x2 - b).abs() > tol {
            return Err(bad("points do not form a centred square grid in x1-fastest order"));
        }
    }
    SourceSpec::gridded(grid, v)
}

pub fn write_gridded_source(path: &Path, grid: &CartesianGrid<f64>, values: &[f64], meta: Map<String, Value>) -> Result<()> {
    let rows = grid
        .points()
        .iter()
        .zip(values)
        .map(|(p, v)| vec![fmt_f64(p.x1), fmt_f64(p.x2), fmt_f64(*v)])
        .collect::<Vec<_>>();
    write_csv(path, &header("source_grid", meta), &["x1", "x2", "value"], &rows)
}

/// Write a JSON document with a trailing newline.
pub fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::io(path, std::io::Error::other(e)))?;
    s.push('\n');
    fs::write(path, s).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sources::AnalyticSource;

    #[test]
    fn float_format_round_trips() {
        for x in [0.0, -0.0, 1.0, 0.1, 1e-300, 6.02e23, f64::MIN_POSITIVE, std::f64::consts::PI] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn trace_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let c = CircleGrid::new(0.8, 5, 3.0).unwrap();
        let u: Vec<_> = (0..5).map(|j| Complex64::new(0.1 * j as f64, -1.0 / (j as f64 + 3.0))).collect();
        let l: Vec<_> = u.iter().map(|z| z * 7.3).collect();
        let t = CauchyTrace::dirichlet(2.5, c, u, l).unwrap();
        let p = dir.path().join("t.csv");
        write_trace(&p, &t, Map::new()).unwrap();
        let (back, meta) = read_trace(&p).unwrap();
        assert_eq!(back, t);
        assert_eq!(meta["kind"], "trace");
        let bytes = fs::read(&p).unwrap();
        write_trace(&p, &back, Map::new()).unwrap();
        assert_eq!(fs::read(&p).unwrap(), bytes);
    }

    #[test]
    fn coefficients_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let mut t = CoefficientTable::empty(1.0, 1, 1e-3);
        for (i, (l1, l2)) in [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)].into_iter().enumerate() {
            t.set(l1, l2, Complex64::new(i as f64, -0.5)).unwrap();
        }
        t.set_zero_mode(Complex64::new(0.25, 1e-9));
        let p = dir.path().join("c.csv");
        write_coefficients(&p, &t, Map::new()).unwrap();
        assert_eq!(read_coefficients(&p).unwrap(), t);
    }

    #[test]
    fn gridded_source_round_trip_and_errors() {
        let dir = tempfile::tempdir().unwrap();
        let g = CartesianGrid::new(1.0, 9).unwrap();
        let v = SourceSpec::<f64>::from(AnalyticSource::S2).sample(&g).unwrap();
        let p = dir.path().join("s.csv");
        write_gridded_source(&p, &g, &v, Map::new()).unwrap();
        let s = read_gridded_source(&p).unwrap();
        assert_eq!(s.sample(&g).unwrap(), v);

        assert!(matches!(read_trace(&p), Err(Error::Schema { .. })));
        let text = fs::read_to_string(&p).unwrap();
        fs::write(&p, text.replace("\"schema_version\":1", "\"schema_version\":9")).unwrap();
        assert!(matches!(read_gridded_source(&p), Err(Error::Schema { .. })));
        fs::write(&p, "no header\n").unwrap();
        assert!(matches!(read_gridded_source(&p), Err(Error::Parse { line: 1, .. })));
    }
}
