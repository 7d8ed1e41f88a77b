//! Convergence reports and their CSV form.
//!
//! The CSV holds one row per N under a mandatory header; failed rows carry
//! `nan`. Report metadata lives in a sidecar `<file>.meta.toml`, so the CSV
//! itself is identical across runs apart from `runtime_ms`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CONVERGENCE_HEADER: [&str; 7] = ["N", "NI", "alpha", "err_inf", "err_l2chi", "newton_iters", "runtime_ms"];
/// Extra column of 2D reports: largest error at the collocation points.
pub const COLLOCATION_COLUMN: &str = "err_colloc";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub ni: usize,
    pub alpha: f64,
    pub err_inf: f64,
    pub err_l2chi: f64,
    /// `None` for a failed solve.
    pub newton_iters: Option<usize>,
    pub runtime_ms: f64,
    /// Present in 2D reports.
    pub err_colloc: Option<f64>,
}

impl ConvergenceRow {
    pub fn failed(&self) -> bool {
        self.newton_iters.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub problem: String,
    pub method: String,
    pub rule: String,
    pub alpha: f64,
    pub build: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl Metadata {
    pub fn now(problem: &str, method: &str, rule: &str, alpha: f64) -> Self {
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        Metadata {
            problem: problem.to_string(),
            method: method.to_string(),
            rule: rule.to_string(),
            alpha,
            build: format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
            timestamp,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub meta: Metadata,
    pub rows: Vec<ConvergenceRow>,
}

/// Shortest round-trip decimal, with `nan` for NaN.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v == 0.0 || (1e-4..1e6).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn parse_f64(s: &str) -> Result<f64> {
    match s.trim() {
        "nan" | "NaN" => Ok(f64::NAN),
        t => t
            .parse()
            .map_err(|_| Error::Config(format!("not a number: {t:?}"))),
    }
}

fn parse_usize(s: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::Config(format!("not a count: {s:?}")))
}

impl ConvergenceReport {
    pub fn new(meta: Metadata) -> Self {
        ConvergenceReport { meta, rows: Vec::new() }
    }

    pub fn push(&mut self, row: ConvergenceRow) {
        self.rows.push(row);
        self.rows.sort_by_key(|r| r.n);
    }

    pub fn any_failed(&self) -> bool {
        self.rows.iter().any(|r| r.failed())
    }

    fn has_colloc(&self) -> bool {
        self.rows.iter().any(|r| r.err_colloc.is_some())
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let colloc = self.has_colloc();
        let mut header: Vec<&str> = CONVERGENCE_HEADER.to_vec();
        if colloc {
            header.push(COLLOCATION_COLUMN);
        }
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![
                r.n.to_string(),
                r.ni.to_string(),
                fmt_f64(r.alpha),
                fmt_f64(r.err_inf),
                fmt_f64(r.err_l2chi),
                r.newton_iters.map_or("nan".into(), |k| k.to_string()),
                fmt_f64(r.runtime_ms),
            ];
            if colloc {
                rec.push(fmt_f64(r.err_colloc.unwrap_or(f64::NAN)));
            }
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Config(e.to_string()))
    }

    /// Rows of a CSV produced by [`ConvergenceReport::write_csv`].
    pub fn parse_rows(text: &str) -> Result<Vec<ConvergenceRow>> {
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        let header: Vec<String> = rd.headers()?.iter().map(str::to_string).collect();
        let colloc = match header.len() {
            7 => false,
            8 if header[7] == COLLOCATION_COLUMN => true,
            _ => return Err(Error::Config(format!("unexpected header {header:?}"))),
        };
        if header[..7] != CONVERGENCE_HEADER {
            return Err(Error::Config(format!("unexpected header {header:?}")));
        }
        let mut rows = Vec::new();
        for rec in rd.records() {
            let rec = rec?;
            let iters = match rec[5].trim() {
                "nan" => None,
                s => Some(parse_usize(s)?),
            };
            rows.push(ConvergenceRow {
                n: parse_usize(&rec[0])?,
                ni: parse_usize(&rec[1])?,
                alpha: parse_f64(&rec[2])?,
                err_inf: parse_f64(&rec[3])?,
                err_l2chi: parse_f64(&rec[4])?,
                newton_iters: iters,
                runtime_ms: parse_f64(&rec[6])?,
                err_colloc: if colloc { Some(parse_f64(&rec[7])?) } else { None },
            });
        }
        Ok(rows)
    }

    pub fn meta_path(csv: &Path) -> PathBuf {
        let mut s = csv.as_os_str().to_owned();
        s.push(".meta.toml");
        PathBuf::from(s)
    }

    /// Writes the CSV and its metadata sidecar.
    pub fn save(&self, path: &Path) -> Result<()> {
        self.write_csv(fs::File::create(path)?)?;
        let meta = toml::to_string(&self.meta).map_err(|e| Error::Config(e.to_string()))?;
        fs::write(Self::meta_path(path), meta)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let rows = Self::parse_rows(&fs::read_to_string(path)?)?;
        let meta = toml::from_str(&fs::read_to_string(Self::meta_path(path))?)
            .map_err(|e| Error::Config(e.to_string()))?;
        Ok(ConvergenceReport { meta, rows })
    }
}

/// Generic CSV table with a header row.
pub fn write_table<W: std::io::Write>(out: W, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}
