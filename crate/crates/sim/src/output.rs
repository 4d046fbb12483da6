//! CSV plot data and the companion `.meta` file.
//!
//! Floats are written with Rust's shortest round-trip formatting, so parsing
//! a row recovers the exact value. An empty `ber` field means no data bits
//! were sent.

use std::fs;
use std::path::{Path, PathBuf};

use crate::config::ExperimentConfig;
use crate::error::{Result, SimError};
use crate::sweep::SweepRecord;

pub const CSV_HEADER: [&str; 7] = [
    "snr_d_db",
    "pilot_count",
    "iterations",
    "trials",
    "mse",
    "ber",
    "seed",
];

/// One parsed CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub snr_d_db: f64,
    pub pilot_count: usize,
    pub iterations: usize,
    pub trials: usize,
    pub mse: f64,
    pub ber: Option<f64>,
    pub seed: u64,
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> SimError + '_ {
    move |source| SimError::Csv {
        path: path.to_owned(),
        source,
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> SimError + '_ {
    move |source| SimError::Io {
        path: path.to_owned(),
        source,
    }
}

/// Renders the records as CSV text.
pub fn to_csv_string(records: &[SweepRecord], seed: u64) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let mem = Path::new("<memory>");
    w.write_record(CSV_HEADER).map_err(csv_err(mem))?;
    for r in records {
        w.write_record([
            r.snr_d_db.to_string(),
            r.pilot_count.to_string(),
            r.iterations.to_string(),
            r.trials.to_string(),
            r.mse.to_string(),
            r.ber.map(|b| b.to_string()).unwrap_or_default(),
            seed.to_string(),
        ])
        .map_err(csv_err(mem))?;
    }
    let bytes = w.into_inner().map_err(|e| SimError::Io {
        path: mem.to_owned(),
        source: e.into_error(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv output is ASCII"))
}

pub fn emit_csv(records: &[SweepRecord], seed: u64, path: &Path) -> Result<()> {
    fs::write(path, to_csv_string(records, seed)?).map_err(io_err(path))
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mem = Path::new("<memory>");
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header = rdr.headers().map_err(csv_err(mem))?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(SimError::Config(format!(
            "unexpected CSV header {header:?}"
        )));
    }
    let bad = |field: &str, value: &str| SimError::Config(format!("bad {field} value {value:?}"));
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err(mem))?;
        let f = |i: usize| rec.get(i).unwrap_or("");
        let float = |i: usize| f(i).parse::<f64>().map_err(|_| bad(CSV_HEADER[i], f(i)));
        let int = |i: usize| f(i).parse::<usize>().map_err(|_| bad(CSV_HEADER[i], f(i)));
        rows.push(CsvRow {
            snr_d_db: float(0)?,
            pilot_count: int(1)?,
            iterations: int(2)?,
            trials: int(3)?,
            mse: float(4)?,
            ber: if f(5).is_empty() {
                None
            } else {
                Some(float(5)?)
            },
            seed: f(6).parse().map_err(|_| bad("seed", f(6)))?,
        });
    }
    Ok(rows)
}

pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>> {
    parse_csv(&fs::read_to_string(path).map_err(io_err(path))?)
}

/// `<out>.meta` next to the CSV.
pub fn meta_path(csv_path: &Path) -> PathBuf {
    let mut name = csv_path.as_os_str().to_owned();
    name.push(".meta");
    PathBuf::from(name)
}

pub fn meta_text(config: &ExperimentConfig) -> Result<String> {
    let cfg = config.afdm_config()?;
    Ok(format!(
        "config_sha256 = {}\nseed = {}\nc1 = {}\nc2 = {}\nversion = {}\n",
        config.hash(),
        config.seed,
        cfg.c1(),
        cfg.c2(),
        env!("CARGO_PKG_VERSION"),
    ))
}

pub fn write_meta(config: &ExperimentConfig, csv_path: &Path) -> Result<PathBuf> {
    let path = meta_path(csv_path);
    fs::write(&path, meta_text(config)?).map_err(io_err(&path))?;
    Ok(path)
}
