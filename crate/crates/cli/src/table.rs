//! The `z,n,re,im,intensity` CSV schema.

use std::collections::BTreeMap;
use std::path::Path;

use diatomic_core::FieldState;

use crate::error::{CliError, Result};

pub const HEADER: [&str; 5] = ["z", "n", "re", "im", "intensity"];

/// One parsed CSV row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub z: f64,
    pub n: i64,
    pub re: f64,
    pub im: f64,
    pub intensity: f64,
}

/// Shortest decimal that round-trips, never more than 17 significant digits.
pub fn fmt_real(x: f64) -> String {
    format!("{x:?}")
}

/// Renders fields as CSV, one row per grid point and guide, in grid order.
pub fn render(fields: &[FieldState]) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(HEADER).expect("in-memory write");
    for f in fields {
        let z = fmt_real(f.z);
        for (n, u) in f.sites().zip(&f.amplitudes) {
            let row = [z.clone(), n.to_string(), fmt_real(u.re), fmt_real(u.im), fmt_real(u.norm_sqr())];
            w.write_record(&row).expect("in-memory write");
        }
    }
    w.into_inner().expect("in-memory flush")
}

fn parse_err(path: &Path, line: u64, message: impl Into<String>) -> CliError {
    CliError::Parse { path: path.to_path_buf(), line, message: message.into() }
}

/// Parses CSV text produced by [`render`]; errors name the offending line.
pub fn parse(path: &Path, text: &[u8]) -> Result<Vec<Row>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(text);
    let mut records = reader.records();
    match records.next() {
        None => return Err(parse_err(path, 1, "missing header z,n,re,im,intensity")),
        Some(Err(e)) => return Err(parse_err(path, 1, e.to_string())),
        Some(Ok(h)) if h.iter().ne(HEADER) => {
            let found = h.iter().collect::<Vec<_>>().join(",");
            return Err(parse_err(path, 1, format!("expected header z,n,re,im,intensity, found '{found}'")));
        }
        Some(Ok(_)) => {}
    }
    let mut rows = Vec::new();
    for rec in records {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(path, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != HEADER.len() {
            return Err(parse_err(path, line, format!("expected 5 fields, found {}", rec.len())));
        }
        let real = |i: usize| -> Result<f64> {
            rec[i]
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(path, line, format!("invalid {} value '{}'", HEADER[i], &rec[i])))
        };
        let n = rec[1].parse::<i64>().map_err(|_| parse_err(path, line, format!("invalid n value '{}'", &rec[1])))?;
        let row = Row { z: real(0)?, n, re: real(2)?, im: real(3)?, intensity: real(4)? };
        if row.intensity < 0.0 {
            return Err(parse_err(path, line, "intensity must be >= 0"));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Intensity traces `(z, |u_n|^2)` keyed by guide, in file order.
pub fn traces(rows: &[Row]) -> BTreeMap<i64, Vec<(f64, f64)>> {
    let mut out: BTreeMap<i64, Vec<(f64, f64)>> = BTreeMap::new();
    for r in rows {
        out.entry(r.n).or_default().push((r.z, r.intensity));
    }
    out
}
