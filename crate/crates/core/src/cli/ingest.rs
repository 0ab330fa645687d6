//! CSV ingestion for GL(2) eigenvalue lists (`p,lambda`) and real
//! sequences (`m,value`).

use std::collections::BTreeSet;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use crate::arith::is_prime;
use crate::hecke::GL2FormData;
use crate::sign_stats::RealSequence;
use crate::{Error, Result};

/// Parsed GL(2) data together with the warnings raised while reading it.
#[derive(Debug, Clone, PartialEq)]
pub struct Gl2Ingest {
    pub form: GL2FormData,
    pub warnings: Vec<String>,
}

pub fn read_gl2csv(path: &Path) -> Result<Gl2Ingest> {
    parse_gl2csv(File::open(path)?, &path.display().to_string())
}

pub fn read_seqcsv(path: &Path) -> Result<RealSequence> {
    parse_seqcsv(File::open(path)?, &path.display().to_string())
}

fn parse_error(path: &str, line: u64, reason: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_string(),
        line,
        reason: reason.into(),
    }
}

/// Reads rows of `(line, first, second)` after checking the header.
fn rows<R: Read>(input: R, path: &str, header: [&str; 2]) -> Result<Vec<(u64, String, String)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(input);
    let mut out = Vec::new();
    let mut seen_header = false;
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_error(path, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if !seen_header {
            if record.len() != 2 || record[0] != *header[0] || record[1] != *header[1] {
                return Err(parse_error(path, line, format!("expected header `{},{}`", header[0], header[1])));
            }
            seen_header = true;
            continue;
        }
        if record.len() != 2 {
            return Err(parse_error(path, line, format!("expected 2 fields, found {}", record.len())));
        }
        out.push((line, record[0].to_string(), record[1].to_string()));
    }
    if !seen_header {
        return Err(parse_error(path, 1, format!("missing header `{},{}`", header[0], header[1])));
    }
    Ok(out)
}

fn parse_u64(path: &str, line: u64, field: &str, text: &str) -> Result<u64> {
    text.parse()
        .map_err(|_| parse_error(path, line, format!("`{field}` is not a non-negative integer: {text:?}")))
}

fn parse_real(path: &str, line: u64, field: &str, text: &str) -> Result<f64> {
    match text.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(parse_error(path, line, format!("`{field}` is not a finite real: {text:?}"))),
    }
}

/// Parses `p,lambda` rows. Values with `|lambda| > 2` are kept, clear the
/// Ramanujan flag and produce a warning.
pub fn parse_gl2csv<R: Read>(input: R, path: &str) -> Result<Gl2Ingest> {
    let mut pairs = Vec::new();
    let mut seen = BTreeSet::new();
    let mut warnings = Vec::new();
    for (line, p_text, lambda_text) in rows(input, path, ["p", "lambda"])? {
        let p = parse_u64(path, line, "p", &p_text)?;
        if !is_prime(p) {
            return Err(parse_error(path, line, format!("p = {p} is not prime")));
        }
        if !seen.insert(p) {
            return Err(Error::DuplicatePrime {
                path: path.to_string(),
                line,
                p,
            });
        }
        let lambda = parse_real(path, line, "lambda", &lambda_text)?;
        if lambda.abs() > 2.0 {
            warnings.push(format!("{path}: line {line}: |lambda({p})| = {} exceeds the Ramanujan bound 2", lambda.abs()));
        }
        pairs.push((p, lambda));
    }
    pairs.sort_by_key(|&(p, _)| p);
    Ok(Gl2Ingest {
        form: GL2FormData::new(pairs),
        warnings,
    })
}

/// Parses `m,value` rows with `m = 1, 2, 3, ...` in order.
pub fn parse_seqcsv<R: Read>(input: R, path: &str) -> Result<RealSequence> {
    let mut values = Vec::new();
    for (line, m_text, value_text) in rows(input, path, ["m", "value"])? {
        let m = parse_u64(path, line, "m", &m_text)?;
        let expected = values.len() as u64 + 1;
        if m != expected {
            return Err(parse_error(path, line, format!("expected m = {expected}, found {m}")));
        }
        values.push(parse_real(path, line, "value", &value_text)?);
    }
    Ok(RealSequence::new(values, path))
}
