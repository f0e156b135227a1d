//! File formats: the allocation text format and numeric CSV tables.
//!
//! Allocation files hold a required `n=<int> r=<decimal>` header followed
//! by one block per line. A block line is a list of whitespace-separated
//! `element:weight` tokens with one-based elements; a bare `element` token
//! stands for weight 1 and may repeat. Blank lines and lines starting with
//! `#` are ignored.
//!
//! ```text
//! # attendance with degrees of participation
//! n=7 r=2.0
//! 1:1.0 3:2.0 6:0.5
//! 2:2.1
//! 4:0.5 5:0.3
//! 5:0.2
//! ```

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::io::Read;
use std::path::Path;

use crate::allocation::{Block, ElementId, FeatureAllocation};
use crate::categorize::NumericDataset;
use crate::error::{GeaError, Result};
use crate::fixed::Fixed;

fn parse_err(path: Option<&str>, line: usize, message: impl Into<String>) -> GeaError {
    GeaError::Parse {
        path: path.map(str::to_string),
        line,
        message: message.into(),
    }
}

fn parse_header(line: &str) -> std::result::Result<(usize, Fixed), String> {
    let (mut n, mut r) = (None, None);
    for tok in line.split_whitespace() {
        match tok.split_once('=') {
            Some(("n", v)) => n = Some(v.parse::<usize>().map_err(|_| format!("bad element count {v:?}"))?),
            Some(("r", v)) => r = Some(v.parse::<Fixed>().map_err(|_| format!("bad recurrence base {v:?}"))?),
            _ => return Err(format!("unexpected header token {tok:?}; expected `n=<int> r=<decimal>`")),
        }
    }
    match (n, r) {
        (Some(n), Some(r)) => Ok((n, r)),
        _ => Err("header must set both n and r".into()),
    }
}

fn parse_block(line: &str, n: usize) -> std::result::Result<Block, String> {
    let mut pairs = Vec::new();
    for tok in line.split_whitespace() {
        let (e, w) = match tok.split_once(':') {
            Some((e, w)) => (e, w.parse::<Fixed>().map_err(|_| format!("bad weight in token {tok:?}"))?),
            None => (tok, Fixed::ONE),
        };
        let pos: usize = e.parse().map_err(|_| format!("bad element in token {tok:?}"))?;
        let id = match ElementId::from_one_based(pos) {
            Some(id) if pos <= n => id,
            _ => return Err(format!("element {pos} is outside 1..={n}")),
        };
        if !w.is_positive() {
            return Err(format!("weight of element {pos} must be positive, got {w}"));
        }
        pairs.push((id, w));
    }
    Block::new(pairs).map_err(|e| e.to_string())
}

/// Parses allocation text. `path` only labels error messages.
pub fn parse_allocation_str(text: &str, path: Option<&str>) -> Result<FeatureAllocation> {
    let mut header = None;
    let mut blocks = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match header {
            None => header = Some(parse_header(line).map_err(|m| parse_err(path, lineno, m))?),
            Some((n, _)) => blocks.push(parse_block(line, n).map_err(|m| parse_err(path, lineno, m))?),
        }
    }
    let (n, r) = header.ok_or_else(|| parse_err(path, 0, "missing `n=<int> r=<decimal>` header"))?;
    FeatureAllocation::new(n, blocks, r).map_err(|e| parse_err(path, 0, e.to_string()))
}

pub fn read_allocation(path: impl AsRef<Path>) -> Result<FeatureAllocation> {
    let path = path.as_ref();
    let shown = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| parse_err(Some(&shown), 0, e.to_string()))?;
    parse_allocation_str(&text, Some(&shown))
}

/// Renders an allocation in the text format; exact, so it re-parses to an equal value.
pub fn write_allocation(g: &FeatureAllocation) -> String {
    let mut out = format!("n={} r={}\n", g.n(), g.r());
    for b in g.blocks() {
        let mut first = true;
        for &(e, w) in b.entries() {
            if !first {
                out.push(' ');
            }
            first = false;
            let _ = write!(out, "{e}:{w}");
        }
        out.push('\n');
    }
    out
}

/// Reads a numeric table with a header row. Every column except
/// `label_col` must hold decimals.
pub fn read_csv_from<R: Read>(reader: R, label_col: Option<&str>, path: Option<&str>) -> Result<NumericDataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| parse_err(path, 1, e.to_string()))?
        .clone();
    if headers.is_empty() || headers.iter().all(str::is_empty) {
        return Err(parse_err(path, 1, "empty file"));
    }
    let mut seen = HashSet::new();
    for h in headers.iter() {
        if !seen.insert(h) {
            return Err(parse_err(path, 1, format!("duplicate column name {h:?}")));
        }
    }
    let label_idx = match label_col {
        Some(name) => Some(
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| parse_err(path, 1, format!("label column {name:?} not found")))?,
        ),
        None => None,
    };
    let dims: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|&(i, _)| Some(i) != label_idx)
        .map(|(_, h)| h.to_string())
        .collect();

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(path, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let mut row = Vec::with_capacity(dims.len());
        for (i, cell) in rec.iter().enumerate() {
            if Some(i) == label_idx {
                labels.push(cell.to_string());
                continue;
            }
            let v: f64 = cell
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| parse_err(path, line, format!("column {:?}: cannot parse {cell:?} as a number", &headers[i])))?;
            row.push(v);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_err(path, 1, "no data rows"));
    }
    NumericDataset::new(dims, rows, label_idx.map(|_| labels))
}

pub fn read_csv(path: impl AsRef<Path>, label_col: Option<&str>) -> Result<NumericDataset> {
    let path = path.as_ref();
    let shown = path.display().to_string();
    let file = fs::File::open(path).map_err(|e| parse_err(Some(&shown), 0, e.to_string()))?;
    read_csv_from(file, label_col, Some(&shown))
}
