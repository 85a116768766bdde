//! Text formats.
//!
//! Point files hold one `x y` integer pair per line; `#` starts a comment
//! and blank lines are ignored. Point indices follow line order from 0.
//!
//! Decomposition files start with a header
//! `n=<n> c=<c> k=<k> cells=<m> algo=<tag>` followed by one cell per line,
//! given as 0-based point indices in counterclockwise order starting at the
//! smallest index. Cells are written in lexicographic order.

use std::fmt::Write as _;

use crate::decomposition::{Decomposition, Source};
use crate::error::{Error, Result};
use crate::geom::{Point, PointSet, Polygon};

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

/// Non-comment tokens of a line with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let content = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in content.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &content[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &content[s..]));
    }
    out
}

/// Parses a point file and validates general position.
pub fn parse_points(text: &str) -> Result<PointSet> {
    let mut pts = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let toks = tokens(line);
        if toks.is_empty() {
            continue;
        }
        if toks.len() != 2 {
            let col = toks.get(2).map_or(toks[0].0, |t| t.0);
            return Err(parse_error(ln + 1, col, format!("expected two integers, found {} fields", toks.len())));
        }
        let mut xy = [0i64; 2];
        for (slot, &(col, tok)) in xy.iter_mut().zip(&toks) {
            *slot = tok.parse().map_err(|_| parse_error(ln + 1, col, format!("invalid integer {tok:?}")))?;
        }
        pts.push(Point::new(xy[0], xy[1]));
    }
    PointSet::new(pts)
}

pub fn format_points(ps: &PointSet) -> String {
    let mut s = String::new();
    for p in ps.points() {
        let _ = writeln!(s, "{} {}", p.x, p.y);
    }
    s
}

/// Header fields of a decomposition file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Header {
    pub n: usize,
    pub c: usize,
    pub k: usize,
    pub cells: usize,
    pub algo: Source,
}

pub fn format_decomposition(d: &Decomposition, n: usize, c: usize, k: usize) -> String {
    let cells = d.canonical_cells();
    let mut s = format!("n={n} c={c} k={k} cells={} algo={}\n", cells.len(), d.source);
    for cell in &cells {
        let v: Vec<String> = cell.vertices().iter().map(|i| i.to_string()).collect();
        s.push_str(&v.join(" "));
        s.push('\n');
    }
    s
}

fn header_field(toks: &[(usize, &str)], key: &str) -> Result<(usize, String)> {
    let (col, tok) = toks
        .iter()
        .find(|(_, t)| t.starts_with(key) && t[key.len()..].starts_with('='))
        .ok_or_else(|| parse_error(1, 1, format!("header lacks {key}=")))?;
    Ok((*col, tok[key.len() + 1..].to_string()))
}

fn header_number(toks: &[(usize, &str)], key: &str) -> Result<usize> {
    let (col, v) = header_field(toks, key)?;
    v.parse().map_err(|_| parse_error(1, col, format!("invalid value for {key}: {v:?}")))
}

/// Parses a decomposition file. Cells are read as counterclockwise cycles;
/// only indices and counts are validated here, geometry is the verifier's
/// business.
pub fn parse_decomposition(text: &str) -> Result<(Header, Decomposition)> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !tokens(l).is_empty());
    let (hl, head) = lines.next().ok_or_else(|| parse_error(1, 1, "empty decomposition file"))?;
    let htoks = tokens(head);
    let wrap = |e: Error| match e {
        Error::Parse { column, message, .. } => parse_error(hl + 1, column, message),
        other => other,
    };
    let n = header_number(&htoks, "n").map_err(wrap)?;
    let c = header_number(&htoks, "c").map_err(wrap)?;
    let k = header_number(&htoks, "k").map_err(wrap)?;
    let count = header_number(&htoks, "cells").map_err(wrap)?;
    let (acol, tag) = header_field(&htoks, "algo").map_err(wrap)?;
    let algo = Source::from_tag(&tag).ok_or_else(|| parse_error(hl + 1, acol, format!("unknown algorithm {tag:?}")))?;
    let mut cells = Vec::new();
    let mut last_line = hl + 1;
    for (ln, line) in lines {
        last_line = ln + 1;
        let mut v = Vec::new();
        for (col, tok) in tokens(line) {
            let i: usize = tok.parse().map_err(|_| parse_error(ln + 1, col, format!("invalid index {tok:?}")))?;
            if i >= n {
                return Err(parse_error(ln + 1, col, format!("index {i} out of range for n = {n}")));
            }
            if v.contains(&i) {
                return Err(parse_error(ln + 1, col, format!("index {i} repeated in cell")));
            }
            v.push(i);
        }
        if v.len() < 3 {
            return Err(parse_error(ln + 1, 1, "a cell needs at least 3 vertices"));
        }
        cells.push(Polygon::from_ccw(v));
    }
    if cells.len() != count {
        return Err(parse_error(last_line, 1, format!("header announces {count} cells, found {}", cells.len())));
    }
    Ok((Header { n, c, k, cells: count, algo }, Decomposition::new(cells, algo)))
}
