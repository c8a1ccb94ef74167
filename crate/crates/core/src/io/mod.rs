//! Plain-text and binary file formats. Everything here is `f64`.
//!
//! Text formats are whitespace separated, `#` starts a comment line and
//! blank lines are ignored, except in the CSV formats where the only
//! comment allowed is the `# period=<T>` metadata line. Floats are written
//! with 17 significant digits so that a write/read round trip is exact.

mod mesh;
mod network;
mod nmap;
mod tables;

pub use mesh::{
    parse_centerline_solution, parse_initial_condition, parse_mesh, write_centerline_solution, write_initial_condition,
    write_mesh, CenterlineSolution,
};
pub use network::{parse_boundary_conditions, parse_network, write_boundary_conditions, NetworkFile, Outlet};
pub use nmap::{decode_node_map, encode_node_map};
pub use tables::{parse_inflow, parse_trace, trace_set, write_inflow, write_trace, TraceFile};

use std::fmt::Write;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Reads a whole file as UTF-8.
pub fn read_text(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

/// Appends `v` with 17 significant digits.
pub(crate) fn push_float(out: &mut String, v: f64) {
    write!(out, "{v:.16e}").expect("write to String");
}

/// Numbered, tokenized non-comment lines of a whitespace separated file.
pub(crate) fn token_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split_whitespace().collect()))
        }
    })
}

pub(crate) fn field<V: FromStr>(source: &str, line: usize, token: &str, what: &str) -> Result<V> {
    token.parse().map_err(|_| Error::parse(source, line, format!("invalid {what} '{token}'")))
}

pub(crate) fn float(source: &str, line: usize, token: &str, what: &str) -> Result<f64> {
    let v: f64 = field(source, line, token, what)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::parse(source, line, format!("{what} '{token}' is not finite")))
    }
}

pub(crate) fn expect_columns(source: &str, line: usize, tokens: &[&str], n: usize, what: &str) -> Result<()> {
    if tokens.len() == n {
        Ok(())
    } else {
        Err(Error::parse(source, line, format!("{what} needs {n} columns, found {}", tokens.len())))
    }
}
