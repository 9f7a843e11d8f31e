//! Line-oriented netlist text format.
//!
//! ```text
//! BTN 1 <input_dim>
//! LAYER <node_count>
//! UNIT <theta> <w_0> ... <w_{m-1}>
//! ```
//!
//! Integers are decimal, fields are separated by a single space and every line
//! ends with `\n`. Parsing is strict so that `write ∘ parse` is the identity.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::net::LayeredNet;
use crate::unit::ThresholdUnit;

pub fn write_netlist(net: &LayeredNet) -> String {
    let mut out = String::new();
    write_netlist_into(net, &mut out);
    out
}

pub(crate) fn write_netlist_into(net: &LayeredNet, out: &mut String) {
    writeln!(out, "BTN 1 {}", net.input_dim()).unwrap();
    for layer in net.layers() {
        writeln!(out, "LAYER {}", layer.len()).unwrap();
        for unit in layer {
            write!(out, "UNIT {}", unit.theta).unwrap();
            for w in &unit.weights {
                write!(out, " {w}").unwrap();
            }
            out.push('\n');
        }
    }
}

fn parse_int<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    // canonical decimal only, so re-emission is byte-identical
    let digits = tok.strip_prefix('-').unwrap_or(tok);
    let canonical = !digits.is_empty()
        && digits.bytes().all(|b| b.is_ascii_digit())
        && (digits == "0" || !digits.starts_with('0'))
        && tok != "-0";
    if !canonical {
        return Err(Error::parse(
            line,
            format!("not a canonical integer: {tok:?}"),
        ));
    }
    tok.parse()
        .map_err(|_| Error::parse(line, format!("integer out of range: {tok:?}")))
}

fn fields(line: &str, lineno: usize) -> Result<Vec<&str>> {
    let toks: Vec<&str> = line.split(' ').collect();
    if toks.iter().any(|t| t.is_empty()) {
        return Err(Error::parse(
            lineno,
            "fields must be separated by single spaces",
        ));
    }
    Ok(toks)
}

/// Parses one netlist from `lines`, consuming exactly the lines that belong to it.
/// `first_line` is the 1-based line number of `lines[0]` for diagnostics.
pub(crate) fn parse_netlist_lines(lines: &[&str], first_line: usize) -> Result<LayeredNet> {
    let mut iter = lines.iter().enumerate().peekable();
    let (_, header) = iter
        .next()
        .ok_or_else(|| Error::parse(first_line, "missing BTN header"))?;
    let toks = fields(header, first_line)?;
    if toks.len() != 3 || toks[0] != "BTN" || toks[1] != "1" {
        return Err(Error::parse(first_line, "expected `BTN 1 <input_dim>`"));
    }
    let input_dim: usize = parse_int(toks[2], first_line)?;

    let mut layers = Vec::new();
    while let Some((i, line)) = iter.next() {
        let lineno = first_line + i;
        let toks = fields(line, lineno)?;
        if toks.len() != 2 || toks[0] != "LAYER" {
            return Err(Error::parse(lineno, "expected `LAYER <node_count>`"));
        }
        let count: usize = parse_int(toks[1], lineno)?;
        let mut layer = Vec::with_capacity(count);
        for _ in 0..count {
            let (i, line) = iter
                .next()
                .ok_or_else(|| Error::parse(lineno, "layer ends before all units were read"))?;
            let lineno = first_line + i;
            let toks = fields(line, lineno)?;
            if toks.len() < 2 || toks[0] != "UNIT" {
                return Err(Error::parse(lineno, "expected `UNIT <theta> <weights...>`"));
            }
            let theta = parse_int(toks[1], lineno)?;
            let weights = toks[2..]
                .iter()
                .map(|t| parse_int(t, lineno))
                .collect::<Result<Vec<i64>>>()?;
            layer.push(ThresholdUnit::new(weights, theta));
        }
        layers.push(layer);
    }
    LayeredNet::new(input_dim, layers).map_err(|e| Error::parse(first_line, e.to_string()))
}

/// Splits text into lines, requiring a final newline and no carriage returns.
pub(crate) fn split_lines(text: &str) -> Result<Vec<&str>> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let body = text
        .strip_suffix('\n')
        .ok_or_else(|| Error::parse(text.lines().count(), "missing final newline"))?;
    let lines: Vec<&str> = body.split('\n').collect();
    if let Some(i) = lines.iter().position(|l| l.contains('\r')) {
        return Err(Error::parse(i + 1, "carriage return not allowed"));
    }
    Ok(lines)
}

pub fn parse_netlist(text: &str) -> Result<LayeredNet> {
    let lines = split_lines(text)?;
    parse_netlist_lines(&lines, 1)
}
