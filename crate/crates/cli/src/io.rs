//! Readers and writers for spectrum, trace and table files. Numbers are
//! written in their shortest round-trip form, so write-read-write
//! reproduces a file byte for byte.

use std::fmt::Write as _;
use std::path::Path;

use chaoskit::resonance::ComplexTrace;
use num_complex::Complex64;

use crate::error::{CliError, CliResult};

fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))
}

/// Wavevectors (1/m), one per line; lines starting with `#` are headers.
pub fn read_spectrum(path: &Path) -> CliResult<Vec<f64>> {
    parse_spectrum(&path.display().to_string(), &read_text(path)?)
}

pub fn parse_spectrum(name: &str, text: &str) -> CliResult<Vec<f64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|_| CliError::Data(format!("{name}:{}: not a number: `{line}`", i + 1)))?;
        out.push(v);
    }
    Ok(out)
}

pub fn format_spectrum(header: &[String], values: &[f64]) -> String {
    let mut s = String::new();
    for h in header {
        let _ = writeln!(s, "# {h}");
    }
    for v in values {
        let _ = writeln!(s, "{v}");
    }
    s
}

/// CSV trace with header `frequency_hz,re_Sab,im_Sab`.
pub fn read_trace(path: &Path) -> CliResult<ComplexTrace> {
    parse_trace(&path.display().to_string(), &read_text(path)?)
}

pub fn parse_trace(name: &str, text: &str) -> CliResult<ComplexTrace> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let Some((hline, header)) = lines.next() else {
        return Err(CliError::Data(format!("{name}: empty trace file")));
    };
    let pair = parse_pair(header)
        .ok_or_else(|| CliError::Data(format!("{name}:{}: header must read `frequency_hz,re_Sab,im_Sab`", hline + 1)))?;
    let mut freqs = Vec::new();
    let mut values = Vec::new();
    for (i, line) in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: Option<Vec<f64>> = if fields.len() == 3 { fields.iter().map(|f| f.parse().ok()).collect() } else { None };
        let Some(p) = parsed else {
            return Err(CliError::Data(format!("{name}:{}: expected three numbers, got `{line}`", i + 1)));
        };
        freqs.push(p[0]);
        values.push(Complex64::new(p[1], p[2]));
    }
    if freqs.is_empty() {
        return Err(CliError::Data(format!("{name}: trace has no samples")));
    }
    ComplexTrace::new(freqs, values, pair).map_err(|e| CliError::Data(format!("{name}: {e}")))
}

fn parse_pair(header: &str) -> Option<(u8, u8)> {
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.len() != 3 || cols[0] != "frequency_hz" {
        return None;
    }
    let digits = cols[1].strip_prefix("re_S")?;
    if cols[2] != format!("im_S{digits}") || digits.len() != 2 {
        return None;
    }
    let mut d = digits.chars().map(|c| c.to_digit(10).filter(|&v| v > 0));
    Some((d.next()?? as u8, d.next()?? as u8))
}

#[cfg(test)]
pub fn format_trace(trace: &ComplexTrace) -> String {
    let (a, b) = trace.pair();
    let mut s = format!("frequency_hz,re_S{a}{b},im_S{a}{b}\n");
    for (f, v) in trace.frequencies().iter().zip(trace.values()) {
        let _ = writeln!(s, "{f},{},{}", v.re, v.im);
    }
    s
}

/// CSV table with the given header and one row per entry.
pub fn table<I>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = Vec<f64>>,
{
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

pub fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable output");
    s.push('\n');
    s
}
