//! Plain CSV export: a `#`-prefixed `key=value` header block, a column line, then
//! rows with 12 significant digits.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::PhysicalParams;
use crate::observables::ObservableSeries;

/// `key=value` pairs describing a parameter set, in a fixed order.
pub fn params_header(params: &PhysicalParams) -> Vec<(String, String)> {
    let mut out = vec![
        ("lambda_coupling".to_string(), format!("{:e}", params.lambda_coupling)),
        ("omega_c".to_string(), format!("{:e}", params.omega_c)),
        ("omega_eg".to_string(), format!("{:e}", params.omega_eg)),
        ("q_wavenumber".to_string(), format!("{:e}", params.q_wavenumber)),
        ("recoil_freq".to_string(), format!("{:e}", params.recoil_freq)),
        ("g_accel".to_string(), format!("{:e}", params.g_accel)),
        ("theta".to_string(), format!("{:e}", params.theta)),
        ("p0".to_string(), format!("{:e}", params.p0)),
    ];
    out.push((
        "delta0_override".to_string(),
        params
            .delta0_override
            .map_or_else(|| "none".to_string(), |d| format!("{d:e}")),
    ));
    out.push((
        "phase_convention".to_string(),
        match params.phase_convention {
            crate::model::PhaseConvention::HalfChirp => "half_chirp",
            crate::model::PhaseConvention::FullChirp => "full_chirp",
        }
        .to_string(),
    ));
    out
}

fn write_header<W: Write>(w: &mut W, pairs: &[(String, String)]) -> io::Result<()> {
    for (k, v) in pairs {
        writeln!(w, "# {k}={v}")?;
    }
    Ok(())
}

/// Write a series; `extra` lines are appended to the header after the parameters.
pub fn write_series<W: Write>(w: &mut W, series: &ObservableSeries, extra: &[(String, String)]) -> io::Result<()> {
    let mut header = vec![("series".to_string(), series.name.to_string())];
    header.extend(params_header(&series.params));
    header.extend_from_slice(extra);
    write_header(w, &header)?;
    writeln!(w, "t,lambda_t,value")?;
    for ((t, lt), v) in series.t_grid.iter().zip(&series.scaled_time).zip(&series.values) {
        writeln!(w, "{t:.11e},{lt:.11e},{v:.11e}")?;
    }
    Ok(())
}

/// Write a photon-number distribution at time `t`.
pub fn write_distribution<W: Write>(
    w: &mut W,
    t: f64,
    probs: &[f64],
    params: &PhysicalParams,
    extra: &[(String, String)],
) -> io::Result<()> {
    let mut header = vec![
        ("series".to_string(), "photon_distribution".to_string()),
        ("t".to_string(), format!("{t:e}")),
        ("lambda_t".to_string(), format!("{:e}", params.lambda_coupling * t)),
    ];
    header.extend(params_header(params));
    header.extend_from_slice(extra);
    write_header(w, &header)?;
    writeln!(w, "n,probability")?;
    for (n, p) in probs.iter().enumerate() {
        writeln!(w, "{n},{p:.11e}")?;
    }
    Ok(())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn export_csv(series: &ObservableSeries, path: &Path) -> Result<()> {
    export_csv_with(series, &[], path)
}

pub fn export_csv_with(series: &ObservableSeries, extra: &[(String, String)], path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_series(&mut buf, series, extra).expect("writing to memory");
    write_file(path, &buf)
}

pub fn export_distribution(
    t: f64,
    probs: &[f64],
    params: &PhysicalParams,
    extra: &[(String, String)],
    path: &Path,
) -> Result<()> {
    let mut buf = Vec::new();
    write_distribution(&mut buf, t, probs, params, extra).expect("writing to memory");
    write_file(path, &buf)
}

/// A parsed CSV file: header pairs, column names and numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedCsv {
    pub header: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl ParsedCsv {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.header.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}

pub fn parse_csv(text: &str) -> Result<ParsedCsv> {
    let mut header = Vec::new();
    let mut columns = Vec::new();
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if let Some(rest) = line.strip_prefix('#') {
            let (k, v) = rest.trim().split_once('=').ok_or_else(|| Error::Config {
                line: lineno,
                key: None,
                msg: "header line without '='".into(),
            })?;
            header.push((k.trim().to_string(), v.trim().to_string()));
        } else if line.trim().is_empty() {
            continue;
        } else if columns.is_empty() {
            columns = line.split(',').map(|s| s.trim().to_string()).collect();
        } else {
            let row = line
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Config {
                    line: lineno,
                    key: None,
                    msg: format!("bad number: {e}"),
                })?;
            if row.len() != columns.len() {
                return Err(Error::Config {
                    line: lineno,
                    key: None,
                    msg: format!("expected {} fields, found {}", columns.len(), row.len()),
                });
            }
            rows.push(row);
        }
    }
    Ok(ParsedCsv { header, columns, rows })
}
