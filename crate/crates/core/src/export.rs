//! Deterministic text serializers: CSV for traces, maps and scalograms,
//! `key=value` blocks for reports. Numbers are rendered with 17 significant
//! digits so values survive a write/read roundtrip.

use std::fmt::Write as _;

use thiserror::Error;

use crate::diagnostics::{BeatReport, DecayFit};
use crate::fourier::FrequencyMap;
use crate::spectra::{ComplexTrace, SpectraError, TimeTrace};
use crate::wavelet::Scalogram;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("bad csv: {0}")]
    BadCsv(String),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Trace CSV: `t_fs,value` header, one row per sample, LF endings.
pub fn trace_to_csv(trace: &TimeTrace) -> String {
    let mut out = String::from("t_fs,value\n");
    for (t, y) in trace.t_fs().iter().zip(trace.values()) {
        let _ = writeln!(out, "{},{}", num(*t), num(*y));
    }
    out
}

/// Complex trace CSV: `t_fs,re,im`.
pub fn complex_trace_to_csv(trace: &ComplexTrace) -> String {
    let mut out = String::from("t_fs,re,im\n");
    for (t, y) in trace.t_fs.iter().zip(&trace.y) {
        let _ = writeln!(out, "{},{},{}", num(*t), num(y.re), num(y.im));
    }
    out
}

/// Read a trace CSV. A `t_fs,re,im` file is collapsed to its envelope
/// (magnitude per sample).
pub fn trace_from_csv(text: &str) -> Result<TimeTrace, ExportError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| ExportError::BadCsv("empty file".into()))?;
    let complex = match header {
        "t_fs,value" => false,
        "t_fs,re,im" => true,
        other => return Err(ExportError::BadCsv(format!("unknown header: {other}"))),
    };
    let mut t = Vec::new();
    let mut y = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let expect = if complex { 3 } else { 2 };
        if fields.len() != expect {
            return Err(ExportError::BadCsv(format!("bad row: {line}")));
        }
        let parse = |s: &str| -> Result<f64, ExportError> {
            s.parse()
                .map_err(|_| ExportError::BadCsv(format!("bad number: {s}")))
        };
        t.push(parse(fields[0])?);
        if complex {
            let re = parse(fields[1])?;
            let im = parse(fields[2])?;
            y.push((re * re + im * im).sqrt());
        } else {
            y.push(parse(fields[1])?);
        }
    }
    Ok(TimeTrace::new(t, y)?)
}

/// Frequency-map CSV: header row carries the detection axis, the first
/// column the excitation axis, amplitudes row-major.
pub fn frequency_map_to_csv(map: &FrequencyMap) -> String {
    let mut out = String::from("excitation_nm");
    for d in &map.det_axis {
        let _ = write!(out, ",{}", num(*d));
    }
    out.push('\n');
    for (ei, e) in map.exc_axis.iter().enumerate() {
        let _ = write!(out, "{}", num(*e));
        for di in 0..map.det_axis.len() {
            let _ = write!(out, ",{}", num(map.amp[[ei, di]]));
        }
        out.push('\n');
    }
    out
}

/// Read a frequency-map CSV written by [`frequency_map_to_csv`]. The probed
/// wavenumber and band tag are not part of the CSV; they default to zero.
pub fn frequency_map_from_csv(text: &str) -> Result<FrequencyMap, ExportError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| ExportError::BadCsv("empty file".into()))?;
    let mut cols = header.split(',');
    if cols.next() != Some("excitation_nm") {
        return Err(ExportError::BadCsv("bad header".into()));
    }
    let det_axis: Vec<f64> = cols
        .map(|s| {
            s.parse()
                .map_err(|_| ExportError::BadCsv(format!("bad number: {s}")))
        })
        .collect::<Result<_, _>>()?;
    if det_axis.is_empty() {
        return Err(ExportError::BadCsv("no detection columns".into()));
    }
    let mut exc_axis = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<f64> = line
            .split(',')
            .map(|s| {
                s.parse()
                    .map_err(|_| ExportError::BadCsv(format!("bad number: {s}")))
            })
            .collect::<Result<_, _>>()?;
        if fields.len() != det_axis.len() + 1 {
            return Err(ExportError::BadCsv(format!("bad row: {line}")));
        }
        exc_axis.push(fields[0]);
        rows.push(fields[1..].to_vec());
    }
    if rows.is_empty() {
        return Err(ExportError::BadCsv("no data rows".into()));
    }
    let mut amp = ndarray::Array2::zeros((exc_axis.len(), det_axis.len()));
    for (ei, row) in rows.iter().enumerate() {
        for (di, v) in row.iter().enumerate() {
            amp[[ei, di]] = *v;
        }
    }
    Ok(FrequencyMap {
        nu0_cm: 0.0,
        band_cm: 0.0,
        amp,
        exc_axis,
        det_axis,
    })
}

/// Scalogram CSV: rows are scales annotated with their pseudofrequency,
/// columns the translation times; cells hold |coefficient|.
pub fn scalogram_to_csv(sc: &Scalogram) -> String {
    let mut out = String::from("nu_cm");
    for u in &sc.u_fs {
        let _ = write!(out, ",{}", num(*u));
    }
    out.push('\n');
    for (si, nu) in sc.scale_set.nu_cm.iter().enumerate() {
        let _ = write!(out, "{}", num(*nu));
        for v in sc.magnitude_row(si) {
            let _ = write!(out, ",{}", num(v));
        }
        out.push('\n');
    }
    out
}

/// Key=value block for a beat report, with one `candidates_cm` line and one
/// `match_N` line per matched peak.
pub fn beat_report_to_text(report: &BeatReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "nu0_cm={}", num(report.nu0_cm));
    match report.period_fs {
        Some(p) => {
            let _ = writeln!(out, "period_fs={}", num(p));
        }
        None => {
            let _ = writeln!(out, "period_fs=none");
        }
    }
    match &report.candidates {
        Some(pair) => {
            let _ = writeln!(out, "delta_nu_cm={}", num(pair.spacing_cm));
            let _ = writeln!(out, "candidates_cm={},{}", num(pair.lower_cm), num(pair.upper_cm));
            let _ = writeln!(out, "candidate_low_physical={}", pair.lower_is_physical());
        }
        None => {
            let _ = writeln!(out, "delta_nu_cm=none");
            let _ = writeln!(out, "candidates_cm=none");
        }
    }
    let _ = writeln!(out, "n_matches={}", report.matches.len());
    for (i, m) in report.matches.iter().enumerate() {
        let _ = writeln!(
            out,
            "match_{}={},{},{}",
            i + 1,
            num(m.candidate_cm),
            num(m.detected_cm),
            num(m.difference_cm)
        );
    }
    out
}

/// One-line CSV form of a beat report for batch runs.
pub fn beat_report_csv_header() -> &'static str {
    "nu0_cm,period_fs,delta_nu_cm,candidate_low_cm,candidate_high_cm,n_matches\n"
}

pub fn beat_report_to_csv_row(report: &BeatReport) -> String {
    let opt = |v: Option<f64>| v.map(num).unwrap_or_else(|| "none".into());
    format!(
        "{},{},{},{},{},{}\n",
        num(report.nu0_cm),
        opt(report.period_fs),
        opt(report.candidates.as_ref().map(|p| p.spacing_cm)),
        opt(report.candidates.as_ref().map(|p| p.lower_cm)),
        opt(report.candidates.as_ref().map(|p| p.upper_cm)),
        report.matches.len()
    )
}

/// Key=value block for a decay fit.
pub fn decay_fit_to_text(fit: &DecayFit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "amplitude={}", num(fit.amplitude));
    let _ = writeln!(out, "tau_fs={}", num(fit.tau_fs));
    let _ = writeln!(out, "offset={}", num(fit.offset));
    let _ = writeln!(out, "rms_residual={}", num(fit.rms_residual));
    let _ = writeln!(out, "tau_1e_fs={}", num(fit.tau_1e_fs));
    out
}

pub fn decay_fit_csv_header() -> &'static str {
    "amplitude,tau_fs,offset,rms_residual,tau_1e_fs\n"
}

pub fn decay_fit_to_csv_row(fit: &DecayFit) -> String {
    format!(
        "{},{},{},{},{}\n",
        num(fit.amplitude),
        num(fit.tau_fs),
        num(fit.offset),
        num(fit.rms_residual),
        num(fit.tau_1e_fs)
    )
}
