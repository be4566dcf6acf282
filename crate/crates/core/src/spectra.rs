//! Data model for 2DES cubes and per-pixel time traces.
//!
//! A [`SpectralCube`] holds real rephasing 2D spectra stacked along the
//! population time axis, indexed `[T][excitation][detection]`. Cubes are
//! immutable after construction and all operations are pure, so they can be
//! shared across threads freely.
//!
//! The on-disk archive is a directory with a `manifest.txt` (UTF-8, LF,
//! `key=value` lines) and a `cube.f64le` payload of little-endian f64 values
//! in row-major order, population time slowest and detection fastest.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use ndarray::Array3;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectraError {
    #[error("missing file: {0}")]
    MissingFile(PathBuf),
    #[error("malformed manifest: {0}")]
    MalformedManifest(String),
    #[error("payload size mismatch: expected {expected} bytes, found {actual}")]
    SizeMismatch { expected: u64, actual: u64 },
    #[error("population time axis is not uniformly spaced with positive step")]
    NonUniformTimeAxis,
    #[error("axis has zero length")]
    EmptyAxis,
    #[error("non-finite value in cube or axis")]
    NonFiniteValue,
    #[error("axis lengths do not match value dimensions")]
    AxisMismatch,
    #[error("wavelength axis must be strictly ascending")]
    NonAscendingAxis,
    #[error("pixel ({exc_nm}, {det_nm}) nm outside the cube axes")]
    OutOfRange { exc_nm: f64, det_nm: f64 },
    #[error("selection contains no samples")]
    EmptySelection,
    #[error("underdetermined fit: order {order} needs more than {samples} samples")]
    Underdetermined { order: usize, samples: usize },
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

/// Relative tolerance for the uniform-step check on time axes.
const STEP_TOLERANCE: f64 = 1e-9;

/// A pixel position in (excitation, detection) wavelengths, nm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PixelCoord {
    pub exc_nm: f64,
    pub det_nm: f64,
}

impl PixelCoord {
    pub fn new(exc_nm: f64, det_nm: f64) -> Self {
        Self { exc_nm, det_nm }
    }
}

/// Where a trace came from: the snapped pixel and, for wavelet traces, the
/// probed wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOrigin {
    pub pixel: PixelCoord,
    pub nu_cm: Option<f64>,
}

/// A real-valued series over a uniform population-time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeTrace {
    t_fs: Vec<f64>,
    y: Vec<f64>,
    pub origin: Option<TraceOrigin>,
}

impl TimeTrace {
    pub fn new(t_fs: Vec<f64>, y: Vec<f64>) -> Result<Self, SpectraError> {
        if t_fs.is_empty() {
            return Err(SpectraError::EmptyAxis);
        }
        if t_fs.len() != y.len() {
            return Err(SpectraError::AxisMismatch);
        }
        validate_uniform_step(&t_fs)?;
        if y.iter().any(|v| !v.is_finite()) {
            return Err(SpectraError::NonFiniteValue);
        }
        Ok(Self {
            t_fs,
            y,
            origin: None,
        })
    }

    pub fn with_origin(mut self, origin: TraceOrigin) -> Self {
        self.origin = Some(origin);
        self
    }

    pub fn t_fs(&self) -> &[f64] {
        &self.t_fs
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.t_fs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t_fs.is_empty()
    }

    /// Sample spacing in fs. Zero for a single-sample trace.
    pub fn dt_fs(&self) -> f64 {
        if self.t_fs.len() < 2 {
            0.0
        } else {
            self.t_fs[1] - self.t_fs[0]
        }
    }
}

/// A complex-valued series on a uniform time grid, e.g. the output of the
/// Gaussian band-pass filter. The magnitude is the envelope and the real
/// part is the filtered oscillation.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexTrace {
    pub t_fs: Vec<f64>,
    pub y: Vec<Complex64>,
    pub origin: Option<TraceOrigin>,
}

impl ComplexTrace {
    pub fn envelope(&self) -> TimeTrace {
        TimeTrace {
            t_fs: self.t_fs.clone(),
            y: self.y.iter().map(|c| c.norm()).collect(),
            origin: self.origin,
        }
    }

    pub fn real_part(&self) -> TimeTrace {
        TimeTrace {
            t_fs: self.t_fs.clone(),
            y: self.y.iter().map(|c| c.re).collect(),
            origin: self.origin,
        }
    }
}

/// A 2DES data cube: real amplitudes over `[T][excitation][detection]` with
/// a uniform population-time axis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCube {
    values: Array3<f64>,
    t_axis: Vec<f64>,
    exc_axis: Vec<f64>,
    det_axis: Vec<f64>,
    label: String,
}

impl SpectralCube {
    pub fn new(
        values: Array3<f64>,
        t_axis: Vec<f64>,
        exc_axis: Vec<f64>,
        det_axis: Vec<f64>,
        label: impl Into<String>,
    ) -> Result<Self, SpectraError> {
        if t_axis.is_empty() || exc_axis.is_empty() || det_axis.is_empty() {
            return Err(SpectraError::EmptyAxis);
        }
        let dims = values.dim();
        if dims != (t_axis.len(), exc_axis.len(), det_axis.len()) {
            return Err(SpectraError::AxisMismatch);
        }
        validate_uniform_step(&t_axis)?;
        for axis in [&exc_axis, &det_axis] {
            if axis.iter().any(|v| !v.is_finite()) {
                return Err(SpectraError::NonFiniteValue);
            }
            if axis.windows(2).any(|w| w[1] <= w[0]) {
                return Err(SpectraError::NonAscendingAxis);
            }
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(SpectraError::NonFiniteValue);
        }
        Ok(Self {
            values,
            t_axis,
            exc_axis,
            det_axis,
            label: label.into(),
        })
    }

    pub fn values(&self) -> &Array3<f64> {
        &self.values
    }

    pub fn t_axis(&self) -> &[f64] {
        &self.t_axis
    }

    pub fn exc_axis(&self) -> &[f64] {
        &self.exc_axis
    }

    pub fn det_axis(&self) -> &[f64] {
        &self.det_axis
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Population-time step in fs.
    pub fn dt_fs(&self) -> f64 {
        if self.t_axis.len() < 2 {
            0.0
        } else {
            self.t_axis[1] - self.t_axis[0]
        }
    }

    /// Snap a wavelength coordinate to the nearest grid pixel and return its
    /// indices. Ties break toward the lower index.
    pub fn snap_pixel(&self, p: PixelCoord) -> Result<(usize, usize), SpectraError> {
        let ei = snap_axis(&self.exc_axis, p.exc_nm);
        let di = snap_axis(&self.det_axis, p.det_nm);
        match (ei, di) {
            (Some(ei), Some(di)) => Ok((ei, di)),
            _ => Err(SpectraError::OutOfRange {
                exc_nm: p.exc_nm,
                det_nm: p.det_nm,
            }),
        }
    }

    /// The population-time series at the pixel nearest `p`, tagged with the
    /// snapped coordinate.
    pub fn extract_trace(&self, p: PixelCoord) -> Result<TimeTrace, SpectraError> {
        let (ei, di) = self.snap_pixel(p)?;
        let y: Vec<f64> = (0..self.t_axis.len())
            .map(|ti| self.values[[ti, ei, di]])
            .collect();
        Ok(TimeTrace {
            t_fs: self.t_axis.clone(),
            y,
            origin: Some(TraceOrigin {
                pixel: PixelCoord::new(self.exc_axis[ei], self.det_axis[di]),
                nu_cm: None,
            }),
        })
    }

    /// Restrict the cube to population times with `t_min <= t <= t_max`.
    pub fn crop_population(&self, t_min: f64, t_max: f64) -> Result<SpectralCube, SpectraError> {
        if !(t_min < t_max) {
            return Err(SpectraError::EmptySelection);
        }
        let tol = self.dt_fs().abs().max(1.0) * STEP_TOLERANCE;
        let keep: Vec<usize> = self
            .t_axis
            .iter()
            .enumerate()
            .filter(|(_, &t)| t >= t_min - tol && t <= t_max + tol)
            .map(|(i, _)| i)
            .collect();
        if keep.is_empty() {
            return Err(SpectraError::EmptySelection);
        }
        let (first, last) = (keep[0], *keep.last().unwrap());
        let values = self
            .values
            .slice(ndarray::s![first..=last, .., ..])
            .to_owned();
        Ok(SpectralCube {
            values,
            t_axis: self.t_axis[first..=last].to_vec(),
            exc_axis: self.exc_axis.clone(),
            det_axis: self.det_axis.clone(),
            label: self.label.clone(),
        })
    }
}

fn validate_uniform_step(t: &[f64]) -> Result<(), SpectraError> {
    if t.iter().any(|v| !v.is_finite()) {
        return Err(SpectraError::NonFiniteValue);
    }
    if t.len() < 2 {
        return Ok(());
    }
    let dt = t[1] - t[0];
    if !(dt > 0.0) {
        return Err(SpectraError::NonUniformTimeAxis);
    }
    let tol = dt * STEP_TOLERANCE;
    for w in t.windows(2) {
        if ((w[1] - w[0]) - dt).abs() > tol {
            return Err(SpectraError::NonUniformTimeAxis);
        }
    }
    Ok(())
}

/// Nearest index on an ascending axis; `None` when the coordinate lies more
/// than half a grid step outside the axis range. Ties snap to the lower
/// index.
fn snap_axis(axis: &[f64], x: f64) -> Option<usize> {
    let n = axis.len();
    let lo_half = if n > 1 { (axis[1] - axis[0]) / 2.0 } else { 0.0 };
    let hi_half = if n > 1 {
        (axis[n - 1] - axis[n - 2]) / 2.0
    } else {
        0.0
    };
    if x < axis[0] - lo_half || x > axis[n - 1] + hi_half {
        return None;
    }
    let mut best = 0usize;
    let mut best_d = f64::INFINITY;
    for (i, &a) in axis.iter().enumerate() {
        let d = (x - a).abs();
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    Some(best)
}

/// Subtract the least-squares polynomial of the given order from a trace.
///
/// The fit runs on coordinates normalized to [-1, 1] so the normal equations
/// stay well conditioned for the small orders used here.
pub fn detrend(trace: &TimeTrace, order: usize) -> Result<TimeTrace, SpectraError> {
    let n = trace.len();
    if order + 1 >= n {
        return Err(SpectraError::Underdetermined { order, samples: n });
    }
    let t = trace.t_fs();
    let y = trace.values();
    let t_mid = (t[0] + t[n - 1]) / 2.0;
    let t_half = ((t[n - 1] - t[0]) / 2.0).max(1.0);
    let x: Vec<f64> = t.iter().map(|&ti| (ti - t_mid) / t_half).collect();

    let m = order + 1;
    // normal equations A^T A c = A^T y for the Vandermonde design matrix
    let mut ata = vec![vec![0.0f64; m]; m];
    let mut aty = vec![0.0f64; m];
    for (i, &xi) in x.iter().enumerate() {
        let mut pows = Vec::with_capacity(m);
        let mut p = 1.0;
        for _ in 0..m {
            pows.push(p);
            p *= xi;
        }
        for r in 0..m {
            aty[r] += pows[r] * y[i];
            for c in 0..m {
                ata[r][c] += pows[r] * pows[c];
            }
        }
    }
    let coeff = solve_dense(&mut ata, &mut aty).ok_or(SpectraError::Underdetermined {
        order,
        samples: n,
    })?;

    let residual: Vec<f64> = x
        .iter()
        .zip(y.iter())
        .map(|(&xi, &yi)| {
            let mut fit = 0.0;
            let mut p = 1.0;
            for &c in &coeff {
                fit += c * p;
                p *= xi;
            }
            yi - fit
        })
        .collect();
    Ok(TimeTrace {
        t_fs: trace.t_fs.clone(),
        y: residual,
        origin: trace.origin,
    })
}

/// Gaussian elimination with partial pivoting for the small systems used by
/// `detrend` and the decay fitter.
#[allow(clippy::needless_range_loop)] // rows of `a` are indexed pairwise
pub(crate) fn solve_dense(a: &mut [Vec<f64>], b: &mut [f64]) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut s = b[col];
        for k in (col + 1)..n {
            s -= a[col][k] * x[k];
        }
        x[col] = s / a[col][col];
    }
    Some(x)
}

const MANIFEST_NAME: &str = "manifest.txt";
const PAYLOAD_NAME: &str = "cube.f64le";

/// Write a cube archive: `manifest.txt` plus `cube.f64le`, deterministic
/// bytes for identical input.
pub fn save_archive(cube: &SpectralCube, dir: &Path) -> Result<(), SpectraError> {
    fs::create_dir_all(dir)?;
    let mut manifest = String::new();
    manifest.push_str("format_version=1\n");
    manifest.push_str(&format!("n_population={}\n", cube.t_axis.len()));
    manifest.push_str(&format!("n_excitation={}\n", cube.exc_axis.len()));
    manifest.push_str(&format!("n_detection={}\n", cube.det_axis.len()));
    manifest.push_str(&format!("dt_fs={}\n", cube.dt_fs()));
    manifest.push_str(&format!("t0_fs={}\n", cube.t_axis[0]));
    manifest.push_str(&format!("excitation_nm={}\n", join_floats(&cube.exc_axis)));
    manifest.push_str(&format!("detection_nm={}\n", join_floats(&cube.det_axis)));
    manifest.push_str(&format!("label={}\n", cube.label));
    fs::write(dir.join(MANIFEST_NAME), manifest)?;

    let mut payload = Vec::with_capacity(cube.values.len() * 8);
    for v in cube.values.iter() {
        payload.extend_from_slice(&v.to_le_bytes());
    }
    let mut f = fs::File::create(dir.join(PAYLOAD_NAME))?;
    f.write_all(&payload)?;
    Ok(())
}

/// Read a cube archive written by [`save_archive`].
pub fn load_archive(dir: &Path) -> Result<SpectralCube, SpectraError> {
    let manifest_path = dir.join(MANIFEST_NAME);
    if !manifest_path.is_file() {
        return Err(SpectraError::MissingFile(manifest_path));
    }
    let payload_path = dir.join(PAYLOAD_NAME);
    if !payload_path.is_file() {
        return Err(SpectraError::MissingFile(payload_path));
    }

    let text = fs::read_to_string(&manifest_path)
        .map_err(|_| SpectraError::MalformedManifest("manifest is not UTF-8".into()))?;
    let mut format_version = None;
    let mut n_population = None;
    let mut n_excitation = None;
    let mut n_detection = None;
    let mut dt_fs = None;
    let mut t0_fs = None;
    let mut excitation = None;
    let mut detection = None;
    let mut label = None;
    for line in text.lines() {
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| SpectraError::MalformedManifest(format!("bad line: {line}")))?;
        match key {
            "format_version" => format_version = Some(value.to_string()),
            "n_population" => n_population = Some(parse_usize(key, value)?),
            "n_excitation" => n_excitation = Some(parse_usize(key, value)?),
            "n_detection" => n_detection = Some(parse_usize(key, value)?),
            "dt_fs" => dt_fs = Some(parse_f64(key, value)?),
            "t0_fs" => t0_fs = Some(parse_f64(key, value)?),
            "excitation_nm" => excitation = Some(parse_float_list(key, value)?),
            "detection_nm" => detection = Some(parse_float_list(key, value)?),
            "label" => label = Some(value.to_string()),
            other => {
                return Err(SpectraError::MalformedManifest(format!(
                    "unknown key: {other}"
                )))
            }
        }
    }
    let format_version =
        format_version.ok_or_else(|| missing_key("format_version"))?;
    if format_version != "1" {
        return Err(SpectraError::MalformedManifest(format!(
            "unsupported format_version: {format_version}"
        )));
    }
    let n_t = n_population.ok_or_else(|| missing_key("n_population"))?;
    let n_e = n_excitation.ok_or_else(|| missing_key("n_excitation"))?;
    let n_d = n_detection.ok_or_else(|| missing_key("n_detection"))?;
    let dt = dt_fs.ok_or_else(|| missing_key("dt_fs"))?;
    let t0 = t0_fs.ok_or_else(|| missing_key("t0_fs"))?;
    let exc = excitation.ok_or_else(|| missing_key("excitation_nm"))?;
    let det = detection.ok_or_else(|| missing_key("detection_nm"))?;
    let label = label.ok_or_else(|| missing_key("label"))?;

    if n_t == 0 || n_e == 0 || n_d == 0 {
        return Err(SpectraError::EmptyAxis);
    }
    if exc.len() != n_e {
        return Err(SpectraError::MalformedManifest(format!(
            "excitation_nm has {} entries, expected {n_e}",
            exc.len()
        )));
    }
    if det.len() != n_d {
        return Err(SpectraError::MalformedManifest(format!(
            "detection_nm has {} entries, expected {n_d}",
            det.len()
        )));
    }
    if !(dt > 0.0) {
        return Err(SpectraError::NonUniformTimeAxis);
    }

    let bytes = fs::read(&payload_path)?;
    let expected = 8u64 * (n_t as u64) * (n_e as u64) * (n_d as u64);
    if bytes.len() as u64 != expected {
        return Err(SpectraError::SizeMismatch {
            expected,
            actual: bytes.len() as u64,
        });
    }
    let flat: Vec<f64> = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let values = Array3::from_shape_vec((n_t, n_e, n_d), flat)
        .expect("shape checked against payload size");
    let t_axis: Vec<f64> = (0..n_t).map(|i| t0 + i as f64 * dt).collect();
    SpectralCube::new(values, t_axis, exc, det, label)
}

fn missing_key(key: &str) -> SpectraError {
    SpectraError::MalformedManifest(format!("missing key: {key}"))
}

fn parse_usize(key: &str, value: &str) -> Result<usize, SpectraError> {
    value
        .parse()
        .map_err(|_| SpectraError::MalformedManifest(format!("bad {key}: {value}")))
}

fn parse_f64(key: &str, value: &str) -> Result<f64, SpectraError> {
    value
        .parse()
        .map_err(|_| SpectraError::MalformedManifest(format!("bad {key}: {value}")))
}

fn parse_float_list(key: &str, value: &str) -> Result<Vec<f64>, SpectraError> {
    value.split(',').map(|v| parse_f64(key, v.trim())).collect()
}

fn join_floats(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
