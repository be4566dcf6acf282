//! Complex Morlet continuous wavelet transform.
//!
//! The mother wavelet is Ψ(T) = (π F_b)^(-1/2) · exp(−2πi F_c T) ·
//! exp(−T²/F_b) with T measured in samples; physical wavenumbers enter only
//! through the scale relation ν = F_c / (c · s · Δt).

use ndarray::{Array2, Array3};
use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::spectra::{PixelCoord, SpectralCube, SpectraError, TimeTrace, TraceOrigin};
use crate::units::SPEED_OF_LIGHT_CM_PER_FS as C;

#[derive(Debug, Error)]
pub enum WaveletError {
    #[error("trace too short: {0} samples (need at least 8)")]
    TooShort(usize),
    #[error("frequencies must be positive, got {0}")]
    NonPositiveFrequency(f64),
    #[error("scale must be positive, got {0}")]
    NonPositiveScale(f64),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

/// Morlet bandwidth and center-frequency parameters.
///
/// F_b trades frequency resolution against time resolution; large values
/// (e.g. 10) sharpen frequency at the cost of time localization, small ones
/// (e.g. 0.5) do the opposite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorletParams {
    pub f_b: f64,
    pub f_c: f64,
}

impl Default for MorletParams {
    fn default() -> Self {
        Self { f_b: 2.0, f_c: 1.0 }
    }
}

/// Envelope cutoff for the truncated convolution: wavelet samples with
/// exp(−T²/F_b) below this fraction of the peak are dropped. Small enough
/// that the truncated sum matches an untruncated evaluation to well below
/// 1e-10 of the coefficient scale.
const ENVELOPE_CUTOFF: f64 = 1e-12;

/// The mother wavelet Ψ(T) evaluated at a dimensionless sample offset.
pub fn morlet(t: f64, p: &MorletParams) -> Complex64 {
    let norm = 1.0 / (std::f64::consts::PI * p.f_b).sqrt();
    let phase = -2.0 * std::f64::consts::PI * p.f_c * t;
    let envelope = (-t * t / p.f_b).exp();
    Complex64::new(phase.cos(), phase.sin()) * (norm * envelope)
}

/// Scales (sample units) probing the requested wavenumbers:
/// s_i = F_c / (c · ν_i · Δt).
#[derive(Debug, Clone)]
pub struct ScaleSet {
    pub scales: Vec<f64>,
    pub nu_cm: Vec<f64>,
    pub dt_fs: f64,
}

pub fn scales_for_frequencies(
    nu_cm: &[f64],
    dt_fs: f64,
    p: &MorletParams,
) -> Result<ScaleSet, WaveletError> {
    if !(dt_fs > 0.0) {
        return Err(WaveletError::NonPositiveScale(dt_fs));
    }
    let mut scales = Vec::with_capacity(nu_cm.len());
    for &nu in nu_cm {
        if !(nu > 0.0) {
            return Err(WaveletError::NonPositiveFrequency(nu));
        }
        scales.push(p.f_c / (C * nu * dt_fs));
    }
    Ok(ScaleSet {
        scales,
        nu_cm: nu_cm.to_vec(),
        dt_fs,
    })
}

/// Wavenumber probed by a scale: ν = F_c / (c · s · Δt).
pub fn pseudofrequency(scale: f64, dt_fs: f64, p: &MorletParams) -> Result<f64, WaveletError> {
    if !(scale > 0.0) {
        return Err(WaveletError::NonPositiveScale(scale));
    }
    if !(dt_fs > 0.0) {
        return Err(WaveletError::NonPositiveScale(dt_fs));
    }
    Ok(p.f_c / (C * scale * dt_fs))
}

/// Edge margin (samples) inside which coefficients at a scale are
/// unreliable: two standard deviations of the atom envelope, at least one
/// sample.
pub fn cone_of_influence(scale: f64, p: &MorletParams, n_samples: usize) -> usize {
    let margin = (2.0 * scale * (p.f_b / 2.0).sqrt()).ceil() as usize;
    margin.max(1).min(n_samples)
}

/// Complex CWT coefficients over (scale, translation) with a COI mask.
#[derive(Debug, Clone)]
pub struct Scalogram {
    /// Coefficients indexed [scale][u].
    pub coeffs: Array2<Complex64>,
    /// Translation grid in fs (the input trace's time axis).
    pub u_fs: Vec<f64>,
    pub scale_set: ScaleSet,
    /// True where edge effects make a cell unreliable.
    pub coi_mask: Array2<bool>,
}

impl Scalogram {
    /// |coefficients| row for one scale.
    pub fn magnitude_row(&self, scale_idx: usize) -> Vec<f64> {
        self.coeffs
            .row(scale_idx)
            .iter()
            .map(|c| c.norm())
            .collect()
    }
}

/// Discrete CWT: coeffs[s][u] = Σ_n y[n] · conj(s^{-1/2} Ψ((n−u)/s)), with
/// the signal taken as zero outside the record and the wavelet truncated at
/// [`ENVELOPE_CUTOFF`].
pub fn cwt(
    trace: &TimeTrace,
    set: &ScaleSet,
    p: &MorletParams,
) -> Result<Scalogram, WaveletError> {
    let n = trace.len();
    if n < 8 {
        return Err(WaveletError::TooShort(n));
    }
    let y = trace.values();
    let n_scales = set.scales.len();
    let mut coeffs = Array2::from_elem((n_scales, n), Complex64::new(0.0, 0.0));
    let mut coi = Array2::from_elem((n_scales, n), false);
    let half_width_factor = (p.f_b * (1.0 / ENVELOPE_CUTOFF).ln()).sqrt();
    for (si, &s) in set.scales.iter().enumerate() {
        if !(s > 0.0) || !s.is_finite() {
            return Err(WaveletError::NonPositiveScale(s));
        }
        let inv_sqrt_s = 1.0 / s.sqrt();
        let half_width = (s * half_width_factor).ceil() as usize;
        for u in 0..n {
            let lo = u.saturating_sub(half_width);
            let hi = (u + half_width + 1).min(n);
            let mut acc = Complex64::new(0.0, 0.0);
            for (idx, &v) in y[lo..hi].iter().enumerate() {
                let t = (lo + idx) as f64 - u as f64;
                acc += v * (morlet(t / s, p) * inv_sqrt_s).conj();
            }
            coeffs[[si, u]] = acc;
        }
        let margin = cone_of_influence(s, p, n);
        for u in 0..n {
            if u < margin || u + margin >= n {
                coi[[si, u]] = true;
            }
        }
    }
    Ok(Scalogram {
        coeffs,
        u_fs: trace.t_fs().to_vec(),
        scale_set: set.clone(),
        coi_mask: coi,
    })
}

/// CWT amplitude at one wavenumber over the pixel grid, resolved along the
/// translation u.
#[derive(Debug, Clone)]
pub struct TimeResolvedFrequencyMap {
    pub nu0_cm: f64,
    /// ± resolution tag in cm⁻¹ (half the native Fourier bin of the record).
    pub band_cm: f64,
    /// Amplitudes indexed [u][excitation][detection].
    pub amp: Array3<f64>,
    pub u_fs: Vec<f64>,
    pub exc_axis: Vec<f64>,
    pub det_axis: Vec<f64>,
    /// COI margin in samples at the probed scale.
    pub coi_margin: usize,
}

impl TimeResolvedFrequencyMap {
    /// The static map slice at the translation sample nearest `u_fs`.
    pub fn slice_at(&self, u_fs: f64) -> crate::fourier::FrequencyMap {
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for (i, &u) in self.u_fs.iter().enumerate() {
            let d = (u - u_fs).abs();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        crate::fourier::FrequencyMap {
            nu0_cm: self.nu0_cm,
            band_cm: self.band_cm,
            amp: self.amp.index_axis(ndarray::Axis(0), best).to_owned(),
            exc_axis: self.exc_axis.clone(),
            det_axis: self.det_axis.clone(),
        }
    }
}

/// Per-pixel |CWT| at the single scale mapped from ν₀. The cube is expected
/// to be cropped and detrended already.
pub fn time_resolved_frequency_map(
    cube: &SpectralCube,
    nu0_cm: f64,
    p: &MorletParams,
) -> Result<TimeResolvedFrequencyMap, WaveletError> {
    let set = scales_for_frequencies(&[nu0_cm], cube.dt_fs(), p)?;
    let nt = cube.t_axis().len();
    if nt < 8 {
        return Err(WaveletError::TooShort(nt));
    }
    let ne = cube.exc_axis().len();
    let nd = cube.det_axis().len();
    let rows: Vec<Vec<Vec<f64>>> = (0..ne)
        .into_par_iter()
        .map(|ei| {
            let mut out = vec![vec![0.0; nt]; nd];
            for (di, series) in out.iter_mut().enumerate() {
                let y: Vec<f64> = (0..nt).map(|ti| cube.values()[[ti, ei, di]]).collect();
                let trace = TimeTrace::new(cube.t_axis().to_vec(), y)
                    .expect("cube axes are valid");
                let sc = cwt(&trace, &set, p).expect("length checked above");
                for (u, v) in sc.magnitude_row(0).into_iter().enumerate() {
                    series[u] = v;
                }
            }
            out
        })
        .collect();
    let mut amp = Array3::zeros((nt, ne, nd));
    for (ei, row) in rows.into_iter().enumerate() {
        for (di, series) in row.into_iter().enumerate() {
            for (u, v) in series.into_iter().enumerate() {
                amp[[u, ei, di]] = v;
            }
        }
    }
    Ok(TimeResolvedFrequencyMap {
        nu0_cm,
        band_cm: 0.5 / (C * nt as f64 * cube.dt_fs()),
        amp,
        u_fs: cube.t_axis().to_vec(),
        exc_axis: cube.exc_axis().to_vec(),
        det_axis: cube.det_axis().to_vec(),
        coi_margin: cone_of_influence(set.scales[0], p, nt),
    })
}

/// The |CWT| series at the pixel nearest `pix` and the scale for ν₀.
pub fn wavelet_trace(
    cube: &SpectralCube,
    pix: PixelCoord,
    nu0_cm: f64,
    p: &MorletParams,
) -> Result<TimeTrace, WaveletError> {
    let trace = cube.extract_trace(pix)?;
    let set = scales_for_frequencies(&[nu0_cm], cube.dt_fs(), p)?;
    let sc = cwt(&trace, &set, p)?;
    let origin = TraceOrigin {
        pixel: trace.origin.expect("extract_trace tags its origin").pixel,
        nu_cm: Some(nu0_cm),
    };
    Ok(
        TimeTrace::new(sc.u_fs.clone(), sc.magnitude_row(0))
            .expect("cwt output is finite")
            .with_origin(origin),
    )
}
