//! Fourier analysis along the population time: amplitude spectra, static 2D
//! frequency maps, Gaussian band-pass filtering and peak detection.

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use thiserror::Error;

use crate::spectra::{ComplexTrace, SpectralCube, SpectraError, TimeTrace};
use crate::units::SPEED_OF_LIGHT_CM_PER_FS as C;

#[derive(Debug, Error)]
pub enum FourierError {
    #[error("trace too short: {0} samples (need at least 4)")]
    TooShort(usize),
    #[error("pad factor must be >= 1")]
    BadPadFactor,
    #[error("gaussian window needs positive center and fwhm")]
    InvalidWindow,
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

/// Default zero-padding factor; refines peak-position readout below the
/// native bin width.
pub const DEFAULT_PAD_FACTOR: usize = 4;

/// One-sided amplitude spectrum over a wavenumber grid.
#[derive(Debug, Clone)]
pub struct AmplitudeSpectrum {
    /// Wavenumber grid in cm⁻¹, ascending from zero.
    pub nu_cm: Vec<f64>,
    /// Nonnegative amplitude per bin.
    pub amp: Vec<f64>,
    /// Phase in radians per bin.
    pub phase: Vec<f64>,
    /// Bin width 1/(c · N_pad · Δt) in cm⁻¹.
    pub dnu_cm: f64,
}

/// Per-pixel Fourier amplitude at a fixed wavenumber over the 2D plane.
#[derive(Debug, Clone)]
pub struct FrequencyMap {
    /// Probed wavenumber in cm⁻¹.
    pub nu0_cm: f64,
    /// ± resolution tag in cm⁻¹ (half the native, unpadded bin width).
    pub band_cm: f64,
    /// Amplitudes indexed [excitation][detection].
    pub amp: Array2<f64>,
    pub exc_axis: Vec<f64>,
    pub det_axis: Vec<f64>,
}

impl FrequencyMap {
    /// Strict local maxima over the 8-neighborhood, at or above
    /// `min_rel_height` of the map maximum, strongest first.
    pub fn local_maxima(&self, min_rel_height: f64) -> Vec<(usize, usize, f64)> {
        let (ne, nd) = self.amp.dim();
        let max = self.amp.iter().cloned().fold(0.0f64, f64::max);
        let mut out = Vec::new();
        for i in 1..ne.saturating_sub(1) {
            for j in 1..nd.saturating_sub(1) {
                let v = self.amp[[i, j]];
                if v < min_rel_height * max {
                    continue;
                }
                let mut is_max = true;
                for di in -1i64..=1 {
                    for dj in -1i64..=1 {
                        if di == 0 && dj == 0 {
                            continue;
                        }
                        let ni = (i as i64 + di) as usize;
                        let nj = (j as i64 + dj) as usize;
                        if self.amp[[ni, nj]] >= v {
                            is_max = false;
                        }
                    }
                }
                if is_max {
                    out.push((i, j, v));
                }
            }
        }
        out.sort_by(|a, b| b.2.partial_cmp(&a.2).unwrap());
        out
    }
}

/// Gaussian frequency window for band-pass filtering.
#[derive(Debug, Clone, Copy)]
pub struct GaussianWindow {
    pub center_cm: f64,
    pub fwhm_cm: f64,
}

impl GaussianWindow {
    pub fn new(center_cm: f64, fwhm_cm: f64) -> Result<Self, FourierError> {
        if !(center_cm > 0.0) || !(fwhm_cm > 0.0) {
            return Err(FourierError::InvalidWindow);
        }
        Ok(Self { center_cm, fwhm_cm })
    }

    /// Gain at wavenumber offset |ν| from zero: exp(−4 ln2 (|ν|−center)²/fwhm²).
    pub fn gain(&self, nu_cm: f64) -> f64 {
        let d = nu_cm.abs() - self.center_cm;
        (-4.0 * std::f64::consts::LN_2 * d * d / (self.fwhm_cm * self.fwhm_cm)).exp()
    }

    /// 1σ width in fs of the window's impulse-response envelope.
    pub fn impulse_sigma_fs(&self) -> f64 {
        (8.0 * std::f64::consts::LN_2).sqrt() / (2.0 * std::f64::consts::PI * C * self.fwhm_cm)
    }
}

fn fft(input: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(input.len())
    } else {
        planner.plan_fft_forward(input.len())
    };
    let mut buf = input.to_vec();
    fft.process(&mut buf);
    buf
}

/// Amplitude spectrum of a detrended trace, zero padded to
/// `pad_factor * N` samples. Only the nonnegative-frequency half is
/// returned; ν[k] = k/(c · N_pad · Δt).
pub fn ft_spectrum(
    trace: &TimeTrace,
    pad_factor: usize,
) -> Result<AmplitudeSpectrum, FourierError> {
    let n = trace.len();
    if n < 4 {
        return Err(FourierError::TooShort(n));
    }
    if pad_factor < 1 {
        return Err(FourierError::BadPadFactor);
    }
    let n_pad = n * pad_factor;
    let mut buf = vec![Complex64::new(0.0, 0.0); n_pad];
    for (b, &y) in buf.iter_mut().zip(trace.values()) {
        *b = Complex64::new(y, 0.0);
    }
    let spec = fft(&buf, false);
    let dnu = 1.0 / (C * n_pad as f64 * trace.dt_fs());
    let half = n_pad / 2;
    let mut nu_cm = Vec::with_capacity(half + 1);
    let mut amp = Vec::with_capacity(half + 1);
    let mut phase = Vec::with_capacity(half + 1);
    for (k, c) in spec.iter().take(half + 1).enumerate() {
        nu_cm.push(k as f64 * dnu);
        amp.push(c.norm());
        phase.push(c.arg());
    }
    Ok(AmplitudeSpectrum {
        nu_cm,
        amp,
        phase,
        dnu_cm: dnu,
    })
}

/// Per-pixel Fourier amplitude at the bin nearest ν₀. The cube is expected
/// to be cropped and detrended already (see [`detrend_cube`]).
pub fn frequency_map(
    cube: &SpectralCube,
    nu0_cm: f64,
    pad_factor: usize,
) -> Result<FrequencyMap, FourierError> {
    let n = cube.t_axis().len();
    if n < 4 {
        return Err(FourierError::TooShort(n));
    }
    if pad_factor < 1 {
        return Err(FourierError::BadPadFactor);
    }
    let n_pad = n * pad_factor;
    let dt = cube.dt_fs();
    let dnu = 1.0 / (C * n_pad as f64 * dt);
    let bin = ((nu0_cm / dnu).round() as usize).min(n_pad / 2);
    let band = 0.5 / (C * n as f64 * dt);

    let ne = cube.exc_axis().len();
    let nd = cube.det_axis().len();
    let rows: Vec<Vec<f64>> = (0..ne)
        .into_par_iter()
        .map(|ei| {
            let mut planner = FftPlanner::new();
            let fft = planner.plan_fft_forward(n_pad);
            let mut row = vec![0.0; nd];
            let mut buf = vec![Complex64::new(0.0, 0.0); n_pad];
            for (di, slot) in row.iter_mut().enumerate() {
                for (ti, b) in buf.iter_mut().enumerate() {
                    *b = if ti < n {
                        Complex64::new(cube.values()[[ti, ei, di]], 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                }
                fft.process(&mut buf);
                *slot = buf[bin].norm();
            }
            row
        })
        .collect();
    let mut amp = Array2::zeros((ne, nd));
    for (ei, row) in rows.into_iter().enumerate() {
        for (di, v) in row.into_iter().enumerate() {
            amp[[ei, di]] = v;
        }
    }
    Ok(FrequencyMap {
        nu0_cm,
        band_cm: band,
        amp,
        exc_axis: cube.exc_axis().to_vec(),
        det_axis: cube.det_axis().to_vec(),
    })
}

/// Detrend every pixel trace of a cube with a polynomial of the given order.
pub fn detrend_cube(cube: &SpectralCube, order: usize) -> Result<SpectralCube, FourierError> {
    let nt = cube.t_axis().len();
    let ne = cube.exc_axis().len();
    let nd = cube.det_axis().len();
    let mut values = ndarray::Array3::zeros((nt, ne, nd));
    for ei in 0..ne {
        for di in 0..nd {
            let y: Vec<f64> = (0..nt).map(|ti| cube.values()[[ti, ei, di]]).collect();
            let trace = TimeTrace::new(cube.t_axis().to_vec(), y)?;
            let resid = crate::spectra::detrend(&trace, order)?;
            for (ti, &v) in resid.values().iter().enumerate() {
                values[[ti, ei, di]] = v;
            }
        }
    }
    Ok(SpectralCube::new(
        values,
        cube.t_axis().to_vec(),
        cube.exc_axis().to_vec(),
        cube.det_axis().to_vec(),
        cube.label(),
    )?)
}

/// Gaussian band-pass around `w.center_cm`, applied symmetrically to the ±
/// frequency branches, returning the analytic-like filtered trace: the
/// magnitude is the envelope and the real part the filtered oscillation.
///
/// The trace is zero padded well past the window's impulse response so the
/// filter acts as a linear (not circular) convolution.
pub fn bandpass_filter(
    trace: &TimeTrace,
    w: &GaussianWindow,
) -> Result<ComplexTrace, FourierError> {
    let n = trace.len();
    if n < 4 {
        return Err(FourierError::TooShort(n));
    }
    let dt = trace.dt_fs();
    let margin = (8.0 * w.impulse_sigma_fs() / dt).ceil() as usize;
    let m = (4 * n).max(n + 2 * margin);
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for (b, &y) in buf.iter_mut().zip(trace.values()) {
        *b = Complex64::new(y, 0.0);
    }
    let mut spec = fft(&buf, false);
    // window both branches, then keep the analytic (positive-frequency) part
    for (k, c) in spec.iter_mut().enumerate() {
        let cycles = if k <= m / 2 {
            k as f64 / (m as f64 * dt)
        } else {
            (k as f64 - m as f64) / (m as f64 * dt)
        };
        let gain = w.gain(cycles / C);
        let analytic = if k == 0 || (m.is_multiple_of(2) && k == m / 2) {
            1.0
        } else if k < m.div_ceil(2) {
            2.0
        } else {
            0.0
        };
        *c *= gain * analytic;
    }
    let inv = fft(&spec, true);
    let y: Vec<Complex64> = inv.iter().take(n).map(|c| c / m as f64).collect();
    Ok(ComplexTrace {
        t_fs: trace.t_fs().to_vec(),
        y,
        origin: trace.origin,
    })
}

/// Local maxima of an amplitude spectrum above `min_rel_height` of the
/// global maximum, refined by 3-point parabolic interpolation on the log
/// amplitude and sorted by wavenumber.
pub fn spectral_peaks(spec: &AmplitudeSpectrum, min_rel_height: f64) -> Vec<(f64, f64)> {
    let amp = &spec.amp;
    let n = amp.len();
    if n < 3 {
        return Vec::new();
    }
    let max = amp.iter().cloned().fold(0.0f64, f64::max);
    if max <= 0.0 {
        return Vec::new();
    }
    let floor = min_rel_height * max;
    let mut peaks = Vec::new();
    for i in 1..n - 1 {
        if amp[i] >= floor && amp[i] > amp[i - 1] && amp[i] > amp[i + 1] {
            let (dnu, damp) = if amp[i - 1] > 0.0 && amp[i + 1] > 0.0 {
                let l = amp[i - 1].ln();
                let c = amp[i].ln();
                let r = amp[i + 1].ln();
                let den = l - 2.0 * c + r;
                if den.abs() > 1e-300 {
                    let delta = 0.5 * (l - r) / den;
                    (delta, (c - 0.25 * (l - r) * delta).exp())
                } else {
                    (0.0, amp[i])
                }
            } else {
                (0.0, amp[i])
            };
            peaks.push((spec.nu_cm[i] + dnu * spec.dnu_cm, damp));
        }
    }
    peaks.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    peaks
}
