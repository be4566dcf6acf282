//! Cumulant line-shape simulator and synthetic rephasing 2DES cubes.
//!
//! The model is a single optical transition whose excited-state surface is
//! displaced along a set of undamped vibrational coordinates, plus an
//! overdamped Brownian bath for residual dephasing. Ground-state bleach and
//! stimulated emission are kept in the impulsive limit with no excited-state
//! decay, so the third-order rephasing response is analytic in the time
//! domain.

use ndarray::{Array2, Array3};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use thiserror::Error;

use crate::fourier::AmplitudeSpectrum;
use crate::spectra::{SpectralCube, SpectraError};
use crate::units::{BOLTZMANN_CM_PER_K, SPEED_OF_LIGHT_CM_PER_FS as C};

#[derive(Debug, Error)]
pub enum LineShapeError {
    #[error("time grid does not resolve the highest frequency: step {step_fs} fs > {max_fs} fs")]
    UnresolvedGrid { step_fs: f64, max_fs: f64 },
    #[error("invalid model parameter: {0}")]
    InvalidModel(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("bad config: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

/// An undamped vibrational mode displaced in the excited state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VibrationalMode {
    /// Frequency in cm⁻¹.
    pub omega_cm: f64,
    /// Huang-Rhys factor.
    pub huang_rhys: f64,
}

/// Overdamped Brownian oscillator bath.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrownianBath {
    /// Reorganization energy in cm⁻¹.
    pub lambda_cm: f64,
    /// Inverse correlation time in fs⁻¹.
    pub gamma_inv_fs: f64,
}

/// Electronic gap, displaced modes, bath and temperature.
#[derive(Debug, Clone, PartialEq)]
pub struct LineShapeModel {
    pub omega_eg_cm: f64,
    pub modes: Vec<VibrationalMode>,
    pub bath: BrownianBath,
    pub temperature_k: f64,
}

impl LineShapeModel {
    pub fn validate(&self) -> Result<(), LineShapeError> {
        if !(self.omega_eg_cm > 0.0) {
            return Err(LineShapeError::InvalidModel("omega_eg must be positive".into()));
        }
        if !(self.temperature_k > 0.0) {
            return Err(LineShapeError::InvalidModel("temperature must be positive".into()));
        }
        if !(self.bath.lambda_cm >= 0.0) {
            return Err(LineShapeError::InvalidModel("lambda must be >= 0".into()));
        }
        if !(self.bath.gamma_inv_fs > 0.0) {
            return Err(LineShapeError::InvalidModel(
                "bath inverse correlation time must be positive".into(),
            ));
        }
        for m in &self.modes {
            if !(m.omega_cm > 0.0) || !(m.huang_rhys >= 0.0) {
                return Err(LineShapeError::InvalidModel(format!(
                    "bad mode ({}, {})",
                    m.omega_cm, m.huang_rhys
                )));
            }
        }
        Ok(())
    }

    /// The modes of the published PSII RC simulation: 120/190/265/340/440
    /// cm⁻¹ at S = 0.1 each, a 50 cm⁻¹ bath with a 100 fs correlation time,
    /// 80 K, gap at 10⁷/680 cm⁻¹.
    pub fn reference_model() -> Self {
        let modes = [120.0, 190.0, 265.0, 340.0, 440.0]
            .into_iter()
            .map(|omega_cm| VibrationalMode {
                omega_cm,
                huang_rhys: 0.1,
            })
            .collect();
        Self {
            omega_eg_cm: 1.0e7 / 680.0,
            modes,
            bath: BrownianBath {
                lambda_cm: 50.0,
                gamma_inv_fs: 0.01,
            },
            temperature_k: 80.0,
        }
    }

    /// Total reorganization energy in cm⁻¹: bath λ plus Σ S·ω of the modes.
    pub fn total_reorganization_cm(&self) -> f64 {
        self.bath.lambda_cm
            + self
                .modes
                .iter()
                .map(|m| m.huang_rhys * m.omega_cm)
                .sum::<f64>()
    }
}

/// Line-shape contribution of one displaced mode:
/// g(t) = S·[coth(ħω/2k_BT)(1 − cos ωt) + i(sin ωt − ωt)].
pub fn g_vibrational(t_fs: f64, mode: &VibrationalMode, temperature_k: f64) -> Complex64 {
    let omega = 2.0 * std::f64::consts::PI * C * mode.omega_cm; // rad/fs
    let kbt_cm = BOLTZMANN_CM_PER_K * temperature_k;
    let coth = 1.0 / (mode.omega_cm / (2.0 * kbt_cm)).tanh();
    let wt = omega * t_fs;
    mode.huang_rhys * Complex64::new(coth * (1.0 - wt.cos()), wt.sin() - wt)
}

/// High-temperature overdamped Brownian term:
/// g(t) = (2λ̃θ/Λ²)(e^(−Λt) + Λt − 1) − i(λ̃/Λ)(e^(−Λt) + Λt − 1),
/// with λ̃ = 2πcλ and θ = 2πc·k_BT in rad/fs.
pub fn g_brownian(t_fs: f64, bath: &BrownianBath, temperature_k: f64) -> Complex64 {
    let lambda = 2.0 * std::f64::consts::PI * C * bath.lambda_cm;
    let theta = 2.0 * std::f64::consts::PI * C * BOLTZMANN_CM_PER_K * temperature_k;
    let gamma = bath.gamma_inv_fs;
    let x = gamma * t_fs;
    let e = (-x).exp() + x - 1.0;
    Complex64::new(
        2.0 * lambda * theta / (gamma * gamma) * e,
        -(lambda / gamma) * e,
    )
}

/// Sum of all mode terms plus the bath term.
pub fn g_total(t_fs: f64, model: &LineShapeModel) -> Complex64 {
    let mut g = g_brownian(t_fs, &model.bath, model.temperature_k);
    for m in &model.modes {
        g += g_vibrational(t_fs, m, model.temperature_k);
    }
    g
}

/// Stimulated-emission and ground-state-bleach pathway factors from
/// precomputed line-shape values at the six time arguments.
pub fn pathway_factors(
    g1: Complex64,
    g2: Complex64,
    g3: Complex64,
    g12: Complex64,
    g23: Complex64,
    g123: Complex64,
) -> (Complex64, Complex64) {
    let f_se = (-g1.conj() + g2 - g3.conj() - g12.conj() - g23 + g123.conj()).exp();
    let f_gsb = (-g1.conj() + g2.conj() - g3 - g12.conj() - g23.conj() + g123.conj()).exp();
    (f_se, f_gsb)
}

/// Rephasing GSB+SE response
/// R(t1,t2,t3) = e^(+iω̃_eg t1 − iω̃_eg t3) · [F_SE + F_GSB].
pub fn rephasing_response(t1_fs: f64, t2_fs: f64, t3_fs: f64, model: &LineShapeModel) -> Complex64 {
    let (f_se, f_gsb) = pathway_factors(
        g_total(t1_fs, model),
        g_total(t2_fs, model),
        g_total(t3_fs, model),
        g_total(t1_fs + t2_fs, model),
        g_total(t2_fs + t3_fs, model),
        g_total(t1_fs + t2_fs + t3_fs, model),
    );
    let w_eg = 2.0 * std::f64::consts::PI * C * model.omega_eg_cm;
    let carrier = Complex64::new(0.0, w_eg * (t1_fs - t3_fs)).exp();
    carrier * (f_se + f_gsb)
}

/// Integration controls shared by the linear spectra.
const LINEAR_DAMPING_CUTOFF: f64 = 1e-6;
const LINEAR_TIME_CAP_FS: f64 = 2.0e5;

enum LinearKind {
    Absorption,
    Emission,
}

fn linear_spectrum(
    model: &LineShapeModel,
    nu_grid_cm: &[f64],
    kind: LinearKind,
) -> Result<AmplitudeSpectrum, LineShapeError> {
    model.validate()?;
    let nu_max = model
        .modes
        .iter()
        .map(|m| m.omega_cm)
        .fold(0.0f64, f64::max)
        .max(1.0);
    let max_step = 1.0 / (10.0 * C * nu_max);
    let dt = max_step.min(1.0);
    if dt > max_step {
        return Err(LineShapeError::UnresolvedGrid {
            step_fs: dt,
            max_fs: max_step,
        });
    }

    // line-shape factor sampled until it has decayed or the cap is reached
    let mut factors: Vec<Complex64> = Vec::new();
    let lambda_shift = match kind {
        LinearKind::Absorption => 0.0,
        LinearKind::Emission => 2.0 * std::f64::consts::PI * C * 2.0 * model.total_reorganization_cm(),
    };
    let mut k = 0usize;
    loop {
        let t = k as f64 * dt;
        let g = g_total(t, model);
        let f = match kind {
            LinearKind::Absorption => (-g).exp(),
            LinearKind::Emission => (-g.conj()).exp() * Complex64::new(0.0, lambda_shift * t).exp(),
        };
        factors.push(f);
        if (-g.re).exp() < LINEAR_DAMPING_CUTOFF || t >= LINEAR_TIME_CAP_FS {
            break;
        }
        k += 1;
    }

    let w_eg = 2.0 * std::f64::consts::PI * C * model.omega_eg_cm;
    let mut amp: Vec<f64> = nu_grid_cm
        .par_iter()
        .map(|&nu| {
            let detune = 2.0 * std::f64::consts::PI * C * nu - w_eg;
            let mut acc = 0.0;
            for (k, f) in factors.iter().enumerate() {
                let weight = if k == 0 || k == factors.len() - 1 { 0.5 } else { 1.0 };
                let ph = Complex64::new(0.0, detune * k as f64 * dt).exp();
                acc += weight * (ph * f).re;
            }
            acc * dt
        })
        .collect();
    let peak = amp.iter().cloned().fold(f64::MIN, f64::max);
    if peak > 0.0 {
        for a in amp.iter_mut() {
            *a /= peak;
        }
    }
    let dnu = if nu_grid_cm.len() > 1 {
        nu_grid_cm[1] - nu_grid_cm[0]
    } else {
        0.0
    };
    Ok(AmplitudeSpectrum {
        nu_cm: nu_grid_cm.to_vec(),
        amp,
        phase: vec![0.0; nu_grid_cm.len()],
        dnu_cm: dnu,
    })
}

/// Linear absorption σ(ν) ∝ Re ∫₀^∞ e^(i(ω̃−ω̃_eg)t) e^(−g(t)) dt,
/// normalized to unit maximum.
pub fn linear_absorption(
    model: &LineShapeModel,
    nu_grid_cm: &[f64],
) -> Result<AmplitudeSpectrum, LineShapeError> {
    linear_spectrum(model, nu_grid_cm, LinearKind::Absorption)
}

/// Steady-state emission: the complex-conjugate line shape evaluated about
/// the relaxed gap, i.e. e^(−g*(t))·e^(+2iλ̃_tot t) under the same
/// transform. Its first moment sits 2λ_tot below the absorption.
pub fn linear_emission(
    model: &LineShapeModel,
    nu_grid_cm: &[f64],
) -> Result<AmplitudeSpectrum, LineShapeError> {
    linear_spectrum(model, nu_grid_cm, LinearKind::Emission)
}

/// Time grids and transform padding for the cube synthesis.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationGrids {
    /// Coherence-time step and extent (t1 runs 0..=t1_max).
    pub t1_step_fs: f64,
    pub t1_max_fs: f64,
    /// Population-time grid (the cube's T axis).
    pub t2_min_fs: f64,
    pub t2_max_fs: f64,
    pub t2_step_fs: f64,
    /// Detection-time step and extent.
    pub t3_step_fs: f64,
    pub t3_max_fs: f64,
    /// Zero-padding factors for the two spectral transforms.
    pub pad_t1: usize,
    pub pad_t3: usize,
    /// Target wavelength grids in nm, ascending.
    pub exc_nm: Vec<f64>,
    pub det_nm: Vec<f64>,
}

impl Default for SimulationGrids {
    fn default() -> Self {
        let wl: Vec<f64> = (0..=50).map(|i| 650.0 + i as f64).collect();
        Self {
            t1_step_fs: 2.0,
            t1_max_fs: 400.0,
            t2_min_fs: 0.0,
            t2_max_fs: 1000.0,
            t2_step_fs: 20.0,
            t3_step_fs: 2.0,
            t3_max_fs: 400.0,
            pad_t1: 2,
            pad_t3: 2,
            exc_nm: wl.clone(),
            det_nm: wl,
        }
    }
}

impl SimulationGrids {
    pub fn validate(&self) -> Result<(), LineShapeError> {
        for (name, step, max) in [
            ("t1", self.t1_step_fs, self.t1_max_fs),
            ("t3", self.t3_step_fs, self.t3_max_fs),
        ] {
            if !(step > 0.0) || !(max > step) {
                return Err(LineShapeError::InvalidGrid(format!(
                    "{name} grid needs positive step below its extent"
                )));
            }
        }
        if !(self.t2_step_fs > 0.0) || self.t2_max_fs < self.t2_min_fs || self.t2_min_fs < 0.0 {
            return Err(LineShapeError::InvalidGrid("bad t2 grid".into()));
        }
        if self.pad_t1 < 1 || self.pad_t3 < 1 {
            return Err(LineShapeError::InvalidGrid("pad factors must be >= 1".into()));
        }
        for (name, axis) in [("excitation", &self.exc_nm), ("detection", &self.det_nm)] {
            if axis.is_empty() {
                return Err(LineShapeError::InvalidGrid(format!("{name} grid is empty")));
            }
            if axis.windows(2).any(|w| w[1] <= w[0]) || axis.iter().any(|&v| !(v > 0.0)) {
                return Err(LineShapeError::InvalidGrid(format!(
                    "{name} grid must be positive and ascending"
                )));
            }
        }
        Ok(())
    }

    fn t1_count(&self) -> usize {
        (self.t1_max_fs / self.t1_step_fs).round() as usize + 1
    }

    fn t3_count(&self) -> usize {
        (self.t3_max_fs / self.t3_step_fs).round() as usize + 1
    }

    fn t2_values(&self) -> Vec<f64> {
        let n = ((self.t2_max_fs - self.t2_min_fs) / self.t2_step_fs).round() as usize + 1;
        (0..n)
            .map(|i| self.t2_min_fs + i as f64 * self.t2_step_fs)
            .collect()
    }
}

/// A synthesized cube plus any convergence warnings.
#[derive(Debug)]
pub struct Simulation {
    pub cube: SpectralCube,
    pub warnings: Vec<String>,
}

/// Evaluate the rephasing response on the (t1, t2, t3) lattice, transform
/// the coherence and detection times to wavenumber axes (signs chosen so
/// diagonal peaks lie on the main diagonal), take the real part, and
/// resample onto the requested wavelength grids by linear interpolation.
///
/// The carrier e^(±iω̃_eg t) is handled in the rotating frame: the envelope
/// is transformed and the frequency axes shifted by ω_eg, which is exact
/// and avoids undersampling the optical period on 2 fs grids.
pub fn simulate_cube(
    model: &LineShapeModel,
    grids: &SimulationGrids,
) -> Result<Simulation, LineShapeError> {
    model.validate()?;
    grids.validate()?;

    let n1 = grids.t1_count();
    let n3 = grids.t3_count();
    let t2s = grids.t2_values();
    let mut warnings = Vec::new();
    for (name, t_end) in [("t1", grids.t1_max_fs), ("t3", grids.t3_max_fs)] {
        let damping = (-g_total(t_end, model).re).exp();
        if damping >= 1e-3 {
            warnings.push(format!(
                "|exp(-g)| = {damping:.2e} at the {name} endpoint ({t_end} fs); spectra may ring"
            ));
        }
    }

    // g on a common lattice when every grid step is a multiple of the
    // smallest one; falls back to direct evaluation otherwise
    let base = grids.t1_step_fs.min(grids.t3_step_fs).min(grids.t2_step_fs);
    let on_lattice = |step: f64| (step / base - (step / base).round()).abs() < 1e-9;
    let lattice = on_lattice(grids.t1_step_fs)
        && on_lattice(grids.t3_step_fs)
        && on_lattice(grids.t2_step_fs)
        && (grids.t2_min_fs / base - (grids.t2_min_fs / base).round()).abs() < 1e-9;
    let t_max = grids.t1_max_fs + grids.t2_max_fs + grids.t3_max_fs;
    let g_table: Option<Vec<Complex64>> = if lattice {
        let k_max = (t_max / base).round() as usize;
        Some((0..=k_max).map(|k| g_total(k as f64 * base, model)).collect())
    } else {
        None
    };
    let g_at = |t: f64| -> Complex64 {
        match &g_table {
            Some(table) => table[(t / base).round() as usize],
            None => g_total(t, model),
        }
    };

    let m1 = n1 * grids.pad_t1;
    let m3 = n3 * grids.pad_t3;

    // signed frequency offsets from the gap, ascending, plus bin lookup
    let offsets_1 = shifted_offsets(m1, grids.t1_step_fs);
    let offsets_3 = shifted_offsets(m3, grids.t3_step_fs);
    let nu_targets_exc: Vec<f64> = grids.exc_nm.iter().map(|&nm| 1.0e7 / nm).collect();
    let nu_targets_det: Vec<f64> = grids.det_nm.iter().map(|&nm| 1.0e7 / nm).collect();

    let planes: Vec<Array2<f64>> = t2s
        .par_iter()
        .map(|&t2| {
            let mut plane = Array2::from_elem((m1, m3), Complex64::new(0.0, 0.0));
            let g2 = g_at(t2);
            for i1 in 0..n1 {
                let t1 = i1 as f64 * grids.t1_step_fs;
                let g1 = g_at(t1);
                let g12 = g_at(t1 + t2);
                for i3 in 0..n3 {
                    let t3 = i3 as f64 * grids.t3_step_fs;
                    let (f_se, f_gsb) = pathway_factors(
                        g1,
                        g2,
                        g_at(t3),
                        g12,
                        g_at(t2 + t3),
                        g_at(t1 + t2 + t3),
                    );
                    plane[[i1, i3]] = f_se + f_gsb;
                }
            }
            // t1 -> excitation axis with e^{-i w t1}; t3 -> detection axis
            // with e^{+i w t3}
            let mut planner = FftPlanner::new();
            let fwd = planner.plan_fft_forward(m1);
            let inv = planner.plan_fft_inverse(m3);
            let mut col = vec![Complex64::new(0.0, 0.0); m1];
            for i3 in 0..m3 {
                for (i1, c) in col.iter_mut().enumerate() {
                    *c = plane[[i1, i3]];
                }
                fwd.process(&mut col);
                for (i1, c) in col.iter().enumerate() {
                    plane[[i1, i3]] = *c;
                }
            }
            let mut row = vec![Complex64::new(0.0, 0.0); m3];
            for i1 in 0..m1 {
                for (i3, c) in row.iter_mut().enumerate() {
                    *c = plane[[i1, i3]];
                }
                inv.process(&mut row);
                for (i3, c) in row.iter().enumerate() {
                    plane[[i1, i3]] = *c;
                }
            }

            // real rephasing spectrum on ascending offset axes
            let mut real_plane = Array2::zeros((m1, m3));
            for (a, &(k1, _)) in offsets_1.iter().enumerate() {
                for (b, &(k3, _)) in offsets_3.iter().enumerate() {
                    real_plane[[a, b]] = plane[[k1, k3]].re;
                }
            }

            // bilinear resample onto the wavelength grids
            let off_1: Vec<f64> = offsets_1.iter().map(|&(_, nu)| nu).collect();
            let off_3: Vec<f64> = offsets_3.iter().map(|&(_, nu)| nu).collect();
            let mut out = Array2::zeros((nu_targets_exc.len(), nu_targets_det.len()));
            for (a, &nu1) in nu_targets_exc.iter().enumerate() {
                let x1 = grid_position(&off_1, nu1 - model.omega_eg_cm);
                for (b, &nu3) in nu_targets_det.iter().enumerate() {
                    let x3 = grid_position(&off_3, nu3 - model.omega_eg_cm);
                    out[[a, b]] = bilinear(&real_plane, x1, x3);
                }
            }
            out
        })
        .collect();

    let ne = grids.exc_nm.len();
    let nd = grids.det_nm.len();
    let mut values = Array3::zeros((t2s.len(), ne, nd));
    for (ti, plane) in planes.into_iter().enumerate() {
        for a in 0..ne {
            for b in 0..nd {
                values[[ti, a, b]] = plane[[a, b]];
            }
        }
    }
    let cube = SpectralCube::new(
        values,
        t2s,
        grids.exc_nm.clone(),
        grids.det_nm.clone(),
        "simulated rephasing cube",
    )?;
    Ok(Simulation { cube, warnings })
}

/// FFT bin order sorted by signed frequency offset in cm⁻¹:
/// (bin index, offset).
fn shifted_offsets(m: usize, dt_fs: f64) -> Vec<(usize, f64)> {
    let mut out: Vec<(usize, f64)> = (0..m)
        .map(|k| {
            let cycles = if k <= (m - 1) / 2 {
                k as f64 / (m as f64 * dt_fs)
            } else {
                (k as f64 - m as f64) / (m as f64 * dt_fs)
            };
            (k, cycles / C)
        })
        .collect();
    out.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    out
}

/// Fractional index of `x` on an ascending grid, clamped to the ends.
fn grid_position(grid: &[f64], x: f64) -> f64 {
    let n = grid.len();
    if x <= grid[0] {
        return 0.0;
    }
    if x >= grid[n - 1] {
        return (n - 1) as f64;
    }
    let mut lo = 0usize;
    let mut hi = n - 1;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if grid[mid] <= x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo as f64 + (x - grid[lo]) / (grid[hi] - grid[lo])
}

fn bilinear(plane: &Array2<f64>, x1: f64, x3: f64) -> f64 {
    let (n1, n3) = plane.dim();
    let i1 = (x1.floor() as usize).min(n1 - 2);
    let i3 = (x3.floor() as usize).min(n3 - 2);
    let f1 = (x1 - i1 as f64).clamp(0.0, 1.0);
    let f3 = (x3 - i3 as f64).clamp(0.0, 1.0);
    plane[[i1, i3]] * (1.0 - f1) * (1.0 - f3)
        + plane[[i1 + 1, i3]] * f1 * (1.0 - f3)
        + plane[[i1, i3 + 1]] * (1.0 - f1) * f3
        + plane[[i1 + 1, i3 + 1]] * f1 * f3
}

/// Parse a `key=value` simulation config. Unknown keys are rejected;
/// omitted keys keep the reference-model defaults.
pub fn parse_config(text: &str) -> Result<(LineShapeModel, SimulationGrids), LineShapeError> {
    let mut model = LineShapeModel::reference_model();
    let mut grids = SimulationGrids::default();
    let mut exc = (650.0, 700.0, 1.0);
    let mut det = (650.0, 700.0, 1.0);
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| LineShapeError::BadConfig(format!("bad line: {line}")))?;
        let fval = || -> Result<f64, LineShapeError> {
            value
                .trim()
                .parse()
                .map_err(|_| LineShapeError::BadConfig(format!("bad number for {key}: {value}")))
        };
        match key.trim() {
            "omega_eg_cm" => model.omega_eg_cm = fval()?,
            "lambda_cm" => model.bath.lambda_cm = fval()?,
            "Lambda_inv_fs" => model.bath.gamma_inv_fs = fval()?,
            "temperature_K" => model.temperature_k = fval()?,
            "modes" => {
                let mut modes = Vec::new();
                for item in value.split(',') {
                    let (w, s) = item.trim().split_once(':').ok_or_else(|| {
                        LineShapeError::BadConfig(format!("bad mode entry: {item}"))
                    })?;
                    let omega_cm = w.trim().parse().map_err(|_| {
                        LineShapeError::BadConfig(format!("bad mode frequency: {w}"))
                    })?;
                    let huang_rhys = s.trim().parse().map_err(|_| {
                        LineShapeError::BadConfig(format!("bad Huang-Rhys factor: {s}"))
                    })?;
                    modes.push(VibrationalMode {
                        omega_cm,
                        huang_rhys,
                    });
                }
                model.modes = modes;
            }
            "t1_step_fs" => grids.t1_step_fs = fval()?,
            "t1_max_fs" => grids.t1_max_fs = fval()?,
            "t2_min_fs" => grids.t2_min_fs = fval()?,
            "t2_max_fs" => grids.t2_max_fs = fval()?,
            "t2_step_fs" => grids.t2_step_fs = fval()?,
            "t3_step_fs" => grids.t3_step_fs = fval()?,
            "t3_max_fs" => grids.t3_max_fs = fval()?,
            "pad_t1" => grids.pad_t1 = fval()? as usize,
            "pad_t3" => grids.pad_t3 = fval()? as usize,
            "exc_min_nm" => exc.0 = fval()?,
            "exc_max_nm" => exc.1 = fval()?,
            "exc_step_nm" => exc.2 = fval()?,
            "det_min_nm" => det.0 = fval()?,
            "det_max_nm" => det.1 = fval()?,
            "det_step_nm" => det.2 = fval()?,
            other => {
                return Err(LineShapeError::BadConfig(format!("unknown key: {other}")));
            }
        }
    }
    grids.exc_nm = wavelength_grid(exc)?;
    grids.det_nm = wavelength_grid(det)?;
    model.validate()?;
    grids.validate()?;
    Ok((model, grids))
}

fn wavelength_grid((min, max, step): (f64, f64, f64)) -> Result<Vec<f64>, LineShapeError> {
    if !(step > 0.0) || max < min {
        return Err(LineShapeError::BadConfig("bad wavelength grid spec".into()));
    }
    let n = ((max - min) / step).round() as usize + 1;
    Ok((0..n).map(|i| min + i as f64 * step).collect())
}
