//! Quantitative diagnostics for wavelet-trace envelopes: beat periods,
//! candidate interfering frequency pairs, peak matching, exponential decay
//! fits and fold-decay ratios.

use thiserror::Error;

use crate::spectra::TimeTrace;
use crate::units::spacing_for_period_fs;

#[derive(Debug, Error)]
pub enum DiagnosticsError {
    #[error("inputs must be positive")]
    NonPositiveInput,
    #[error("degenerate fit: no resolvable decay amplitude")]
    DegenerateFit,
    #[error("denominator below 1e-12 of the trace maximum")]
    DivisionByNegligible,
    #[error("trace too short: {0} samples")]
    TooShort(usize),
    #[error("time {0} fs outside the trace")]
    OutsideTrace(f64),
}

/// Times (fs) of strict local maxima of an envelope trace, refined by
/// 3-point parabolic interpolation. Endpoints are excluded.
pub fn envelope_maxima(trace: &TimeTrace) -> Vec<f64> {
    let y = trace.values();
    let t = trace.t_fs();
    let dt = trace.dt_fs();
    let mut out = Vec::new();
    for i in 1..y.len().saturating_sub(1) {
        if y[i] > y[i - 1] && y[i] > y[i + 1] {
            let den = y[i - 1] - 2.0 * y[i] + y[i + 1];
            let delta = if den.abs() > 1e-300 {
                0.5 * (y[i - 1] - y[i + 1]) / den
            } else {
                0.0
            };
            out.push(t[i] + delta * dt);
        }
    }
    out
}

/// Mean spacing of consecutive envelope maxima; `None` with fewer than two
/// maxima.
pub fn beat_period(trace: &TimeTrace) -> Option<f64> {
    let maxima = envelope_maxima(trace);
    if maxima.len() < 2 {
        return None;
    }
    let span = maxima.last().unwrap() - maxima[0];
    Some(span / (maxima.len() - 1) as f64)
}

/// The frequency pair that would beat against ν₀ with the observed period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferingPair {
    pub lower_cm: f64,
    pub upper_cm: f64,
    pub spacing_cm: f64,
}

impl InterferingPair {
    /// The lower candidate can fall at or below zero for long periods; such
    /// a candidate is not a physical frequency.
    pub fn lower_is_physical(&self) -> bool {
        self.lower_cm > 0.0
    }
}

/// Candidates (ν₀ − Δν, ν₀ + Δν) with Δν = 1/(c · period).
pub fn interfering_frequencies(
    nu0_cm: f64,
    period_fs: f64,
) -> Result<InterferingPair, DiagnosticsError> {
    if !(nu0_cm > 0.0) || !(period_fs > 0.0) {
        return Err(DiagnosticsError::NonPositiveInput);
    }
    let spacing = spacing_for_period_fs(period_fs);
    Ok(InterferingPair {
        lower_cm: nu0_cm - spacing,
        upper_cm: nu0_cm + spacing,
        spacing_cm: spacing,
    })
}

/// A candidate matched to a detected peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateMatch {
    pub candidate_cm: f64,
    pub detected_cm: f64,
    pub difference_cm: f64,
}

/// One-to-one greedy matching of candidates to detected peaks by ascending
/// |difference|, keeping pairs within the tolerance.
pub fn match_candidates(
    candidates: &[f64],
    detected: &[f64],
    tol_cm: f64,
) -> Vec<CandidateMatch> {
    let mut pairs = Vec::new();
    for (ci, &c) in candidates.iter().enumerate() {
        for (di, &d) in detected.iter().enumerate() {
            let diff = (c - d).abs();
            if diff <= tol_cm {
                pairs.push((diff, ci, di));
            }
        }
    }
    pairs.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap()
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    let mut used_c = vec![false; candidates.len()];
    let mut used_d = vec![false; detected.len()];
    let mut out = Vec::new();
    for (diff, ci, di) in pairs {
        if used_c[ci] || used_d[di] {
            continue;
        }
        used_c[ci] = true;
        used_d[di] = true;
        out.push(CandidateMatch {
            candidate_cm: candidates[ci],
            detected_cm: detected[di],
            difference_cm: diff,
        });
    }
    out.sort_by(|a, b| a.candidate_cm.partial_cmp(&b.candidate_cm).unwrap());
    out
}

/// Default matching tolerance in cm⁻¹.
pub const DEFAULT_MATCH_TOLERANCE_CM: f64 = 30.0;

/// Beat diagnosis of one envelope trace around a probed wavenumber.
#[derive(Debug, Clone)]
pub struct BeatReport {
    pub nu0_cm: f64,
    pub period_fs: Option<f64>,
    pub candidates: Option<InterferingPair>,
    pub matches: Vec<CandidateMatch>,
}

impl BeatReport {
    /// Measure the beat period of an envelope trace and match the implied
    /// interfering candidates against detected spectral peaks.
    pub fn from_envelope(
        trace: &TimeTrace,
        nu0_cm: f64,
        detected_cm: &[f64],
        tol_cm: f64,
    ) -> Result<Self, DiagnosticsError> {
        if !(nu0_cm > 0.0) {
            return Err(DiagnosticsError::NonPositiveInput);
        }
        let period = beat_period(trace);
        let candidates = match period {
            Some(p) => Some(interfering_frequencies(nu0_cm, p)?),
            None => None,
        };
        let matches = match &candidates {
            Some(pair) => {
                let cands: Vec<f64> = if pair.lower_is_physical() {
                    vec![pair.lower_cm, pair.upper_cm]
                } else {
                    vec![pair.upper_cm]
                };
                match_candidates(&cands, detected_cm, tol_cm)
            }
            None => Vec::new(),
        };
        Ok(Self {
            nu0_cm,
            period_fs: period,
            candidates,
            matches,
        })
    }
}

/// Fitted exponential decay A·e^(−t/τ) + c₀.
#[derive(Debug, Clone, Copy)]
pub struct DecayFit {
    pub amplitude: f64,
    pub tau_fs: f64,
    pub offset: f64,
    pub rms_residual: f64,
    /// Time for the fitted envelope to fall to 1/e of its initial excess
    /// over the offset; equals τ for this model class.
    pub tau_1e_fs: f64,
}

/// Least-squares fit of A·e^(−t/τ) + c₀: a logarithmic coarse grid over τ
/// with a linear solve for (A, c₀) at each candidate, then golden-section
/// refinement of τ.
pub fn fit_exp_decay(trace: &TimeTrace) -> Result<DecayFit, DiagnosticsError> {
    let n = trace.len();
    if n < 6 {
        return Err(DiagnosticsError::TooShort(n));
    }
    let t = trace.t_fs();
    let y = trace.values();
    let dt = trace.dt_fs();
    let span = t[n - 1] - t[0];
    let scale = y.iter().cloned().fold(0.0f64, |a, b| a.max(b.abs()));

    let lo = dt.max(1e-6);
    let hi = 20.0 * span;
    let n_grid = 50;
    let mut best = (f64::INFINITY, lo);
    for k in 0..n_grid {
        let tau = lo * (hi / lo).powf(k as f64 / (n_grid - 1) as f64);
        let sse = sse_for_tau(t, y, tau).0;
        if sse < best.0 {
            best = (sse, tau);
        }
    }
    // golden-section refine between the grid neighbors of the best tau
    let ratio = (hi / lo).powf(1.0 / (n_grid - 1) as f64);
    let mut a = best.1 / ratio;
    let mut b = best.1 * ratio;
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let mut fc = sse_for_tau(t, y, c).0;
    let mut fd = sse_for_tau(t, y, d).0;
    for _ in 0..200 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = sse_for_tau(t, y, c).0;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = sse_for_tau(t, y, d).0;
        }
        if (b - a) < 1e-9 * b {
            break;
        }
    }
    let tau = 0.5 * (a + b);
    let (sse, amp, offset) = sse_for_tau(t, y, tau);
    if amp.abs() < 1e-12 * scale.max(1e-300) {
        return Err(DiagnosticsError::DegenerateFit);
    }
    Ok(DecayFit {
        amplitude: amp,
        tau_fs: tau,
        offset,
        rms_residual: (sse / n as f64).sqrt(),
        tau_1e_fs: tau,
    })
}

/// SSE and the best (A, c₀) for a fixed τ via the 2×2 normal equations.
fn sse_for_tau(t: &[f64], y: &[f64], tau: f64) -> (f64, f64, f64) {
    let n = t.len() as f64;
    let mut see = 0.0; // sum e_i^2
    let mut se = 0.0; // sum e_i
    let mut sey = 0.0; // sum e_i y_i
    let mut sy = 0.0; // sum y_i
    for (&ti, &yi) in t.iter().zip(y) {
        let e = (-ti / tau).exp();
        see += e * e;
        se += e;
        sey += e * yi;
        sy += yi;
    }
    let det = see * n - se * se;
    let (amp, offset) = if det.abs() > 1e-14 * see.max(n) {
        ((sey * n - se * sy) / det, (see * sy - se * sey) / det)
    } else {
        // exponential indistinguishable from a constant on this grid
        (0.0, sy / n)
    };
    let mut sse = 0.0;
    for (&ti, &yi) in t.iter().zip(y) {
        let r = yi - amp * (-ti / tau).exp() - offset;
        sse += r * r;
    }
    (sse, amp, offset)
}

/// Linear-interpolated trace(t_a) / trace(t_b).
pub fn fold_decay(trace: &TimeTrace, t_a: f64, t_b: f64) -> Result<f64, DiagnosticsError> {
    let num = interp(trace, t_a)?;
    let den = interp(trace, t_b)?;
    let scale = trace.values().iter().cloned().fold(0.0f64, |a, b| a.max(b.abs()));
    if den.abs() < 1e-12 * scale.max(1e-300) {
        return Err(DiagnosticsError::DivisionByNegligible);
    }
    Ok(num / den)
}

fn interp(trace: &TimeTrace, at: f64) -> Result<f64, DiagnosticsError> {
    let t = trace.t_fs();
    let y = trace.values();
    if at < t[0] || at > t[t.len() - 1] {
        return Err(DiagnosticsError::OutsideTrace(at));
    }
    let dt = trace.dt_fs();
    if dt == 0.0 {
        return Ok(y[0]);
    }
    let x = (at - t[0]) / dt;
    let i = (x.floor() as usize).min(t.len() - 2);
    let frac = x - i as f64;
    Ok(y[i] * (1.0 - frac) + y[i + 1] * frac)
}
