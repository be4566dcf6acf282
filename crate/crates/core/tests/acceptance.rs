//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured numbers once its assertions hold.

use ndarray::Array3;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use twodes::diagnostics::{beat_period, envelope_maxima, fit_exp_decay, interfering_frequencies, match_candidates};
use twodes::fourier::{bandpass_filter, detrend_cube, frequency_map, GaussianWindow};
use twodes::lineshape::{
    g_total, linear_absorption, linear_emission, pathway_factors, rephasing_response,
    simulate_cube, BrownianBath, LineShapeModel, SimulationGrids, VibrationalMode,
};
use twodes::spectra::{PixelCoord, SpectralCube, TimeTrace};
use twodes::units::{
    period_fs_for_spacing, wavenumber_to_cycles_per_fs, BOLTZMANN_CM_PER_K,
    SPEED_OF_LIGHT_CM_PER_FS as C,
};
use twodes::wavelet::{cone_of_influence, cwt, scales_for_frequencies, MorletParams};

fn grid(t0: f64, dt: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| t0 + i as f64 * dt).collect()
}

fn cosine(t: &[f64], nu_cm: f64, t0: f64) -> Vec<f64> {
    let f = wavenumber_to_cycles_per_fs(nu_cm);
    t.iter().map(|&tv| (2.0 * PI * f * (tv - t0)).cos()).collect()
}

#[test]
fn criterion_1_scale_relation() {
    let p = MorletParams::default();
    let set = scales_for_frequencies(&[120.0, 340.0], 20.0, &p).unwrap();
    let expect = [13.898, 4.9054];
    for (s, e) in set.scales.iter().zip(expect) {
        assert!(
            (s - e).abs() / e <= 1e-3,
            "scale {s} differs from {e} beyond 1e-3"
        );
    }
    println!(
        "ACCEPTANCE 1 PASS: scales for (120, 340) cm^-1 at 20 fs = ({:.4}, {:.5})",
        set.scales[0], set.scales[1]
    );
}

#[test]
fn criterion_2_cwt_oracle_equivalence() {
    let p = MorletParams::default();
    let t = grid(80.0, 20.0, 47);
    let nus: Vec<f64> = (0..21).map(|k| 100.0 + 25.0 * k as f64).collect();
    let set = scales_for_frequencies(&nus, 20.0, &p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(20140827);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let y: Vec<f64> = (0..47).map(|_| 2.0 * rng.gen::<f64>() - 1.0).collect();
        let trace = TimeTrace::new(t.clone(), y.clone()).unwrap();
        let sc = cwt(&trace, &set, &p).unwrap();
        // direct evaluation of the transform definition over the record
        let mut oracle_max = 0.0f64;
        let mut oracle = vec![vec![Complex64::new(0.0, 0.0); 47]; set.scales.len()];
        for (si, &s) in set.scales.iter().enumerate() {
            let norm = (PI * p.f_b).powf(-0.5) / s.sqrt();
            for (u, slot) in oracle[si].iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (n, &v) in y.iter().enumerate() {
                    let tt = (n as f64 - u as f64) / s;
                    let atom = Complex64::new(0.0, -2.0 * PI * p.f_c * tt).exp()
                        * (-tt * tt / p.f_b).exp()
                        * norm;
                    acc += v * atom.conj();
                }
                *slot = acc;
                oracle_max = oracle_max.max(acc.norm());
            }
        }
        for (si, row) in oracle.iter().enumerate() {
            for (u, expect) in row.iter().enumerate() {
                let d = (sc.coeffs[[si, u]] - expect).norm() / oracle_max;
                worst = worst.max(d);
            }
        }
    }
    assert!(worst <= 1e-10, "worst relative deviation {worst:e}");
    println!("ACCEPTANCE 2 PASS: 50 random traces, worst |cwt - direct sum| = {worst:.2e} of scale");
}

#[test]
fn criterion_3_tone_localization() {
    let p = MorletParams::default();
    let t = grid(80.0, 20.0, 47);
    let trace = TimeTrace::new(t, cosine(&grid(80.0, 20.0, 47), 340.0, 0.0)).unwrap();

    let set = scales_for_frequencies(&[340.0], 20.0, &p).unwrap();
    let sc = cwt(&trace, &set, &p).unwrap();
    let margin = cone_of_influence(set.scales[0], &p, 47);
    let mags = sc.magnitude_row(0);
    let inside = &mags[margin..47 - margin];
    let max = inside.iter().cloned().fold(f64::MIN, f64::max);
    let min = inside.iter().cloned().fold(f64::MAX, f64::min);
    let flatness = (max - min) / max;
    assert!(flatness < 0.10, "flatness {flatness}");

    let nus: Vec<f64> = (0..50).map(|k| 150.0 + 10.0 * k as f64).collect();
    let set50 = scales_for_frequencies(&nus, 20.0, &p).unwrap();
    let sc50 = cwt(&trace, &set50, &p).unwrap();
    let mut best = (0usize, f64::MIN);
    for (si, &s) in set50.scales.iter().enumerate() {
        let m = cone_of_influence(s, &p, 47);
        if 2 * m >= 47 {
            continue;
        }
        let mags = sc50.magnitude_row(si);
        let mean: f64 = mags[m..47 - m].iter().sum::<f64>() / (47 - 2 * m) as f64;
        if mean > best.1 {
            best = (si, mean);
        }
    }
    assert!(
        (nus[best.0] - 340.0).abs() <= 10.0,
        "argmax scale at {} cm^-1",
        nus[best.0]
    );
    println!(
        "ACCEPTANCE 3 PASS: COI-interior flatness {:.1}%, 50-scale argmax at {} cm^-1",
        flatness * 100.0,
        nus[best.0]
    );
}

#[test]
fn criterion_4_interference_arithmetic() {
    let pair = interfering_frequencies(340.0, 500.0).unwrap();
    assert!((pair.lower_cm - 273.3).abs() <= 0.5, "lower {}", pair.lower_cm);
    assert!((pair.upper_cm - 406.7).abs() <= 0.5, "upper {}", pair.upper_cm);

    let detected = [120.0, 190.0, 265.0, 340.0, 440.0];
    let matches = match_candidates(&[270.0, 410.0], &detected, 30.0);
    assert_eq!(matches.len(), 2, "matches {matches:?}");
    assert_eq!(matches[0].candidate_cm, 270.0);
    assert_eq!(matches[0].detected_cm, 265.0);
    assert_eq!(matches[1].candidate_cm, 410.0);
    assert_eq!(matches[1].detected_cm, 440.0);
    println!(
        "ACCEPTANCE 4 PASS: candidates ({:.1}, {:.1}) cm^-1; 270->265, 410->440 matched at tol 30",
        pair.lower_cm, pair.upper_cm
    );
}

#[test]
fn criterion_5_beat_envelope_law() {
    let p = MorletParams::default();
    let t = grid(0.0, 20.0, 101); // 0..2000 fs
    let mut measured = Vec::new();
    for spacing in [50.0, 70.0, 100.0] {
        let period = period_fs_for_spacing(spacing);
        // first envelope maximum at half a period keeps every beat maximum
        // away from the record edges
        let t0 = period / 2.0;
        let y: Vec<f64> = t
            .iter()
            .enumerate()
            .map(|(i, _)| {
                cosine(&t, 340.0 - spacing / 2.0, t0)[i] + cosine(&t, 340.0 + spacing / 2.0, t0)[i]
            })
            .collect();
        let trace = TimeTrace::new(t.clone(), y).unwrap();
        let set = scales_for_frequencies(&[340.0], 20.0, &p).unwrap();
        let sc = cwt(&trace, &set, &p).unwrap();
        let envelope = TimeTrace::new(t.clone(), sc.magnitude_row(0)).unwrap();
        let est = beat_period(&envelope).expect("beat maxima present");
        let err = (est - period).abs() / period;
        assert!(
            err < 0.05,
            "spacing {spacing}: measured {est:.1} fs vs {period:.1} fs ({:.1}%)",
            err * 100.0
        );
        measured.push(est);
    }
    println!(
        "ACCEPTANCE 5 PASS: envelope periods ({:.0}, {:.0}, {:.0}) fs for 50/70/100 cm^-1",
        measured[0], measured[1], measured[2]
    );
}

#[test]
fn criterion_6_windowed_ft_monotonicity() {
    let t = grid(80.0, 20.0, 47);
    let y: Vec<f64> = t
        .iter()
        .enumerate()
        .map(|(i, _)| {
            cosine(&t, 265.0, 0.0)[i] + cosine(&t, 340.0, 0.0)[i] + cosine(&t, 440.0, 0.0)[i]
        })
        .collect();
    let trace = TimeTrace::new(t, y).unwrap();
    let mut depths = Vec::new();
    for fwhm in [20.0, 40.0, 80.0] {
        let w = GaussianWindow::new(340.0, fwhm).unwrap();
        let env = bandpass_filter(&trace, &w).unwrap().envelope();
        let k = (0.1 * env.len() as f64) as usize;
        let e = &env.values()[k..env.len() - k];
        let max = e.iter().cloned().fold(f64::MIN, f64::max);
        let min = e.iter().cloned().fold(f64::MAX, f64::min);
        depths.push((max - min) / (max + min));
    }
    assert!(
        depths[0] < depths[1] && depths[1] < depths[2],
        "depths {depths:?} not strictly increasing"
    );
    println!(
        "ACCEPTANCE 6 PASS: modulation depth {:.3} < {:.3} < {:.3} across FWHM 20/40/80 cm^-1",
        depths[0], depths[1], depths[2]
    );
}

#[test]
fn criterion_7_reference_simulation_pipeline() {
    let model = LineShapeModel::reference_model();
    let grids = SimulationGrids::default();
    let sim = simulate_cube(&model, &grids).unwrap();
    for w in &sim.warnings {
        eprintln!("simulation warning: {w}");
    }
    let cube = sim.cube.crop_population(80.0, 1000.0).unwrap();
    let cube = detrend_cube(&cube, 3).unwrap();

    // (a) at least five resolvable maxima in the 340 cm^-1 map
    let map = frequency_map(&cube, 340.0, 4).unwrap();
    let maxima = map.local_maxima(0.15);
    assert!(maxima.len() >= 5, "{} maxima", maxima.len());

    // cross peaks carry the clean 340 cm^-1 dynamics; diagonal features mix
    // every mode
    let cross: Vec<(usize, usize)> = maxima
        .iter()
        .filter(|&&(e, d, _)| (map.exc_axis[e] - map.det_axis[d]).abs() >= 4.0)
        .take(4)
        .map(|&(e, d, _)| (e, d))
        .collect();
    assert!(cross.len() >= 3, "cross peaks {cross:?}");

    let p = MorletParams::default();
    let nus: Vec<f64> = (0..46).map(|k| 150.0 + 10.0 * k as f64).collect();
    let set = scales_for_frequencies(&nus, 20.0, &p).unwrap();
    let s340 = scales_for_frequencies(&[340.0], 20.0, &p).unwrap();
    let margin340 = cone_of_influence(s340.scales[0], &p, cube.t_axis().len());

    let mut ridge_medians = Vec::new();
    let mut spacings_pool = Vec::new();
    let mut decay_ratios = Vec::new();
    for &(ei, di) in &cross {
        let pix = PixelCoord::new(map.exc_axis[ei], map.det_axis[di]);
        let trace = cube.extract_trace(pix).unwrap();
        let sc = cwt(&trace, &set, &p).unwrap();
        let n = trace.len();

        // (b) ridge: per translation, the pseudofrequency of the strongest
        // unmasked coefficient, parabolically refined
        let mut ridge = Vec::new();
        for u in 0..n {
            let valid: Vec<usize> = (0..nus.len())
                .filter(|&si| !sc.coi_mask[[si, u]])
                .collect();
            if valid.is_empty() {
                continue;
            }
            let &si = valid
                .iter()
                .max_by(|&&a, &&b| {
                    sc.coeffs[[a, u]]
                        .norm()
                        .partial_cmp(&sc.coeffs[[b, u]].norm())
                        .unwrap()
                })
                .unwrap();
            let mut nu = nus[si];
            if si > 0 && si + 1 < nus.len() && valid.contains(&(si - 1)) && valid.contains(&(si + 1))
            {
                let l = sc.coeffs[[si - 1, u]].norm();
                let c = sc.coeffs[[si, u]].norm();
                let r = sc.coeffs[[si + 1, u]].norm();
                let den = l - 2.0 * c + r;
                if den.abs() > 1e-300 {
                    nu += 0.5 * (l - r) / den * 10.0;
                }
            }
            ridge.push(nu);
        }
        ridge_medians.push(median(&mut ridge));

        // amplitude modulation of the 340 cm^-1 wavelet trace
        let sc340 = cwt(&trace, &s340, &p).unwrap();
        let wt = TimeTrace::new(trace.t_fs().to_vec(), sc340.magnitude_row(0)).unwrap();
        let maxima_t = envelope_maxima(&wt);
        for w in maxima_t.windows(2) {
            spacings_pool.push(w[1] - w[0]);
        }

        // (c) no net 1/e decay across the COI interior
        let interior = &wt.values()[margin340..n - margin340];
        let third = interior.len() / 3;
        let first: f64 = interior[..third].iter().sum::<f64>() / third as f64;
        let last: f64 = interior[interior.len() - third..].iter().sum::<f64>() / third as f64;
        decay_ratios.push(last / first);
    }

    let ridge = median(&mut ridge_medians);
    assert!(
        (ridge - 340.0).abs() <= 15.0,
        "ridge median {ridge} cm^-1 (per-peak {ridge_medians:?})"
    );
    let period = median(&mut spacings_pool);
    assert!(
        (330.0..=520.0).contains(&period),
        "modulation period {period} fs (pool {spacings_pool:?})"
    );
    for (k, &r) in decay_ratios.iter().enumerate() {
        assert!(
            r >= (-1.0f64).exp(),
            "cross peak {k} decayed {r:.2}-fold below 1/e"
        );
    }
    println!(
        "ACCEPTANCE 7 PASS: {} map maxima; ridge median {:.0} cm^-1; modulation period {:.0} fs; \
         late/early amplitude ratios {:?}",
        maxima.len(),
        ridge,
        period,
        decay_ratios.iter().map(|r| (r * 100.0).round() / 100.0).collect::<Vec<_>>()
    );
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

#[test]
fn criterion_8_line_shape_anchors() {
    // Franck-Condon sideband/origin ratio for a single S = 0.1 mode
    let single = LineShapeModel {
        omega_eg_cm: 1.0e7 / 680.0,
        modes: vec![VibrationalMode {
            omega_cm: 340.0,
            huang_rhys: 0.1,
        }],
        bath: BrownianBath {
            lambda_cm: 1.0,
            gamma_inv_fs: 0.01,
        },
        temperature_k: 80.0,
    };
    let nu: Vec<f64> = (0..651)
        .map(|i| single.omega_eg_cm - 500.0 + i as f64 * 2.0)
        .collect();
    let spec = linear_absorption(&single, &nu).unwrap();
    let mut peaks: Vec<(f64, f64)> = Vec::new();
    for i in 1..nu.len() - 1 {
        if spec.amp[i] > spec.amp[i - 1] && spec.amp[i] > spec.amp[i + 1] && spec.amp[i] > 0.01 {
            peaks.push((spec.nu_cm[i], spec.amp[i]));
        }
    }
    peaks.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    let ratio = peaks[1].1 / peaks[0].1;
    assert!((ratio - 0.10).abs() <= 0.02, "sideband ratio {ratio}");

    // Stokes shift for the bath-only model
    let bath_only = LineShapeModel {
        omega_eg_cm: 1.0e7 / 680.0,
        modes: vec![],
        bath: BrownianBath {
            lambda_cm: 50.0,
            gamma_inv_fs: 0.01,
        },
        temperature_k: 80.0,
    };
    let nu: Vec<f64> = (0..801)
        .map(|i| bath_only.omega_eg_cm - 800.0 + i as f64 * 2.0)
        .collect();
    let abs = linear_absorption(&bath_only, &nu).unwrap();
    let emi = linear_emission(&bath_only, &nu).unwrap();
    let moment = |s: &twodes::fourier::AmplitudeSpectrum| {
        s.nu_cm.iter().zip(&s.amp).map(|(n, a)| n * a).sum::<f64>() / s.amp.iter().sum::<f64>()
    };
    let stokes = moment(&abs) - moment(&emi);
    assert!((stokes - 100.0).abs() <= 10.0, "stokes {stokes}");

    // exact pathway cancellation at t1 = t3 = 0
    let model = LineShapeModel::reference_model();
    for t2 in [0.0, 120.0, 555.0, 1000.0] {
        let r = rephasing_response(0.0, t2, 0.0, &model);
        assert!((r.re - 2.0).abs() <= 1e-12 && r.im.abs() <= 1e-12, "R {r}");
    }

    // classical-limit factors against a brute-force quadrature of the
    // correlation function
    let worst = classical_limit_worst_error(&model);
    assert!(worst <= 1e-6, "classical-limit deviation {worst:e}");

    println!(
        "ACCEPTANCE 8 PASS: FC ratio {ratio:.3}; Stokes {stokes:.1} cm^-1; pathway cancellation \
         at 1e-12; classical-limit oracle deviation {worst:.1e}"
    );
}

/// Classical (real) energy-gap correlation function of the model in
/// rad²/fs², written independently of the line-shape functions.
fn corr_classical(t: f64, model: &LineShapeModel) -> f64 {
    let kbt_cm = BOLTZMANN_CM_PER_K * model.temperature_k;
    let mut c = 0.0;
    for m in &model.modes {
        let w = 2.0 * PI * C * m.omega_cm;
        let coth = 1.0 / (m.omega_cm / (2.0 * kbt_cm)).tanh();
        c += m.huang_rhys * w * w * coth * (w * t).cos();
    }
    let lambda = 2.0 * PI * C * model.bath.lambda_cm;
    let theta = 2.0 * PI * C * kbt_cm;
    c += 2.0 * lambda * theta * (-model.bath.gamma_inv_fs * t).exp();
    c
}

fn classical_limit_worst_error(model: &LineShapeModel) -> f64 {
    let h = 0.01f64;
    let t_max = 200.0 + 300.0 + 200.0;
    let n = (t_max / h).ceil() as usize + 1;
    // cumulative first integral of the correlation function (trapezoid)
    let c_tab: Vec<f64> = (0..n).map(|k| corr_classical(k as f64 * h, model)).collect();
    let mut g1 = vec![0.0f64; n];
    for k in 1..n {
        g1[k] = g1[k - 1] + 0.5 * (c_tab[k - 1] + c_tab[k]) * h;
    }
    // cumulative second integral: g_num(t) = int_0^t g1
    let mut g2 = vec![0.0f64; n];
    for k in 1..n {
        g2[k] = g2[k - 1] + 0.5 * (g1[k - 1] + g1[k]) * h;
    }
    let idx = |t: f64| (t / h).round() as usize;

    let mut worst = 0.0f64;
    for t1 in [40.0, 120.0, 200.0] {
        for t2 in [0.0, 100.0, 300.0] {
            for t3 in [40.0, 120.0, 200.0] {
                // cross-window double integral via the cumulative table
                let n1 = idx(t1);
                let mut d = 0.0;
                for k in 0..=n1 {
                    let tau = k as f64 * h;
                    let inner = g1[idx(t1 + t2 + t3 - tau)] - g1[idx(t1 + t2 - tau)];
                    let w = if k == 0 || k == n1 { 0.5 } else { 1.0 };
                    d += w * inner * h;
                }
                let f_oracle = (-g2[idx(t1)] - g2[idx(t3)] + d).exp();

                let gr = |t: f64| Complex64::new(g_total(t, model).re, 0.0);
                let (f_se, f_gsb) = pathway_factors(
                    gr(t1),
                    gr(t2),
                    gr(t3),
                    gr(t1 + t2),
                    gr(t2 + t3),
                    gr(t1 + t2 + t3),
                );
                for f in [f_se, f_gsb] {
                    worst = worst.max((f.re - f_oracle).abs() / f_oracle);
                    worst = worst.max(f.im.abs());
                }
            }
        }
    }
    worst
}

#[test]
fn criterion_9_decay_fit_fidelity() {
    let taus = [100.0f64, 200.0, 520.0, 660.0, 1000.0, 2000.0];
    let mut worst_clean = 0.0f64;
    let mut worst_noisy = 0.0f64;
    for tau in taus {
        // record sized to the decay under test
        let t_end = (4.0 * tau).max(1000.0);
        let n = (t_end / 20.0) as usize + 1;
        let t = grid(0.0, 20.0, n);
        let y0: Vec<f64> = t.iter().map(|&tv| 3.0 * (-tv / tau).exp()).collect();
        let clean = fit_exp_decay(&TimeTrace::new(t.clone(), y0.clone()).unwrap()).unwrap();
        let err = (clean.tau_fs - tau).abs() / tau;
        worst_clean = worst_clean.max(err);
        assert!(err <= 0.02, "tau {tau}: noiseless error {err}");

        for seed in 0..20u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
            let y: Vec<f64> = y0
                .iter()
                .map(|&v| v + 0.05 * 3.0 * (2.0 * rng.gen::<f64>() - 1.0))
                .collect();
            let fit = fit_exp_decay(&TimeTrace::new(t.clone(), y).unwrap()).unwrap();
            let err = (fit.tau_fs - tau).abs() / tau;
            worst_noisy = worst_noisy.max(err);
            assert!(err <= 0.10, "tau {tau} seed {seed}: noisy error {err}");
        }
    }

    // the 520 and 660 fs cases also on the 80..1000 fs measurement grid,
    // judged on the Monte-Carlo mean
    for tau in [520.0, 660.0] {
        let t = grid(80.0, 20.0, 47);
        let y0: Vec<f64> = t.iter().map(|&tv| 3.0 * (-tv / tau).exp()).collect();
        let mut mean = 0.0;
        for seed in 0..20u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(2000 + seed);
            let y: Vec<f64> = y0
                .iter()
                .map(|&v| v + 0.05 * 3.0 * (2.0 * rng.gen::<f64>() - 1.0))
                .collect();
            mean += fit_exp_decay(&TimeTrace::new(t.clone(), y).unwrap())
                .unwrap()
                .tau_fs;
        }
        mean /= 20.0;
        let err = (mean - tau).abs() / tau;
        assert!(err <= 0.10, "tau {tau} on the short grid: mean error {err}");
    }
    println!(
        "ACCEPTANCE 9 PASS: worst noiseless error {:.2}%, worst per-seed noisy error {:.1}% \
         across tau in [100, 2000] fs",
        worst_clean * 100.0,
        worst_noisy * 100.0
    );
}

/// Supporting check used while freezing criterion 7's constructions: the
/// detrended reference cube keeps the five beating components visible at a
/// cross peak.
#[test]
fn reference_cube_cross_peak_carries_mode_beats() {
    let model = LineShapeModel::reference_model();
    let mut grids = SimulationGrids::default();
    grids.exc_nm = (0..26).map(|i| 650.0 + 2.0 * i as f64).collect();
    grids.det_nm = grids.exc_nm.clone();
    let sim = simulate_cube(&model, &grids).unwrap();
    let cube = sim.cube.crop_population(80.0, 1000.0).unwrap();
    let cube = detrend_cube(&cube, 3).unwrap();
    let trace = cube
        .extract_trace(PixelCoord::new(674.0, 688.0))
        .unwrap();
    let spec = twodes::fourier::ft_spectrum(&trace, 8).unwrap();
    let peaks = twodes::fourier::spectral_peaks(&spec, 0.10);
    assert!(
        peaks.iter().any(|p| (p.0 - 340.0).abs() < 25.0),
        "peaks {peaks:?}"
    );
}

/// Guard for the synthetic cube used across the acceptance suite: a seeded
/// cosine pixel comes back through extract + detrend + cwt unharmed.
#[test]
fn synthetic_pixel_roundtrip_guard() {
    let t = grid(80.0, 20.0, 47);
    let y = cosine(&t, 340.0, 0.0);
    let mut values = Array3::zeros((47, 2, 2));
    for (ti, &v) in y.iter().enumerate() {
        values[[ti, 0, 1]] = v;
    }
    let cube = SpectralCube::new(values, t, vec![664.0, 666.0], vec![680.0, 682.0], "").unwrap();
    let tr = cube.extract_trace(PixelCoord::new(664.0, 682.0)).unwrap();
    for (a, b) in tr.values().iter().zip(&y) {
        assert_eq!(a, b);
    }
}
