//! `twodes` — command-line pipeline for 2DES time-frequency analysis.
//!
//! Every subcommand is a pure function of its input files and flags:
//! rerunning with identical inputs produces byte-identical outputs. Exit
//! codes: 0 success, 1 usage error, 2 data error. Diagnostics go to stderr,
//! data to files.

mod svg;

use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use twodes::diagnostics::{fit_exp_decay, BeatReport, DEFAULT_MATCH_TOLERANCE_CM};
use twodes::export;
use twodes::fourier::{bandpass_filter, detrend_cube, frequency_map, GaussianWindow};
use twodes::lineshape::{parse_config, simulate_cube, LineShapeModel, SimulationGrids};
use twodes::spectra::{load_archive, save_archive, PixelCoord, SpectralCube, TimeTrace};
use twodes::wavelet::{
    cone_of_influence, scales_for_frequencies, time_resolved_frequency_map, wavelet_trace,
    MorletParams,
};

#[derive(Parser)]
#[command(
    name = "twodes",
    version,
    about = "Time-frequency analysis of 2DES cubes: simulation, Fourier and wavelet maps, \
             band-pass filtering and coherence diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a rephasing 2DES cube from a line-shape model
    Simulate {
        /// key=value model/grid config; defaults to the built-in reference model
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output archive directory
        #[arg(long)]
        out: PathBuf,
    },
    /// Static 2D frequency map at a wavenumber (Fourier amplitude per pixel)
    Ftmap {
        #[arg(long = "in")]
        input: PathBuf,
        /// Probed wavenumber in cm^-1
        #[arg(long)]
        nu: f64,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
        /// Zero-padding factor for the transform
        #[arg(long, default_value_t = 4)]
        pad: usize,
        /// Polynomial detrend order applied per pixel
        #[arg(long, default_value_t = 3)]
        detrend: usize,
        /// Skip detrending
        #[arg(long)]
        no_detrend: bool,
        /// Crop the population axis to [tmin, tmax] fs before analysis
        #[arg(long)]
        tmin: Option<f64>,
        #[arg(long)]
        tmax: Option<f64>,
    },
    /// Time-resolved 2D frequency maps (wavelet amplitude per pixel)
    Wtmap {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        nu: f64,
        /// Population times at which to export maps, comma separated fs
        #[arg(long)]
        at: String,
        /// Output directory (one CSV per requested time)
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 3)]
        detrend: usize,
        #[arg(long)]
        no_detrend: bool,
        #[arg(long, default_value_t = 2.0)]
        fb: f64,
        #[arg(long, default_value_t = 1.0)]
        fc: f64,
        #[arg(long)]
        tmin: Option<f64>,
        #[arg(long)]
        tmax: Option<f64>,
    },
    /// Extract a pixel trace: raw, or |CWT| at --nu
    Trace {
        #[arg(long = "in")]
        input: PathBuf,
        /// Pixel as excitation,detection in nm, e.g. 675,681
        #[arg(long)]
        pixel: String,
        #[arg(long)]
        out: PathBuf,
        /// Wavelet pseudofrequency in cm^-1; omit for the raw trace
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long, default_value_t = 3)]
        detrend: usize,
        #[arg(long)]
        no_detrend: bool,
        #[arg(long, default_value_t = 2.0)]
        fb: f64,
        #[arg(long, default_value_t = 1.0)]
        fc: f64,
        #[arg(long)]
        tmin: Option<f64>,
        #[arg(long)]
        tmax: Option<f64>,
    },
    /// Gaussian band-pass filter of a trace CSV (writes t_fs,re,im)
    Bandpass {
        #[arg(long = "in")]
        input: PathBuf,
        /// Window center in cm^-1
        #[arg(long)]
        center: f64,
        /// Window FWHM in cm^-1
        #[arg(long)]
        fwhm: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Beat diagnosis of an envelope trace around a probed wavenumber
    Beats {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        nu: f64,
        #[arg(long)]
        out: PathBuf,
        /// Detected spectral peaks to match, comma separated cm^-1
        #[arg(long)]
        detected: Option<String>,
        /// Matching tolerance in cm^-1
        #[arg(long, default_value_t = DEFAULT_MATCH_TOLERANCE_CM)]
        tol: f64,
    },
    /// Exponential decay fit of an envelope trace
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Restrict the fit to [tmin, tmax] fs
        #[arg(long)]
        tmin: Option<f64>,
        #[arg(long)]
        tmax: Option<f64>,
    },
    /// Render a frequency-map CSV as an SVG heatmap
    ExportSvg {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Title text; defaults to the input file name
        #[arg(long)]
        title: Option<String>,
    },
    /// Composite pipeline: detrend, wavelet trace, beats and decay fit
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        pixel: String,
        #[arg(long)]
        nu: f64,
        /// Output directory for trace.csv, beats.txt, fit.txt and maps
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 3)]
        detrend: usize,
        #[arg(long)]
        no_detrend: bool,
        #[arg(long)]
        detected: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MATCH_TOLERANCE_CM)]
        tol: f64,
        /// Also export time-resolved maps at these population times
        #[arg(long)]
        at: Option<String>,
        #[arg(long, default_value_t = 2.0)]
        fb: f64,
        #[arg(long, default_value_t = 1.0)]
        fc: f64,
        #[arg(long)]
        tmin: Option<f64>,
        #[arg(long)]
        tmax: Option<f64>,
    },
}

enum CliError {
    Usage(String),
    Data(anyhow::Error),
}

impl<E: std::error::Error + Send + Sync + 'static> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Data(e.into())
    }
}

type CliResult = Result<(), CliError>;

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprint!("{e}");
            return 1;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            1
        }
        Err(CliError::Data(err)) => {
            eprintln!("error: {err}");
            2
        }
    }
}

fn execute(command: Command) -> CliResult {
    match command {
        Command::Simulate { config, out } => {
            let (model, grids) = match config {
                Some(path) => {
                    let text = fs::read_to_string(&path)?;
                    parse_config(&text)?
                }
                None => (LineShapeModel::reference_model(), SimulationGrids::default()),
            };
            let sim = simulate_cube(&model, &grids)?;
            for w in &sim.warnings {
                eprintln!("warning: {w}");
            }
            save_archive(&sim.cube, &out)?;
            Ok(())
        }
        Command::Ftmap {
            input,
            nu,
            out,
            pad,
            detrend,
            no_detrend,
            tmin,
            tmax,
        } => {
            check_nu(nu)?;
            let cube = prepare_cube(&input, tmin, tmax, detrend_order(detrend, no_detrend))?;
            let map = frequency_map(&cube, nu, pad)?;
            fs::write(&out, export::frequency_map_to_csv(&map))?;
            Ok(())
        }
        Command::Wtmap {
            input,
            nu,
            at,
            out,
            detrend,
            no_detrend,
            fb,
            fc,
            tmin,
            tmax,
        } => {
            check_nu(nu)?;
            let times = parse_float_list(&at)?;
            if times.is_empty() {
                return Err(CliError::Usage("--at needs at least one time".into()));
            }
            let cube = prepare_cube(&input, tmin, tmax, detrend_order(detrend, no_detrend))?;
            let params = MorletParams { f_b: fb, f_c: fc };
            let map = time_resolved_frequency_map(&cube, nu, &params)?;
            fs::create_dir_all(&out)?;
            for t in times {
                let slice = map.slice_at(t);
                let name = format!("map_nu{}_T{}fs.csv", format_tag(nu), format_tag(t));
                fs::write(out.join(name), export::frequency_map_to_csv(&slice))?;
            }
            Ok(())
        }
        Command::Trace {
            input,
            pixel,
            out,
            nu,
            detrend,
            no_detrend,
            fb,
            fc,
            tmin,
            tmax,
        } => {
            let pixel = parse_pixel(&pixel)?;
            let cube = prepare_cube(&input, tmin, tmax, detrend_order(detrend, no_detrend))?;
            let trace = match nu {
                Some(nu) => {
                    check_nu(nu)?;
                    let params = MorletParams { f_b: fb, f_c: fc };
                    wavelet_trace(&cube, pixel, nu, &params)?
                }
                None => cube.extract_trace(pixel)?,
            };
            fs::write(&out, export::trace_to_csv(&trace))?;
            Ok(())
        }
        Command::Bandpass {
            input,
            center,
            fwhm,
            out,
        } => {
            let trace = export::trace_from_csv(&fs::read_to_string(&input)?)?;
            let window = GaussianWindow::new(center, fwhm)?;
            let filtered = bandpass_filter(&trace, &window)?;
            fs::write(&out, export::complex_trace_to_csv(&filtered))?;
            Ok(())
        }
        Command::Beats {
            input,
            nu,
            out,
            detected,
            tol,
        } => {
            check_nu(nu)?;
            let trace = export::trace_from_csv(&fs::read_to_string(&input)?)?;
            let detected = match detected {
                Some(list) => parse_float_list(&list)?,
                None => Vec::new(),
            };
            let report = BeatReport::from_envelope(&trace, nu, &detected, tol)?;
            fs::write(&out, export::beat_report_to_text(&report))?;
            Ok(())
        }
        Command::Fit {
            input,
            out,
            tmin,
            tmax,
        } => {
            let trace = export::trace_from_csv(&fs::read_to_string(&input)?)?;
            let trace = restrict_trace(&trace, tmin, tmax)?;
            let fit = fit_exp_decay(&trace)?;
            fs::write(&out, export::decay_fit_to_text(&fit))?;
            Ok(())
        }
        Command::ExportSvg { input, out, title } => {
            let map = export::frequency_map_from_csv(&fs::read_to_string(&input)?)?;
            let title = title.unwrap_or_else(|| {
                input
                    .file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "frequency map".into())
            });
            fs::write(&out, svg::render_heatmap(&map, &title))?;
            Ok(())
        }
        Command::Analyze {
            input,
            pixel,
            nu,
            out,
            detrend,
            no_detrend,
            detected,
            tol,
            at,
            fb,
            fc,
            tmin,
            tmax,
        } => {
            check_nu(nu)?;
            let pixel = parse_pixel(&pixel)?;
            let cube = prepare_cube(&input, tmin, tmax, detrend_order(detrend, no_detrend))?;
            let params = MorletParams { f_b: fb, f_c: fc };
            fs::create_dir_all(&out)?;

            let trace = wavelet_trace(&cube, pixel, nu, &params)?;
            fs::write(out.join("trace.csv"), export::trace_to_csv(&trace))?;

            let detected = match detected {
                Some(list) => parse_float_list(&list)?,
                None => Vec::new(),
            };
            let report = BeatReport::from_envelope(&trace, nu, &detected, tol)?;
            fs::write(out.join("beats.txt"), export::beat_report_to_text(&report))?;

            // decay fit on the COI interior of the wavelet trace
            let set = scales_for_frequencies(&[nu], cube.dt_fs(), &params)?;
            let margin = cone_of_influence(set.scales[0], &params, trace.len());
            let t = trace.t_fs();
            let (lo, hi) = if 2 * margin < trace.len() {
                (t[margin], t[trace.len() - 1 - margin])
            } else {
                (t[0], t[trace.len() - 1])
            };
            let interior = restrict_trace(&trace, Some(lo), Some(hi))?;
            let fit = fit_exp_decay(&interior)?;
            fs::write(out.join("fit.txt"), export::decay_fit_to_text(&fit))?;

            if let Some(list) = at {
                let map = time_resolved_frequency_map(&cube, nu, &params)?;
                for t in parse_float_list(&list)? {
                    let slice = map.slice_at(t);
                    let name = format!("map_nu{}_T{}fs.csv", format_tag(nu), format_tag(t));
                    fs::write(out.join(name), export::frequency_map_to_csv(&slice))?;
                }
            }
            Ok(())
        }
    }
}

fn detrend_order(order: usize, no_detrend: bool) -> Option<usize> {
    if no_detrend {
        None
    } else {
        Some(order)
    }
}

fn prepare_cube(
    input: &Path,
    tmin: Option<f64>,
    tmax: Option<f64>,
    detrend: Option<usize>,
) -> Result<SpectralCube, CliError> {
    let mut cube = load_archive(input)?;
    if tmin.is_some() || tmax.is_some() {
        let lo = tmin.unwrap_or(f64::NEG_INFINITY);
        let hi = tmax.unwrap_or(f64::INFINITY);
        cube = cube.crop_population(lo, hi)?;
    }
    if let Some(order) = detrend {
        cube = detrend_cube(&cube, order)?;
    }
    Ok(cube)
}

fn restrict_trace(
    trace: &TimeTrace,
    tmin: Option<f64>,
    tmax: Option<f64>,
) -> Result<TimeTrace, CliError> {
    if tmin.is_none() && tmax.is_none() {
        return Ok(trace.clone());
    }
    let lo = tmin.unwrap_or(f64::NEG_INFINITY);
    let hi = tmax.unwrap_or(f64::INFINITY);
    let mut t = Vec::new();
    let mut y = Vec::new();
    for (&ti, &yi) in trace.t_fs().iter().zip(trace.values()) {
        if ti >= lo && ti <= hi {
            t.push(ti);
            y.push(yi);
        }
    }
    if t.is_empty() {
        return Err(CliError::Usage(format!(
            "no samples between {lo} and {hi} fs"
        )));
    }
    Ok(TimeTrace::new(t, y)?)
}

fn check_nu(nu: f64) -> CliResult {
    if nu > 0.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--nu must be positive, got {nu}")))
    }
}

fn parse_pixel(text: &str) -> Result<PixelCoord, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Usage(format!(
            "--pixel expects excitation,detection in nm, got: {text}"
        )));
    }
    let exc = parts[0]
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad pixel coordinate: {}", parts[0])))?;
    let det = parts[1]
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad pixel coordinate: {}", parts[1])))?;
    Ok(PixelCoord::new(exc, det))
}

fn parse_float_list(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad number in list: {s}")))
        })
        .collect()
}

/// Compact numeric tag for file names: integral values lose the decimal
/// point, others keep it with '.' replaced by 'p'.
fn format_tag(v: f64) -> String {
    if (v - v.round()).abs() < 1e-9 {
        format!("{}", v.round() as i64)
    } else {
        format!("{v}").replace('.', "p")
    }
}
