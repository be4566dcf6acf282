//! Time-frequency analysis toolkit for two-dimensional electronic
//! spectroscopy (2DES) data cubes.
//!
//! The crate covers the full pipeline used to study coherence dynamics in
//! 2DES measurements:
//!
//! - [`spectra`] — the cube data model (population time × excitation ×
//!   detection), archive I/O, pixel trace extraction and detrending;
//! - [`fourier`] — Fourier amplitude spectra, static 2D frequency maps,
//!   Gaussian band-pass (windowed Fourier) filtering and peak detection;
//! - [`wavelet`] — complex Morlet continuous wavelet transform, scalograms,
//!   cone of influence and time-resolved 2D frequency maps;
//! - [`diagnostics`] — beat-envelope periods, interfering-frequency
//!   candidates, exponential decay fits and fold-decay ratios;
//! - [`lineshape`] — cumulant line-shape simulator (displaced vibrational
//!   modes + overdamped Brownian bath) generating synthetic rephasing cubes
//!   so every analysis stage can be validated without experimental data;
//! - [`export`] — deterministic CSV and key=value serializers.

// `!(x > 0.0)` rejects NaN along with non-positive values; a plain `<=`
// would let NaN through
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod export;
pub mod fourier;
pub mod lineshape;
pub mod spectra;
pub mod units;
pub mod wavelet;

pub use spectra::{PixelCoord, SpectralCube, TimeTrace};
