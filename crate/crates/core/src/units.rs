//! Physical constants and unit conversions shared across the crate.
//!
//! Wavenumbers are in cm⁻¹, times in fs, wavelengths in nm. A wavenumber ν
//! corresponds to a temporal frequency `SPEED_OF_LIGHT_CM_PER_FS * ν` in
//! cycles per fs.

use thiserror::Error;

/// Speed of light in cm/fs.
pub const SPEED_OF_LIGHT_CM_PER_FS: f64 = 2.99792458e-5;

/// Boltzmann constant in cm⁻¹ per kelvin.
pub const BOLTZMANN_CM_PER_K: f64 = 0.6950348;

#[derive(Debug, Error, PartialEq)]
pub enum UnitError {
    #[error("value must be positive, got {0}")]
    NonPositive(f64),
}

/// Wavelength in nm to wavenumber in cm⁻¹ (ν̃ = 10⁷ / λ).
pub fn nm_to_wavenumber(lambda_nm: f64) -> Result<f64, UnitError> {
    if !(lambda_nm > 0.0) {
        return Err(UnitError::NonPositive(lambda_nm));
    }
    Ok(1.0e7 / lambda_nm)
}

/// Wavenumber in cm⁻¹ to wavelength in nm (λ = 10⁷ / ν̃).
pub fn wavenumber_to_nm(nu_cm: f64) -> Result<f64, UnitError> {
    if !(nu_cm > 0.0) {
        return Err(UnitError::NonPositive(nu_cm));
    }
    Ok(1.0e7 / nu_cm)
}

/// Temporal frequency in cycles/fs of an oscillation at ν cm⁻¹.
pub fn wavenumber_to_cycles_per_fs(nu_cm: f64) -> f64 {
    SPEED_OF_LIGHT_CM_PER_FS * nu_cm
}

/// Beat period in fs of two components separated by Δν cm⁻¹.
pub fn period_fs_for_spacing(delta_nu_cm: f64) -> f64 {
    1.0 / (SPEED_OF_LIGHT_CM_PER_FS * delta_nu_cm)
}

/// Frequency spacing in cm⁻¹ corresponding to a beat period in fs.
pub fn spacing_for_period_fs(period_fs: f64) -> f64 {
    1.0 / (SPEED_OF_LIGHT_CM_PER_FS * period_fs)
}
