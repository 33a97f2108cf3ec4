use serde::Serialize;

use super::peaks::PeakFit;
use crate::constants::NV_GYROMAGNETIC_HZ_PER_T;
use crate::error::{Error, Result};

/// Lineshape factor 4/(3√3) for a Lorentzian resonance.
pub const LORENTZIAN_PREFACTOR: f64 = 0.769_800_358_919_501;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sensitivity {
    /// fwhm / (contrast·√A), arbitrary units·Hz^-1/2.
    pub effective: Option<f64>,
    /// Shot-noise limited, T·Hz^-1/2.
    pub shot_noise_t: Option<f64>,
}

fn check(fwhm: f64, contrast: f64, signal: f64, what: &str) -> Result<()> {
    if !(contrast > 0.0) {
        return Err(Error::domain(format!("contrast must be positive, got {contrast}")));
    }
    if !(signal > 0.0) {
        return Err(Error::domain(format!("{what} must be positive, got {signal}")));
    }
    if !(fwhm >= 0.0) {
        return Err(Error::domain(format!("linewidth must be non-negative, got {fwhm}")));
    }
    Ok(())
}

/// Effective sensitivity using the photodiode voltage `photodiode_volts` as the
/// PL rate proxy. Linewidth is taken in the fit's abscissa units.
pub fn effective_sensitivity(f: &PeakFit, photodiode_volts: f64) -> Result<f64> {
    effective_sensitivity_raw(f.fwhm, f.contrast, photodiode_volts)
}

pub fn effective_sensitivity_raw(fwhm: f64, contrast: f64, photodiode_volts: f64) -> Result<f64> {
    check(fwhm, contrast, photodiode_volts, "photodiode voltage")?;
    Ok(fwhm / (contrast * photodiode_volts.sqrt()))
}

/// Shot-noise limited magnetic sensitivity (T·Hz^-1/2) for a fit whose abscissa
/// is in MHz, at detected photon rate `rate_per_s`.
pub fn shot_noise_sensitivity(f: &PeakFit, rate_per_s: f64) -> Result<f64> {
    shot_noise_sensitivity_raw(f.fwhm * 1e6, f.contrast, rate_per_s, NV_GYROMAGNETIC_HZ_PER_T)
}

/// 4/(3√3) · (fwhm/γ) / (C·√R), with fwhm in Hz and γ in Hz/T.
pub fn shot_noise_sensitivity_raw(
    fwhm_hz: f64,
    contrast: f64,
    rate_per_s: f64,
    gyromagnetic_hz_per_t: f64,
) -> Result<f64> {
    check(fwhm_hz, contrast, rate_per_s, "photon rate")?;
    Ok(LORENTZIAN_PREFACTOR * (fwhm_hz / gyromagnetic_hz_per_t) / (contrast * rate_per_s.sqrt()))
}
