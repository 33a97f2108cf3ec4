//! Analysis of measured spectra: ZPL areas and charge state, NV⁻ calibration,
//! Lorentzian/Gaussian/exponential fits and ODMR sensitivity.

pub mod lm;
mod peaks;
mod sensitivity;
mod spectrum;
mod zpl;

pub use peaks::{
    exp_residuals, exponential, exponential_initial_guess, fit_exponential, fit_gaussian, fit_lorentzian, gaussian,
    lorentzian, peak_initial_guess, peak_residuals, ExpFit, PeakFit, PeakShape,
};
pub use sensitivity::{
    effective_sensitivity, effective_sensitivity_raw, shot_noise_sensitivity, shot_noise_sensitivity_raw, Sensitivity,
    LORENTZIAN_PREFACTOR,
};
pub use spectrum::{Spectrum, SpectrumKind, MIN_FIT_POINTS};
pub use zpl::{
    analyze_pl, charge_ratio, nv_concentration, zpl_area, Calibration, ChargeState, DebyeWaller, PlReport, PlWindows,
    ZplArea, DEFAULT_HALF_WIDTH_NM, NV_MINUS_ZPL_NM, NV_ZERO_ZPL_NM,
};
