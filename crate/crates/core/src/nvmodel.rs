//! Vacancy → NV⁻ conversion with a scalar yield and a nitrogen budget.
//!
//! Each NV⁻ consumes one substitutional nitrogen as host and one as the donor of
//! its extra electron, so at most `[N]/2` NV⁻ can form. This cap is a modelling
//! choice and is reported as such in [`NVPrediction::budget_limited`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::material::MaterialSpec;
use crate::transport::{surface_vacancy_rate, vacancy_ppm};

/// Vacancy to NV⁻ conversion yield calibrated on 200 keV irradiations.
pub const DEFAULT_YIELD: f64 = 1.7e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NVPrediction {
    pub vacancy_ppm: f64,
    pub nv_minus_ppm: f64,
    pub nitrogen_ppm: f64,
    /// The nitrogen cap, not the vacancy supply, determines `nv_minus_ppm`.
    pub budget_limited: bool,
}

pub fn nitrogen_cap(nitrogen_ppm: f64) -> f64 {
    0.5 * nitrogen_ppm
}

pub fn predict_nv(vacancy_ppm: f64, nitrogen_ppm: f64, yield_: f64) -> Result<NVPrediction> {
    for (name, v) in [
        ("vacancy concentration", vacancy_ppm),
        ("nitrogen concentration", nitrogen_ppm),
        ("yield", yield_),
    ] {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::domain(format!(
                "{name} must be finite and non-negative, got {v}"
            )));
        }
    }
    let supply = yield_ * vacancy_ppm;
    let cap = nitrogen_cap(nitrogen_ppm);
    let budget_limited = supply > cap;
    Ok(NVPrediction {
        vacancy_ppm,
        nv_minus_ppm: if budget_limited { cap } else { supply },
        nitrogen_ppm,
        budget_limited,
    })
}

/// Fluence whose near-surface vacancy concentration equals half the nitrogen content.
pub fn half_nitrogen_fluence(energy_mev: f64, m: &MaterialSpec, nitrogen_ppm: f64) -> Result<f64> {
    if !(nitrogen_ppm > 0.0) || !nitrogen_ppm.is_finite() {
        return Err(Error::domain(format!(
            "nitrogen concentration must be positive, got {nitrogen_ppm}"
        )));
    }
    let rate = surface_vacancy_rate(energy_mev, m)?;
    if rate == 0.0 {
        return Err(Error::domain(format!(
            "{energy_mev} MeV is below the displacement threshold; no fluence creates vacancies"
        )));
    }
    // ppm per unit fluence
    let slope = vacancy_ppm(rate, 1.0, m);
    Ok(nitrogen_cap(nitrogen_ppm) / slope)
}
