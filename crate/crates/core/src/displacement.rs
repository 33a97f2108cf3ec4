//! Knock-on damage: maximum energy transfer to a nucleus, the McKinley–Feshbach
//! displacement cross-section, primary vacancy rate, and the cascade multiplier
//! with 50 % spontaneous recombination.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::{BARN_CM2, ELECTRON_REST_ENERGY_MEV, MCKINLEY_FESHBACH_ALPHA_INV};
use crate::error::{Error, Result};
use crate::kinematics::Kinematics;
use crate::material::MaterialSpec;

/// Fraction of cascade displacements that survive recombination.
pub const CASCADE_SURVIVAL: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VacancyRates {
    /// Primary vacancies per cm per electron.
    pub primary_per_cm: f64,
    /// Stable vacancies per cm per electron after the cascade.
    pub total_per_cm: f64,
    /// Displacement cross-section, barn.
    pub cross_section: f64,
    /// Maximum energy transferable to a nucleus, eV.
    pub e_max: f64,
}

impl VacancyRates {
    pub fn cascade_multiplier(&self) -> f64 {
        if self.primary_per_cm > 0.0 {
            self.total_per_cm / self.primary_per_cm
        } else {
            1.0
        }
    }
}

/// Maximum energy transferred to a nucleus in a head-on collision, eV.
pub fn max_transfer(energy_mev: f64, m: &MaterialSpec) -> f64 {
    let e = energy_mev.max(0.0);
    2.0 * e * (e + 2.0 * ELECTRON_REST_ENERGY_MEV) / m.nucleus_rest_energy() * 1e6
}

/// McKinley–Feshbach displacement cross-section in barn; zero at or below threshold.
pub fn displacement_cross_section(energy_mev: f64, m: &MaterialSpec) -> f64 {
    let ratio = max_transfer(energy_mev, m) / m.displacement_energy;
    if ratio <= 1.0 {
        return 0.0;
    }
    let Ok(k) = Kinematics::electron(energy_mev) else {
        return 0.0;
    };
    let beta = k.beta;
    let beta2 = beta * beta;
    let za = m.z / MCKINLEY_FESHBACH_ALPHA_INV;
    let bracket = ratio - 1.0 + 2.0 * PI * beta * za * (ratio.sqrt() - 1.0) - (beta2 + PI * beta * za) * ratio.ln();
    (0.25 * m.z * m.z * (1.0 - beta2) / (beta2 * beta2) * bracket).max(0.0)
}

/// Primary vacancies per cm for a propagation step `step_cm`.
pub fn primary_vacancy_rate(energy_mev: f64, m: &MaterialSpec, step_cm: f64) -> Result<f64> {
    check_step(step_cm)?;
    let sigma_cm2 = displacement_cross_section(energy_mev, m) * BARN_CM2;
    Ok(primary_rate_from_sigma(sigma_cm2, m.atom_density, step_cm))
}

fn primary_rate_from_sigma(sigma_cm2: f64, atom_density: f64, step_cm: f64) -> f64 {
    // (1 - e^{-x}) / dL with x = ρσdL, written with exp_m1 for small x.
    -(-atom_density * sigma_cm2 * step_cm).exp_m1() / step_cm
}

/// Cascade multiplier 1 + ½·ln(E_max / 2E_d), clamped to ≥ 1.
pub fn cascade_multiplier(e_max_ev: f64, displacement_ev: f64) -> f64 {
    if e_max_ev <= 2.0 * displacement_ev {
        1.0
    } else {
        1.0 + CASCADE_SURVIVAL * (e_max_ev / (2.0 * displacement_ev)).ln()
    }
}

pub fn total_vacancy_rate(energy_mev: f64, m: &MaterialSpec, step_cm: f64) -> Result<VacancyRates> {
    check_step(step_cm)?;
    let e_max = max_transfer(energy_mev, m);
    let cross_section = displacement_cross_section(energy_mev, m);
    if cross_section == 0.0 {
        return Ok(VacancyRates {
            primary_per_cm: 0.0,
            total_per_cm: 0.0,
            cross_section,
            e_max,
        });
    }
    let primary = primary_rate_from_sigma(cross_section * BARN_CM2, m.atom_density, step_cm);
    Ok(VacancyRates {
        primary_per_cm: primary,
        total_per_cm: primary * cascade_multiplier(e_max, m.displacement_energy),
        cross_section,
        e_max,
    })
}

/// Lowest beam energy able to displace a lattice atom, keV (bisection to 0.01 keV).
pub fn displacement_threshold_beam_energy(m: &MaterialSpec) -> f64 {
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64; // MeV
    while max_transfer(hi, m) < m.displacement_energy {
        hi *= 2.0;
    }
    while (hi - lo) * 1e3 > 1e-4 {
        let mid = 0.5 * (lo + hi);
        if max_transfer(mid, m) < m.displacement_energy {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi) * 1e3
}

fn check_step(step_cm: f64) -> Result<()> {
    if !(step_cm > 0.0) || !step_cm.is_finite() {
        return Err(Error::domain(format!(
            "propagation step must be positive, got {step_cm} cm"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn diamond() -> MaterialSpec {
        MaterialSpec::diamond()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn max_transfer_values() {
        let m = diamond();
        assert!((max_transfer(0.165, &m) - 35.0).abs() < 0.05);
        assert!(rel(max_transfer(0.2, &m), 43.692_544_166_325_72) < 1e-12);
        assert!(rel(max_transfer(155.0, &m), 4_323_389.980_029_589) < 1e-12);
        assert_eq!(max_transfer(0.0, &m), 0.0);
    }

    #[test]
    fn cross_section_threshold_and_values() {
        let m = diamond();
        assert_eq!(displacement_cross_section(0.150, &m), 0.0);
        // Reference values from a 40-digit evaluation.
        for (e, sigma) in [
            (0.2, 2.830_922_126_320_078),
            (1.0, 9.883_569_144_746_14),
            (10.0, 11.990_805_173_456_114),
            (155.0, 12.011_980_149_040_303),
        ] {
            assert!(rel(displacement_cross_section(e, &m), sigma) < 1e-9, "{e}");
        }
        let s10 = displacement_cross_section(10.0, &m);
        let s155 = displacement_cross_section(155.0, &m);
        assert!((s155 - s10).abs() / s10 < 0.15);
    }

    #[test]
    fn cross_section_vanishes_at_threshold() {
        // Pick E_d so that E_max equals it exactly at 0.3 MeV.
        let mut m = diamond();
        m.displacement_energy = max_transfer(0.3, &m);
        assert_eq!(displacement_cross_section(0.3, &m), 0.0);
        // and just above it the bracket is tiny but positive
        let s = displacement_cross_section(0.300_001, &m);
        assert!(s > 0.0 && s < 1e-3, "{s}");
    }

    #[test]
    fn primary_rate_limits() {
        let m = diamond();
        assert_eq!(primary_vacancy_rate(0.1, &m, 1e-4).unwrap(), 0.0);
        let bulk = m.atom_density * displacement_cross_section(155.0, &m) * BARN_CM2;
        let fine = primary_vacancy_rate(155.0, &m, 1e-7).unwrap();
        assert!(rel(fine, bulk) < 1e-6);
        assert!(rel(fine, 2.114_108_282_758_37) < 1e-10);
        for dl in [1e-7, 1e-4, 1e-2, 1.0, 100.0] {
            assert!(primary_vacancy_rate(155.0, &m, dl).unwrap() <= bulk);
        }
        assert!(matches!(primary_vacancy_rate(1.0, &m, 0.0), Err(Error::Domain(_))));
        assert!(primary_vacancy_rate(1.0, &m, -1.0).is_err());
    }

    #[test]
    fn cascade_multiplier_values() {
        let m = diamond();
        assert_eq!(cascade_multiplier(70.0, 35.0), 1.0);
        let r = total_vacancy_rate(155.0, &m, 1e-4).unwrap();
        assert!(rel(r.cascade_multiplier(), 6.515_527_564_020_249) < 1e-12);
        let r = total_vacancy_rate(0.2, &m, 1e-5).unwrap();
        assert!(r.cascade_multiplier() < 1.01);
        assert_eq!(r.total_per_cm, r.primary_per_cm);
        let r = total_vacancy_rate(0.1, &m, 1e-5).unwrap();
        assert_eq!((r.primary_per_cm, r.total_per_cm), (0.0, 0.0));
    }

    #[test]
    fn threshold_energy() {
        let m = diamond();
        let t = displacement_threshold_beam_energy(&m);
        assert!((t - 164.942_393_518).abs() < 0.01, "{t}");
        assert!((164.6..=165.4).contains(&t));
        let mut m2 = m.clone();
        m2.displacement_energy *= 2.0;
        assert!(displacement_threshold_beam_energy(&m2) > t);
    }

    #[test]
    fn cross_section_rises_then_saturates() {
        // The expansion peaks at ~12.028 b near 25 MeV and then sags by ~0.2 %
        // towards 1 GeV; it is non-decreasing only up to the peak.
        let m = diamond();
        let t = displacement_threshold_beam_energy(&m) * 1e-3;
        let grid = crate::stopping::log_grid(t, 20.0, 3000).unwrap();
        let s: Vec<f64> = grid.iter().map(|&e| displacement_cross_section(e, &m)).collect();
        for w in s.windows(2) {
            assert!(w[1] >= w[0]);
        }
        let peak = 12.028_08;
        for e in crate::stopping::log_grid(20.0, 1000.0, 500).unwrap() {
            let v = displacement_cross_section(e, &m);
            assert!(v <= peak + 1e-4 && (peak - v) / peak < 0.005, "{e}: {v}");
        }
    }

    proptest! {
        #[test]
        fn clamped_window_keeps_total_at_least_primary(e_kev in 165.0f64..235.0, dl in 1e-7f64..1e-3) {
            let r = total_vacancy_rate(e_kev * 1e-3, &diamond(), dl).unwrap();
            prop_assert!(r.total_per_cm >= r.primary_per_cm);
            prop_assert!(r.primary_per_cm >= 0.0);
        }

        #[test]
        fn zero_below_threshold(e_kev in 0.0f64..164.9) {
            let r = total_vacancy_rate(e_kev * 1e-3, &diamond(), 1e-5).unwrap();
            prop_assert_eq!(r.primary_per_cm, 0.0);
            prop_assert_eq!(r.total_per_cm, 0.0);
        }

        #[test]
        fn multiplier_non_decreasing(e1 in 0.17f64..1000.0, e2 in 0.17f64..1000.0) {
            let m = diamond();
            let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
            let a = total_vacancy_rate(lo, &m, 1e-4).unwrap().cascade_multiplier();
            let b = total_vacancy_rate(hi, &m, 1e-4).unwrap().cascade_multiplier();
            prop_assert!(b >= a);
        }
    }
}
