//! Electron energy loss: collisional (Bethe–Bloch for electrons) and radiative
//! (bremsstrahlung, radiation-length approximation) stopping powers.

use std::f64::consts::{LN_10, LN_2, PI};

use serde::Serialize;

use crate::constants::{CLASSICAL_ELECTRON_RADIUS_CM, ELECTRON_REST_ENERGY_MEV};
use crate::error::{Error, Result};
use crate::kinematics::Kinematics;
use crate::material::MaterialSpec;

/// Lowest kinetic energy the stopping model accepts, MeV.
pub const MIN_ENERGY_MEV: f64 = 0.01;
/// Highest kinetic energy the stopping model accepts, MeV.
pub const MAX_ENERGY_MEV: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StoppingBreakdown {
    /// MeV·cm⁻¹
    pub ionization: f64,
    /// MeV·cm⁻¹
    pub radiative: f64,
    /// MeV·cm⁻¹
    pub total: f64,
}

/// Sternheimer density-effect coefficients.
///
/// δ(x) with x = log₁₀(βγ):
/// * `0` for x < x₀
/// * `2 ln10 · x − C̄ + a (x₁ − x)^m` for x₀ ≤ x < x₁
/// * `2 ln10 · x − C̄` for x ≥ x₁
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SternheimerCoefficients {
    pub c_bar: f64,
    pub x0: f64,
    pub x1: f64,
    pub a: f64,
    pub m: f64,
}

impl SternheimerCoefficients {
    /// General Sternheimer–Peierls recipe for condensed media, built from the
    /// mean ionization potential and the plasma energy ħωₚ = 28.816·√(ρZ/A) eV.
    ///
    /// For diamond (I = 79 eV, ρ = 3.515 g·cm⁻³) this gives ħωₚ ≈ 38.19 eV,
    /// C̄ ≈ 2.4540, x₀ = 0.2, x₁ = 2.0, m = 3, a ≈ 0.26285.
    pub fn sternheimer_peierls(m: &MaterialSpec) -> Self {
        let plasma_ev = 28.816 * (m.mass_density * m.z / m.a).sqrt();
        let c_bar = 2.0 * (m.mean_ionization_potential / plasma_ev).ln() + 1.0;
        let (x0, x1) = if m.mean_ionization_potential < 100.0 {
            if c_bar < 3.681 {
                (0.2, 2.0)
            } else {
                (0.326 * c_bar - 1.0, 2.0)
            }
        } else if c_bar < 5.215 {
            (0.2, 3.0)
        } else {
            (0.326 * c_bar - 1.5, 3.0)
        };
        let mexp = 3.0;
        let a = (c_bar - 2.0 * LN_10 * x0) / (x1 - x0).powf(mexp);
        SternheimerCoefficients {
            c_bar,
            x0,
            x1,
            a,
            m: mexp,
        }
    }

    pub fn delta(&self, beta_gamma: f64) -> f64 {
        if beta_gamma <= 0.0 {
            return 0.0;
        }
        let x = beta_gamma.log10();
        let d = if x < self.x0 {
            0.0
        } else if x < self.x1 {
            2.0 * LN_10 * x - self.c_bar + self.a * (self.x1 - x).powf(self.m)
        } else {
            2.0 * LN_10 * x - self.c_bar
        };
        d.max(0.0)
    }
}

/// Shell correction C(I, η) with η = βγ (empirical fit, valid for η ≥ 0.1).
/// The ionization bracket subtracts 2C/Z.
pub fn shell_correction_coefficient(ionization_ev: f64, beta_gamma: f64) -> f64 {
    let eta = beta_gamma.max(0.1);
    let u = eta.powi(-2);
    let i2 = ionization_ev * ionization_ev;
    let i3 = i2 * ionization_ev;
    let c = (0.422_377 * u + 0.030_404_3 * u * u - 0.000_381_06 * u * u * u) * 1e-6 * i2
        + (3.858_019 * u - 0.166_798_9 * u * u + 0.001_579_55 * u * u * u) * 1e-9 * i3;
    c.max(0.0)
}

/// Radiation length X₀ in g·cm⁻².
pub fn radiation_length(m: &MaterialSpec) -> f64 {
    716.4 * m.a / (m.z * (m.z + 1.0) * (287.0 / m.z.sqrt()).ln())
}

/// Selects which corrections enter the ionization bracket.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StoppingModel {
    pub density_effect: bool,
    pub shell_correction: bool,
    /// Overrides the coefficients otherwise derived from the material.
    pub sternheimer: Option<SternheimerCoefficients>,
}

impl Default for StoppingModel {
    fn default() -> Self {
        StoppingModel {
            density_effect: true,
            shell_correction: true,
            sternheimer: None,
        }
    }
}

impl StoppingModel {
    /// Bare formula with δ = ζ = 0.
    pub fn uncorrected() -> Self {
        StoppingModel {
            density_effect: false,
            shell_correction: false,
            sternheimer: None,
        }
    }

    pub fn density_correction(&self, energy_mev: f64, m: &MaterialSpec) -> f64 {
        if !self.density_effect {
            return 0.0;
        }
        density_correction_with(energy_mev, m, self.sternheimer)
    }

    pub fn shell_correction(&self, energy_mev: f64, m: &MaterialSpec) -> f64 {
        if !self.shell_correction {
            return 0.0;
        }
        shell_correction(energy_mev, m)
    }

    /// Collisional stopping power, MeV·cm⁻¹.
    pub fn ionization(&self, energy_mev: f64, m: &MaterialSpec) -> Result<f64> {
        check_domain(energy_mev)?;
        let k = Kinematics::electron(energy_mev)?;
        let beta2 = k.beta * k.beta;
        let tau = k.gamma - 1.0;
        let i_rel = m.mean_ionization_potential * 1e-6 / ELECTRON_REST_ENERGY_MEV;

        let log_arg = tau * tau * (tau + 2.0) / (2.0 * i_rel * i_rel);
        if log_arg <= 1.0 {
            return Err(Error::domain(format!(
                "ionization logarithm argument {log_arg:.4} <= 1 at {energy_mev} MeV; energy below model floor"
            )));
        }
        let f_tau = 1.0 - beta2 + (tau * tau / 8.0 - (2.0 * tau + 1.0) * LN_2) / ((tau + 1.0) * (tau + 1.0));
        let delta = self.density_correction(energy_mev, m);
        let zeta = self.shell_correction(energy_mev, m);
        let bracket = log_arg.ln() + f_tau - delta - 2.0 * zeta / m.z;
        if bracket <= 0.0 {
            return Err(Error::domain(format!(
                "ionization stopping bracket is non-positive ({bracket:.4}) at {energy_mev} MeV"
            )));
        }
        let prefactor = 2.0
            * PI
            * m.atom_density
            * m.z
            * ELECTRON_REST_ENERGY_MEV
            * CLASSICAL_ELECTRON_RADIUS_CM
            * CLASSICAL_ELECTRON_RADIUS_CM
            / beta2;
        Ok(prefactor * bracket)
    }

    /// Bremsstrahlung stopping power E·ρ/X₀, MeV·cm⁻¹. `ρ` is the mass density
    /// because X₀ is an areal density.
    pub fn radiative(&self, energy_mev: f64, m: &MaterialSpec) -> f64 {
        energy_mev * m.mass_density / radiation_length(m)
    }

    pub fn total(&self, energy_mev: f64, m: &MaterialSpec) -> Result<StoppingBreakdown> {
        let ionization = self.ionization(energy_mev, m)?;
        let radiative = self.radiative(energy_mev, m);
        Ok(StoppingBreakdown {
            ionization,
            radiative,
            total: ionization + radiative,
        })
    }

    /// Energy at which radiative loss overtakes ionization loss, found by bisection
    /// on `[lo, hi]` MeV. `None` when the sign does not change on the interval.
    pub fn crossover_energy(&self, m: &MaterialSpec, lo: f64, hi: f64) -> Result<Option<f64>> {
        let diff = |e: f64| -> Result<f64> { Ok(self.ionization(e, m)? - self.radiative(e, m)) };
        let (mut a, mut b) = (lo, hi);
        let (fa, fb) = (diff(a)?, diff(b)?);
        if fa.signum() == fb.signum() {
            return Ok(None);
        }
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if diff(mid)?.signum() == fa.signum() {
                a = mid;
            } else {
                b = mid;
            }
            if b - a <= 1e-12 * b {
                break;
            }
        }
        Ok(Some(0.5 * (a + b)))
    }
}

fn check_domain(energy_mev: f64) -> Result<()> {
    if !(MIN_ENERGY_MEV..=MAX_ENERGY_MEV).contains(&energy_mev) {
        return Err(Error::domain(format!(
            "energy {energy_mev} MeV outside supported stopping domain [{MIN_ENERGY_MEV}, {MAX_ENERGY_MEV}] MeV"
        )));
    }
    Ok(())
}

fn density_correction_with(energy_mev: f64, m: &MaterialSpec, coefficients: Option<SternheimerCoefficients>) -> f64 {
    let Ok(k) = Kinematics::electron(energy_mev) else {
        return 0.0;
    };
    coefficients
        .unwrap_or_else(|| SternheimerCoefficients::sternheimer_peierls(m))
        .delta(k.beta_gamma())
}

/// Density-effect correction δ with coefficients derived from the material.
pub fn density_correction(energy_mev: f64, m: &MaterialSpec) -> f64 {
    density_correction_with(energy_mev, m, None)
}

/// Shell correction ζ for the material's mean ionization potential.
pub fn shell_correction(energy_mev: f64, m: &MaterialSpec) -> f64 {
    match Kinematics::electron(energy_mev) {
        Ok(k) if energy_mev > 0.0 => shell_correction_coefficient(m.mean_ionization_potential, k.beta_gamma()),
        _ => shell_correction_coefficient(m.mean_ionization_potential, 0.1),
    }
}

pub fn ionization_stopping(energy_mev: f64, m: &MaterialSpec) -> Result<f64> {
    StoppingModel::default().ionization(energy_mev, m)
}

pub fn radiative_stopping(energy_mev: f64, m: &MaterialSpec) -> f64 {
    StoppingModel::default().radiative(energy_mev, m)
}

pub fn total_stopping(energy_mev: f64, m: &MaterialSpec) -> Result<StoppingBreakdown> {
    StoppingModel::default().total(energy_mev, m)
}

/// `points` log-spaced energies on `[lo, hi]`, endpoints included.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo) || points < 2 {
        return Err(Error::config(format!(
            "log grid needs 0 < lo < hi and at least 2 points (lo={lo}, hi={hi}, points={points})"
        )));
    }
    let (l0, l1) = (lo.ln(), hi.ln());
    let n = (points - 1) as f64;
    Ok((0..points)
        .map(|i| match i {
            0 => lo,
            _ if i == points - 1 => hi,
            _ => (l0 + (l1 - l0) * i as f64 / n).exp(),
        })
        .collect())
}
