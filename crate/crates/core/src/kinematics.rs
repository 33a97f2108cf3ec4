use serde::Serialize;

use crate::constants::ELECTRON_REST_ENERGY_MEV;
use crate::error::{Error, Result};

/// Relativistic state of an electron with a given kinetic energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Kinematics {
    pub kinetic_energy: f64,
    pub gamma: f64,
    pub beta: f64,
}

impl Kinematics {
    /// Builds the state for kinetic energy `energy_mev`.
    pub fn electron(energy_mev: f64) -> Result<Self> {
        if !(energy_mev >= 0.0) || !energy_mev.is_finite() {
            return Err(Error::domain(format!(
                "kinetic energy must be finite and non-negative, got {energy_mev} MeV"
            )));
        }
        let gamma = 1.0 + energy_mev / ELECTRON_REST_ENERGY_MEV;
        // 1 - 1/γ² = τ(τ+2)/(τ+1)² with τ = E/m₀c²; avoids cancellation at small E.
        let tau = energy_mev / ELECTRON_REST_ENERGY_MEV;
        let beta = (tau * (tau + 2.0)).sqrt() / (tau + 1.0);
        Ok(Kinematics {
            kinetic_energy: energy_mev,
            gamma,
            beta,
        })
    }

    /// βγ, the momentum in units of m₀c.
    pub fn beta_gamma(&self) -> f64 {
        self.beta * self.gamma
    }
}

pub fn kinematics(energy_mev: f64) -> Result<Kinematics> {
    Kinematics::electron(energy_mev)
}
