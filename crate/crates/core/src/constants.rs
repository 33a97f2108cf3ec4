//! Physical constants (CODATA 2018) in the units used throughout the crate:
//! energies in MeV, lengths in cm.

/// Electron rest energy m₀c², MeV.
pub const ELECTRON_REST_ENERGY_MEV: f64 = 0.510_998_950_00;

/// Classical electron radius, cm.
pub const CLASSICAL_ELECTRON_RADIUS_CM: f64 = 2.817_940_326_2e-13;

/// Atomic mass unit energy equivalent, MeV.
pub const ATOMIC_MASS_UNIT_MEV: f64 = 931.494_102_42;

/// 1 barn in cm².
pub const BARN_CM2: f64 = 1.0e-24;

/// Inverse fine-structure constant as it appears in the McKinley–Feshbach expansion (Z/137).
pub const MCKINLEY_FESHBACH_ALPHA_INV: f64 = 137.0;

/// Lattice-site density equivalent of 1 ppm in diamond, atoms·cm⁻³.
pub const PPM_DENSITY_CM3: f64 = 1.75e17;

/// NV⁻ gyromagnetic ratio, Hz/T (2.80 MHz/G).
pub const NV_GYROMAGNETIC_HZ_PER_T: f64 = 28.0e9;

pub const MEV_PER_EV: f64 = 1.0e-6;
pub const CM_PER_UM: f64 = 1.0e-4;
