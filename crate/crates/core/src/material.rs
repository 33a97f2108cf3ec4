//! Target material definitions and the key=value preset file format.
//!
//! ```text
//! # diamond
//! z = 6
//! a = 12.01
//! atom_density_cm3 = 1.76e23
//! mass_density_gcm3 = 3.515
//! ionization_ev = 79
//! displacement_ev = 35
//! ```

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::constants::ATOMIC_MASS_UNIT_MEV;
use crate::error::{Error, Result};

const KEYS: [&str; 6] = [
    "z",
    "a",
    "atom_density_cm3",
    "mass_density_gcm3",
    "ionization_ev",
    "displacement_ev",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaterialSpec {
    pub name: String,
    /// Atomic number.
    pub z: f64,
    /// Mass number.
    pub a: f64,
    /// Atoms per cm³.
    pub atom_density: f64,
    /// g·cm⁻³.
    pub mass_density: f64,
    /// Mean ionization potential, eV.
    pub mean_ionization_potential: f64,
    /// Displacement threshold energy, eV.
    pub displacement_energy: f64,
}

impl MaterialSpec {
    pub fn new(
        name: impl Into<String>,
        z: f64,
        a: f64,
        atom_density: f64,
        mass_density: f64,
        mean_ionization_potential: f64,
        displacement_energy: f64,
    ) -> Result<Self> {
        let m = MaterialSpec {
            name: name.into(),
            z,
            a,
            atom_density,
            mass_density,
            mean_ionization_potential,
            displacement_energy,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn diamond() -> Self {
        MaterialSpec {
            name: "diamond".to_string(),
            z: 6.0,
            a: 12.01,
            atom_density: 1.76e23,
            mass_density: 3.515,
            mean_ionization_potential: 79.0,
            displacement_energy: 35.0,
        }
    }

    /// Rest energy of the target nucleus Mc², MeV.
    pub fn nucleus_rest_energy(&self) -> f64 {
        self.a * ATOMIC_MASS_UNIT_MEV
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("z", self.z),
            ("a", self.a),
            ("atom_density_cm3", self.atom_density),
            ("mass_density_gcm3", self.mass_density),
            ("ionization_ev", self.mean_ionization_potential),
            ("displacement_ev", self.displacement_energy),
        ];
        for (key, value) in fields {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::config(format!(
                    "material field `{key}` must be finite and positive, got {value}"
                )));
            }
        }
        Ok(())
    }

    /// Parses the key=value material format. Blank lines and `#` comments are ignored;
    /// every key must appear exactly once.
    pub fn parse(name: &str, text: &str) -> Result<Self> {
        let mut values: [Option<f64>; 6] = [None; 6];
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key=value, got `{line}`", lineno + 1)))?;
            let key = key.trim();
            let idx = KEYS
                .iter()
                .position(|k| *k == key)
                .ok_or_else(|| Error::Parse(format!("line {}: unknown material key `{key}`", lineno + 1)))?;
            if values[idx].is_some() {
                return Err(Error::Parse(format!(
                    "line {}: duplicate material key `{key}`",
                    lineno + 1
                )));
            }
            let parsed = value
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: bad value for `{key}`: {e}", lineno + 1)))?;
            values[idx] = Some(parsed);
        }
        let mut out = [0.0; 6];
        for (i, v) in values.iter().enumerate() {
            out[i] = v.ok_or_else(|| Error::Parse(format!("missing material key `{}`", KEYS[i])))?;
        }
        MaterialSpec::new(name, out[0], out[1], out[2], out[3], out[4], out[5])
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read material file {}: {e}", path.display())))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "material".to_string());
        Self::parse(&name, &text)
    }

    pub fn to_key_value(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "z={}", self.z);
        let _ = writeln!(s, "a={}", self.a);
        let _ = writeln!(s, "atom_density_cm3={:e}", self.atom_density);
        let _ = writeln!(s, "mass_density_gcm3={}", self.mass_density);
        let _ = writeln!(s, "ionization_ev={}", self.mean_ionization_potential);
        let _ = writeln!(s, "displacement_ev={}", self.displacement_energy);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diamond_preset() {
        let d = MaterialSpec::diamond();
        assert_eq!(d.z, 6.0);
        assert_eq!(d.a, 12.01);
        assert_eq!(d.atom_density, 1.76e23);
        assert_eq!(d.mean_ionization_potential, 79.0);
        assert_eq!(d.displacement_energy, 35.0);
        d.validate().unwrap();
        assert!((d.nucleus_rest_energy() - 11_187.244).abs() < 1e-3);
    }

    #[test]
    fn key_value_round_trip() {
        let d = MaterialSpec::diamond();
        let back = MaterialSpec::parse("diamond", &d.to_key_value()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn parse_errors() {
        let base = MaterialSpec::diamond().to_key_value();
        let missing = base.replace("displacement_ev=35\n", "");
        assert!(matches!(MaterialSpec::parse("x", &missing), Err(Error::Parse(_))));

        let unknown = format!("{base}density=1\n");
        assert!(matches!(MaterialSpec::parse("x", &unknown), Err(Error::Parse(_))));

        let dup = format!("{base}z=6\n");
        assert!(matches!(MaterialSpec::parse("x", &dup), Err(Error::Parse(_))));

        let zero = base.replace("z=6", "z=0");
        assert!(matches!(MaterialSpec::parse("x", &zero), Err(Error::Config(_))));
    }

    #[test]
    fn comments_and_spacing() {
        let text = "# silicon-ish\n z = 14 \na=28.09\natom_density_cm3 = 5e22 # per cm3\n\
                    mass_density_gcm3=2.33\nionization_ev=173\ndisplacement_ev=21\n";
        let m = MaterialSpec::parse("si", text).unwrap();
        assert_eq!(m.z, 14.0);
        assert_eq!(m.atom_density, 5e22);
    }
}
