//! Depth stepping of a monoenergetic beam through a homogeneous slab and the
//! resulting vacancy concentration profiles and maps.

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::constants::CM_PER_UM;
use crate::displacement::total_vacancy_rate;
use crate::error::{Error, Result};
use crate::material::MaterialSpec;
use crate::stopping::{StoppingModel, MAX_ENERGY_MEV, MIN_ENERGY_MEV};

/// Transverse fluence distribution of the beam.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BeamShape {
    /// Gaussian with the given FWHM.
    Gaussian,
    /// Flat disk whose diameter is the `fwhm_um` field.
    Uniform,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BeamSpec {
    /// Kinetic energy, MeV.
    pub energy_mev: f64,
    /// Peak fluence, electrons·cm⁻².
    pub peak_fluence: f64,
    /// FWHM of the transverse profile (diameter for a uniform disk), µm.
    pub fwhm_um: f64,
    /// Propagation step, µm.
    pub step_um: f64,
    pub shape: BeamShape,
}

/// 100 nm below 1 MeV, 1 µm above.
pub fn default_step_um(energy_mev: f64) -> f64 {
    if energy_mev < 1.0 {
        0.1
    } else {
        1.0
    }
}

impl BeamSpec {
    pub fn gaussian(energy_mev: f64, peak_fluence: f64, fwhm_um: f64) -> Result<Self> {
        let beam = BeamSpec {
            energy_mev,
            peak_fluence,
            fwhm_um,
            step_um: default_step_um(energy_mev),
            shape: BeamShape::Gaussian,
        };
        beam.validate()?;
        Ok(beam)
    }

    pub fn with_step_um(mut self, step_um: f64) -> Result<Self> {
        self.step_um = step_um;
        self.validate()?;
        Ok(self)
    }

    pub fn with_shape(mut self, shape: BeamShape) -> Self {
        self.shape = shape;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(MIN_ENERGY_MEV..=MAX_ENERGY_MEV).contains(&self.energy_mev) {
            return Err(Error::domain(format!(
                "beam energy {} MeV outside [{MIN_ENERGY_MEV}, {MAX_ENERGY_MEV}] MeV",
                self.energy_mev
            )));
        }
        if !(self.peak_fluence >= 0.0) || !self.peak_fluence.is_finite() {
            return Err(Error::domain(format!(
                "fluence must be non-negative, got {}",
                self.peak_fluence
            )));
        }
        if !(self.fwhm_um > 0.0) {
            return Err(Error::config(format!(
                "beam width must be positive, got {} um",
                self.fwhm_um
            )));
        }
        if !(self.step_um > 0.0) || !self.step_um.is_finite() {
            return Err(Error::config(format!("step must be positive, got {} um", self.step_um)));
        }
        Ok(())
    }

    /// Fraction of the peak fluence received at transverse offset `x_um`.
    pub fn transverse_weight(&self, x_um: f64) -> f64 {
        match self.shape {
            BeamShape::Gaussian => (-4.0 * LN_2 * x_um * x_um / (self.fwhm_um * self.fwhm_um)).exp(),
            BeamShape::Uniform => {
                if x_um.abs() <= 0.5 * self.fwhm_um {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DepthRecord {
    pub depth_cm: f64,
    /// Beam energy on entering this step, MeV.
    pub energy_mev: f64,
    /// Stable vacancies per cm per electron.
    pub vac_per_cm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DepthProfile {
    pub step_cm: f64,
    pub thickness_cm: f64,
    pub records: Vec<DepthRecord>,
    /// Energy leaving the slab (0 if the beam stopped inside), MeV.
    pub exit_energy_mev: f64,
    /// Depth where the energy fell below the stopping-model floor.
    pub stopped_at_cm: Option<f64>,
}

impl DepthProfile {
    /// Deepest record with a non-zero vacancy rate, cm.
    pub fn damage_range_cm(&self) -> Option<f64> {
        self.records
            .iter()
            .rev()
            .find(|r| r.vac_per_cm > 0.0)
            .map(|r| r.depth_cm)
    }

    /// Record covering `depth_cm`, i.e. the last one starting at or before it.
    pub fn record_at(&self, depth_cm: f64) -> Option<&DepthRecord> {
        let idx = self
            .records
            .partition_point(|r| r.depth_cm <= depth_cm + 1e-12 * self.step_cm);
        idx.checked_sub(1).map(|i| &self.records[i])
    }
}

/// Steps the beam through `thickness_cm` of material with the default stopping model.
pub fn propagate(beam: &BeamSpec, m: &MaterialSpec, thickness_cm: f64) -> Result<DepthProfile> {
    propagate_with(beam, m, thickness_cm, &StoppingModel::default())
}

/// Explicit first-order stepping E ← E − S(E)·ΔL. The vacancy rate of each step is
/// evaluated at the energy entering it. Stepping ends at the back face or when the
/// energy drops below [`MIN_ENERGY_MEV`].
pub fn propagate_with(
    beam: &BeamSpec,
    m: &MaterialSpec,
    thickness_cm: f64,
    model: &StoppingModel,
) -> Result<DepthProfile> {
    beam.validate()?;
    m.validate()?;
    if !(thickness_cm > 0.0) || !thickness_cm.is_finite() {
        return Err(Error::config(format!(
            "thickness must be positive, got {thickness_cm} cm"
        )));
    }
    let step_cm = beam.step_um * CM_PER_UM;
    let ratio = thickness_cm / step_cm;
    if ratio < 1.0 - 1e-9 {
        return Err(Error::config(format!(
            "step {} um exceeds slab thickness {} um",
            beam.step_um,
            thickness_cm / CM_PER_UM
        )));
    }
    let n_steps = (ratio - 1e-9).ceil().max(1.0) as usize;

    let mut records = Vec::with_capacity(n_steps);
    let mut energy = beam.energy_mev;
    let mut stopped_at_cm = None;
    for i in 0..n_steps {
        let depth = i as f64 * step_cm;
        if energy < MIN_ENERGY_MEV {
            stopped_at_cm = Some(depth);
            break;
        }
        let dl = step_cm.min(thickness_cm - depth);
        let rates = total_vacancy_rate(energy, m, step_cm)?;
        records.push(DepthRecord {
            depth_cm: depth,
            energy_mev: energy,
            vac_per_cm: rates.total_per_cm,
        });
        let loss = model.total(energy, m)?.total * dl;
        energy = (energy - loss).max(0.0);
    }
    if stopped_at_cm.is_none() && energy < MIN_ENERGY_MEV {
        stopped_at_cm = Some(thickness_cm);
    }
    Ok(DepthProfile {
        step_cm,
        thickness_cm,
        records,
        exit_energy_mev: if stopped_at_cm.is_some() { 0.0 } else { energy },
        stopped_at_cm,
    })
}

/// Converts a per-electron vacancy rate into a concentration in ppm of lattice sites.
pub fn vacancy_ppm(vac_per_cm: f64, fluence: f64, m: &MaterialSpec) -> f64 {
    vac_per_cm * fluence / m.atom_density * 1e6
}

/// Depth-resolved vacancy concentration (ppm) for a uniform fluence.
pub fn apply_fluence(p: &DepthProfile, fluence: f64, m: &MaterialSpec) -> Result<Vec<f64>> {
    if !(fluence >= 0.0) || !fluence.is_finite() {
        return Err(Error::domain(format!("fluence must be non-negative, got {fluence}")));
    }
    Ok(p.records
        .iter()
        .map(|r| vacancy_ppm(r.vac_per_cm, fluence, m))
        .collect())
}

/// Vacancy concentration over transverse position × depth.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VacancyMap {
    pub x_um: Vec<f64>,
    pub depth_um: Vec<f64>,
    /// One row per depth, one column per x, ppm.
    pub values: Vec<Vec<f64>>,
}

impl VacancyMap {
    pub fn column(&self, ix: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[ix]).collect()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().flat_map(|r| r.iter().copied()).fold(0.0, f64::max)
    }
}

/// Symmetric grid of `nx` points on `[-extent, extent]`; the centre point is exactly 0
/// and `x[i] == -x[nx-1-i]` bit for bit.
pub fn symmetric_grid(extent: f64, nx: usize) -> Result<Vec<f64>> {
    if nx < 3 || nx.is_multiple_of(2) {
        return Err(Error::config(format!("nx must be odd and >= 3, got {nx}")));
    }
    if !(extent > 0.0) {
        return Err(Error::config(format!("x extent must be positive, got {extent}")));
    }
    let c = (nx / 2) as f64;
    Ok((0..nx)
        .map(|i| {
            let k = i as f64 - c;
            if k < 0.0 {
                -(extent * (-k) / c)
            } else {
                extent * k / c
            }
        })
        .collect())
}

pub fn gaussian_beam_map(
    p: &DepthProfile,
    beam: &BeamSpec,
    m: &MaterialSpec,
    x_extent_um: f64,
    nx: usize,
) -> Result<VacancyMap> {
    let x_um = symmetric_grid(x_extent_um, nx)?;
    let peak = apply_fluence(p, beam.peak_fluence, m)?;
    let weights: Vec<f64> = x_um.iter().map(|&x| beam.transverse_weight(x)).collect();
    let values = peak.iter().map(|&c| weights.iter().map(|&w| c * w).collect()).collect();
    Ok(VacancyMap {
        x_um,
        depth_um: p.records.iter().map(|r| r.depth_cm / CM_PER_UM).collect(),
        values,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCurve {
    pub energy_mev: f64,
    pub probe_depth_um: f64,
    /// Stable vacancies per cm per electron at the probe depth.
    pub vac_per_cm: f64,
    /// (fluence e·cm⁻², vacancies ppm)
    pub points: Vec<(f64, f64)>,
    /// Set when the probe lies beyond the depth where the beam still displaces atoms.
    pub beyond_range: bool,
}

/// Vacancy concentration at a fixed depth as a function of fluence.
pub fn fluence_sweep(energy_mev: f64, m: &MaterialSpec, fluences: &[f64], probe_depth_um: f64) -> Result<SweepCurve> {
    if fluences.is_empty() {
        return Err(Error::config("fluence list is empty"));
    }
    if let Some(bad) = fluences.iter().find(|f| !(**f >= 0.0)) {
        return Err(Error::domain(format!("fluence must be non-negative, got {bad}")));
    }
    if !(probe_depth_um >= 0.0) {
        return Err(Error::config(format!(
            "probe depth must be non-negative, got {probe_depth_um}"
        )));
    }
    let beam = BeamSpec::gaussian(energy_mev, 0.0, 1.0)?;
    let thickness_cm = (probe_depth_um + beam.step_um) * CM_PER_UM;
    let profile = propagate(&beam, m, thickness_cm)?;
    let vac_per_cm = profile
        .record_at(probe_depth_um * CM_PER_UM)
        .filter(|_| profile.stopped_at_cm.is_none_or(|s| s > probe_depth_um * CM_PER_UM))
        .map_or(0.0, |r| r.vac_per_cm);
    Ok(SweepCurve {
        energy_mev,
        probe_depth_um,
        vac_per_cm,
        points: fluences.iter().map(|&f| (f, vacancy_ppm(vac_per_cm, f, m))).collect(),
        beyond_range: vac_per_cm == 0.0,
    })
}

/// Stable vacancies per cm per electron at the entrance face, using the default step.
pub fn surface_vacancy_rate(energy_mev: f64, m: &MaterialSpec) -> Result<f64> {
    Ok(total_vacancy_rate(energy_mev, m, default_step_um(energy_mev) * CM_PER_UM)?.total_per_cm)
}
