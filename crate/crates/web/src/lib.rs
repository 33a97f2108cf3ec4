//! Browser bindings for the vacancy simulator.
//!
//! Every export returns a flat `Float64Array`; the layout is documented per function.
//! The plain-Rust `*_rows` functions carry the logic and are what the tests exercise.

use nvdamage::stopping::{log_grid, StoppingModel};
use nvdamage::transport::{apply_fluence, gaussian_beam_map, propagate_with, BeamShape, BeamSpec};
use nvdamage::MaterialSpec;
use wasm_bindgen::prelude::*;

/// Cap on depth steps per request so a slider drag cannot freeze the page.
pub const MAX_STEPS: f64 = 20_000.0;
/// Rows kept in a map after depth decimation.
pub const MAX_MAP_ROWS: usize = 200;

fn model(density_effect: bool, shell_correction: bool) -> StoppingModel {
    StoppingModel {
        density_effect,
        shell_correction,
        sternheimer: None,
    }
}

fn beam(energy_mev: f64, fluence: f64, fwhm_um: f64, thickness_um: f64, uniform: bool) -> nvdamage::Result<BeamSpec> {
    let step_um = (thickness_um / MAX_STEPS).max(nvdamage::transport::default_step_um(energy_mev));
    let b = BeamSpec {
        energy_mev,
        peak_fluence: fluence,
        fwhm_um,
        step_um,
        shape: if uniform {
            BeamShape::Uniform
        } else {
            BeamShape::Gaussian
        },
    };
    b.validate()?;
    Ok(b)
}

/// Depth profile as `[depth_um, energy_mev, conc_ppm]` triples.
pub fn profile_rows(energy_mev: f64, fluence: f64, thickness_um: f64) -> nvdamage::Result<Vec<f64>> {
    let m = MaterialSpec::diamond();
    let b = beam(energy_mev, fluence, 1.0, thickness_um, false)?;
    let p = propagate_with(&b, &m, thickness_um * 1e-4, &StoppingModel::default())?;
    let conc = apply_fluence(&p, fluence, &m)?;
    Ok(p.records
        .iter()
        .zip(conc)
        .flat_map(|(r, c)| [r.depth_cm * 1e4, r.energy_mev, c])
        .collect())
}

/// Lateral map as `[nx, rows, x_0..x_nx, depth_0..depth_rows, values row-major]`.
pub fn map_rows(
    energy_mev: f64,
    fluence: f64,
    fwhm_um: f64,
    thickness_um: f64,
    uniform: bool,
    nx: usize,
) -> nvdamage::Result<Vec<f64>> {
    let m = MaterialSpec::diamond();
    let b = beam(energy_mev, fluence, fwhm_um, thickness_um, uniform)?;
    let p = propagate_with(&b, &m, thickness_um * 1e-4, &StoppingModel::default())?;
    let map = gaussian_beam_map(&p, &b, &m, 1.5 * fwhm_um, nx)?;
    let stride = map.depth_um.len().div_ceil(MAX_MAP_ROWS).max(1);
    let rows: Vec<usize> = (0..map.depth_um.len()).step_by(stride).collect();
    let mut out = vec![map.x_um.len() as f64, rows.len() as f64];
    out.extend(&map.x_um);
    out.extend(rows.iter().map(|&i| map.depth_um[i]));
    for &i in &rows {
        out.extend(&map.values[i]);
    }
    Ok(out)
}

/// Stopping power on a log grid as `[energy_mev, s_ion, s_rad, s_total]` quadruples, MeV/cm.
pub fn stopping_rows(
    emin_mev: f64,
    emax_mev: f64,
    points: usize,
    density_effect: bool,
    shell_correction: bool,
) -> nvdamage::Result<Vec<f64>> {
    let m = MaterialSpec::diamond();
    let sm = model(density_effect, shell_correction);
    let mut out = Vec::with_capacity(points * 4);
    for e in log_grid(emin_mev, emax_mev, points)? {
        let b = sm.total(e, &m)?;
        out.extend([e, b.ionization, b.radiative, b.total]);
    }
    Ok(out)
}

fn js(e: nvdamage::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen(js_name = depthProfile)]
pub fn depth_profile(energy_mev: f64, fluence: f64, thickness_um: f64) -> Result<Vec<f64>, JsError> {
    profile_rows(energy_mev, fluence, thickness_um).map_err(js)
}

#[wasm_bindgen(js_name = vacancyMap)]
pub fn vacancy_map(
    energy_mev: f64,
    fluence: f64,
    fwhm_um: f64,
    thickness_um: f64,
    uniform: bool,
    nx: usize,
) -> Result<Vec<f64>, JsError> {
    map_rows(energy_mev, fluence, fwhm_um, thickness_um, uniform, nx).map_err(js)
}

#[wasm_bindgen(js_name = stoppingCurves)]
pub fn stopping_curves(
    emin_mev: f64,
    emax_mev: f64,
    points: usize,
    density_effect: bool,
    shell_correction: bool,
) -> Result<Vec<f64>, JsError> {
    stopping_rows(emin_mev, emax_mev, points, density_effect, shell_correction).map_err(js)
}
