//! Zero-phonon-line areas and the Debye–Waller charge-state decomposition.

use serde::Serialize;

use super::spectrum::Spectrum;
use crate::error::{Error, Result};

pub const NV_MINUS_ZPL_NM: f64 = 638.0;
pub const NV_ZERO_ZPL_NM: f64 = 575.0;
pub const DEFAULT_HALF_WIDTH_NM: f64 = 5.0;

/// Samples averaged at each window edge to anchor the baseline.
const EDGE_POINTS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZplArea {
    pub area: f64,
    /// The baseline-subtracted integral was negative and has been set to 0.
    pub clamped: bool,
}

/// Integrates the signal over `[lo, hi]` after removing a straight baseline drawn
/// through the mean of the first and last three samples inside the window.
pub fn zpl_area(s: &Spectrum, window: (f64, f64)) -> Result<ZplArea> {
    let (lo, hi) = window;
    let x = s.x();
    let y = s.y();
    if !(lo < hi) || lo < x[0] || hi > x[x.len() - 1] {
        return Err(Error::Range(format!(
            "window [{lo}, {hi}] not inside data range [{}, {}]",
            x[0],
            x[x.len() - 1]
        )));
    }
    let start = x.partition_point(|&v| v < lo);
    let end = x.partition_point(|&v| v <= hi);
    let (wx, wy) = (&x[start..end], &y[start..end]);
    if wx.len() < 2 * EDGE_POINTS {
        return Err(Error::Range(format!(
            "window [{lo}, {hi}] holds {} samples; need at least {}",
            wx.len(),
            2 * EDGE_POINTS
        )));
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let n = wx.len();
    let (x0, y0) = (mean(&wx[..EDGE_POINTS]), mean(&wy[..EDGE_POINTS]));
    let (x1, y1) = (mean(&wx[n - EDGE_POINTS..]), mean(&wy[n - EDGE_POINTS..]));
    let slope = (y1 - y0) / (x1 - x0);
    let net: Vec<f64> = wx
        .iter()
        .zip(wy)
        .map(|(&xi, &yi)| yi - (y0 + slope * (xi - x0)))
        .collect();
    let area: f64 = wx
        .windows(2)
        .zip(net.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum();
    Ok(if area < 0.0 {
        ZplArea {
            area: 0.0,
            clamped: true,
        }
    } else {
        ZplArea { area, clamped: false }
    })
}

/// Debye–Waller factors and the relative 532 nm excitation efficiency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DebyeWaller {
    pub s_minus: f64,
    pub s_zero: f64,
    pub k532: f64,
}

impl Default for DebyeWaller {
    fn default() -> Self {
        DebyeWaller {
            s_minus: 4.3,
            s_zero: 3.3,
            k532: 2.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChargeState {
    pub area_minus: f64,
    pub area_zero: f64,
    /// [NV⁻] / ([NV⁻] + [NV⁰]); NV⁺ is not modelled.
    pub xi: f64,
}

/// ξ = I₋e^{S₋} / (k·I₀e^{S₀} + I₋e^{S₋}).
pub fn charge_ratio(area_minus: f64, area_zero: f64, dw: &DebyeWaller) -> Result<ChargeState> {
    if !(area_minus >= 0.0) || !(area_zero >= 0.0) {
        return Err(Error::domain(format!(
            "ZPL areas must be non-negative (NV-: {area_minus}, NV0: {area_zero})"
        )));
    }
    if area_minus == 0.0 && area_zero == 0.0 {
        return Err(Error::domain("both ZPL areas are zero; charge ratio undefined"));
    }
    let xi = if area_minus == 0.0 {
        0.0
    } else {
        1.0 / (1.0 + dw.k532 * (area_zero / area_minus) * (dw.s_zero - dw.s_minus).exp())
    };
    Ok(ChargeState {
        area_minus,
        area_zero,
        xi,
    })
}

/// Reference sample measured under identical acquisition settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Calibration {
    pub area_ref: f64,
    pub ppm_ref: f64,
}

impl Calibration {
    pub fn new(area_ref: f64, ppm_ref: f64) -> Result<Self> {
        if !(area_ref > 0.0) || !(ppm_ref > 0.0) {
            return Err(Error::config(format!(
                "calibration needs positive area_ref and ppm_ref (got {area_ref}, {ppm_ref})"
            )));
        }
        Ok(Calibration { area_ref, ppm_ref })
    }

    /// key=value text with keys `area_ref` and `ppm_ref`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut area_ref = None;
        let mut ppm_ref = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key=value", lineno + 1)))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            match k.trim() {
                "area_ref" => area_ref = Some(v),
                "ppm_ref" => ppm_ref = Some(v),
                other => return Err(Error::Parse(format!("unknown calibration key `{other}`"))),
            }
        }
        match (area_ref, ppm_ref) {
            (Some(a), Some(p)) => Calibration::new(a, p),
            _ => Err(Error::config("calibration file must define area_ref and ppm_ref")),
        }
    }
}

/// Absolute NV⁻ concentration by comparison with a calibrated reference.
pub fn nv_concentration(area_minus: f64, calibration: Option<&Calibration>) -> Result<f64> {
    let cal = calibration.ok_or_else(|| Error::config("NV concentration requires a calibration"))?;
    if !(area_minus >= 0.0) {
        return Err(Error::domain(format!(
            "ZPL area must be non-negative, got {area_minus}"
        )));
    }
    Ok(cal.ppm_ref * (area_minus / cal.area_ref))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlWindows {
    pub nv_minus_nm: f64,
    pub nv_zero_nm: f64,
    pub half_width_nm: f64,
}

impl Default for PlWindows {
    fn default() -> Self {
        PlWindows {
            nv_minus_nm: NV_MINUS_ZPL_NM,
            nv_zero_nm: NV_ZERO_ZPL_NM,
            half_width_nm: DEFAULT_HALF_WIDTH_NM,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlReport {
    pub windows: PlWindows,
    pub nv_minus: ZplArea,
    pub nv_zero: ZplArea,
    pub charge: ChargeState,
    pub nv_minus_ppm: Option<f64>,
}

/// Both ZPL areas, ξ and, when a calibration is given, [NV⁻].
pub fn analyze_pl(
    s: &Spectrum,
    windows: &PlWindows,
    dw: &DebyeWaller,
    calibration: Option<&Calibration>,
) -> Result<PlReport> {
    let hw = windows.half_width_nm;
    let nv_minus = zpl_area(s, (windows.nv_minus_nm - hw, windows.nv_minus_nm + hw))?;
    let nv_zero = zpl_area(s, (windows.nv_zero_nm - hw, windows.nv_zero_nm + hw))?;
    let charge = charge_ratio(nv_minus.area, nv_zero.area, dw)?;
    let nv_minus_ppm = match calibration {
        Some(c) => Some(nv_concentration(nv_minus.area, Some(c))?),
        None => None,
    };
    Ok(PlReport {
        windows: *windows,
        nv_minus,
        nv_zero,
        charge,
        nv_minus_ppm,
    })
}
