//! Lorentzian, Gaussian and single-exponential fits with data-driven starting points.

use std::f64::consts::LN_2;

use serde::Serialize;

use super::lm::{minimize, LmConfig};
use super::spectrum::{Spectrum, SpectrumKind};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeakFit {
    pub center: f64,
    pub fwhm: f64,
    /// Signed: negative for dips.
    pub amplitude: f64,
    pub offset: f64,
    /// |amplitude / offset|; 0 when the offset vanishes.
    pub contrast: f64,
    /// Root-mean-square residual, in the units of the data.
    pub residual_rms: f64,
    /// Standard errors of (center, fwhm, amplitude, offset).
    pub std_errors: [f64; 4],
    pub iterations: usize,
    pub converged: bool,
}

impl PeakFit {
    pub fn params(&self) -> [f64; 4] {
        [self.center, self.fwhm, self.amplitude, self.offset]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpFit {
    pub t1: f64,
    pub amplitude: f64,
    pub offset: f64,
    pub residual_rms: f64,
    /// Standard errors of (t1, amplitude, offset).
    pub std_errors: [f64; 3],
    pub iterations: usize,
    pub converged: bool,
}

/// offset + amplitude·(w/2)² / ((x − center)² + (w/2)²)
pub fn lorentzian(x: f64, center: f64, fwhm: f64, amplitude: f64, offset: f64) -> f64 {
    let hw = 0.5 * fwhm;
    let d = x - center;
    offset + amplitude * hw * hw / (d * d + hw * hw)
}

/// offset + amplitude·exp(−4 ln2 (x − center)² / w²)
pub fn gaussian(x: f64, center: f64, fwhm: f64, amplitude: f64, offset: f64) -> f64 {
    let d = x - center;
    offset + amplitude * (-4.0 * LN_2 * d * d / (fwhm * fwhm)).exp()
}

/// offset + amplitude·exp(−τ / t1)
pub fn exponential(tau: f64, t1: f64, amplitude: f64, offset: f64) -> f64 {
    offset + amplitude * (-tau / t1).exp()
}

fn lorentzian_grad(x: f64, p: &[f64], g: &mut [f64]) -> f64 {
    let (c, w, a, o) = (p[0], p[1], p[2], p[3]);
    let hw2 = 0.25 * w * w;
    let d = x - c;
    let den = d * d + hw2;
    let shape = hw2 / den;
    g[0] = a * hw2 * 2.0 * d / (den * den);
    g[1] = a * 0.5 * w * d * d / (den * den);
    g[2] = shape;
    g[3] = 1.0;
    o + a * shape
}

fn gaussian_grad(x: f64, p: &[f64], g: &mut [f64]) -> f64 {
    let (c, w, a, o) = (p[0], p[1], p[2], p[3]);
    let d = x - c;
    let k = 4.0 * LN_2;
    let e = (-k * d * d / (w * w)).exp();
    g[0] = a * e * 2.0 * k * d / (w * w);
    g[1] = a * e * 2.0 * k * d * d / (w * w * w);
    g[2] = e;
    g[3] = 1.0;
    o + a * e
}

fn exponential_grad(x: f64, p: &[f64], g: &mut [f64]) -> f64 {
    let (t, a, o) = (p[0], p[1], p[2]);
    let e = (-x / t).exp();
    g[0] = a * e * x / (t * t);
    g[1] = e;
    g[2] = 1.0;
    o + a * e
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Starting point (center, fwhm, amplitude, offset): extremum location, width at
/// half extremum, median baseline.
pub fn peak_initial_guess(x: &[f64], y: &[f64]) -> [f64; 4] {
    let offset = median(y);
    let (imax, amp) = y
        .iter()
        .map(|v| v - offset)
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .unwrap_or((0, 0.0));
    let half = 0.5 * amp.abs();
    let crossing = |range: &mut dyn Iterator<Item = usize>, toward: isize| -> Option<f64> {
        for i in range {
            let d = (y[i] - offset).abs();
            if d < half {
                let j = (i as isize - toward) as usize;
                let dj = (y[j] - offset).abs();
                let t = if dj != d { (dj - half) / (dj - d) } else { 0.5 };
                return Some(x[j] + t * (x[i] - x[j]));
            }
        }
        None
    };
    let left = crossing(&mut (0..imax).rev(), -1);
    let right = crossing(&mut (imax + 1..x.len()), 1);
    let span = x[x.len() - 1] - x[0];
    let fwhm = match (left, right) {
        (Some(l), Some(r)) => r - l,
        (Some(l), None) => 2.0 * (x[imax] - l),
        (None, Some(r)) => 2.0 * (r - x[imax]),
        (None, None) => span / 10.0,
    };
    let fwhm = if fwhm > 0.0 { fwhm } else { span / 10.0 };
    [x[imax], fwhm, amp, offset]
}

fn finish_peak(s: &Spectrum, sol: super::lm::LmSolution) -> PeakFit {
    let p = &sol.params;
    let (amplitude, offset) = (p[2], p[3]);
    PeakFit {
        center: p[0],
        fwhm: p[1].abs(),
        amplitude,
        offset,
        contrast: if offset != 0.0 { (amplitude / offset).abs() } else { 0.0 },
        residual_rms: sol.residual_rms(s.len()),
        std_errors: [
            sol.std_errors[0],
            sol.std_errors[1],
            sol.std_errors[2],
            sol.std_errors[3],
        ],
        iterations: sol.iterations,
        converged: true,
    }
}

/// Lorentzian fit of an ODMR resonance or a PL peak.
pub fn fit_lorentzian(s: &Spectrum, initial_guess: Option<[f64; 4]>) -> Result<PeakFit> {
    s.require_fit(&[SpectrumKind::Odmr, SpectrumKind::Pl])?;
    let p0 = initial_guess.unwrap_or_else(|| peak_initial_guess(s.x(), s.y()));
    let sol = minimize(s.x(), s.y(), &p0, &LmConfig::default(), lorentzian_grad)?;
    Ok(finish_peak(s, sol))
}

/// Gaussian fit of a lateral concentration profile.
pub fn fit_gaussian(s: &Spectrum) -> Result<PeakFit> {
    s.require_fit(&[SpectrumKind::Profile])?;
    let p0 = peak_initial_guess(s.x(), s.y());
    let sol = minimize(s.x(), s.y(), &p0, &LmConfig::default(), gaussian_grad)?;
    Ok(finish_peak(s, sol))
}

/// Starting point (t1, amplitude, offset) for a decay toward the last samples.
pub fn exponential_initial_guess(x: &[f64], y: &[f64]) -> [f64; 3] {
    let n = x.len();
    let tail = (n / 10).max(1);
    let offset = y[n - tail..].iter().sum::<f64>() / tail as f64;
    let d0 = y[0] - offset;
    let span = x[n - 1] - x[0];
    let target = d0.abs() / std::f64::consts::E;
    let t1 = x
        .iter()
        .zip(y)
        .find(|(_, &v)| (v - offset).abs() <= target)
        .map(|(&xi, _)| xi - x[0])
        .filter(|t| *t > 0.0)
        .unwrap_or(span / 3.0);
    [t1, d0 * (x[0] / t1).exp(), offset]
}

/// Single-exponential fit of a relaxometry trace.
///
/// A constant trace has no decay to measure and is rejected with
/// [`Error::Degenerate`](crate::Error::Degenerate) rather than returning an infinite T₁.
pub fn fit_exponential(s: &Spectrum) -> Result<ExpFit> {
    s.require_fit(&[SpectrumKind::T1])?;
    let p0 = exponential_initial_guess(s.x(), s.y());
    let sol = minimize(s.x(), s.y(), &p0, &LmConfig::default(), exponential_grad)?;
    let p = &sol.params;
    if !(p[0] > 0.0) {
        return Err(crate::Error::Degenerate(format!(
            "fitted T1 is non-positive ({}); trace does not decay",
            p[0]
        )));
    }
    Ok(ExpFit {
        t1: p[0],
        amplitude: p[1],
        offset: p[2],
        residual_rms: sol.residual_rms(s.len()),
        std_errors: [sol.std_errors[0], sol.std_errors[1], sol.std_errors[2]],
        iterations: sol.iterations,
        converged: true,
    })
}

/// (abscissa, data, fit, residual) rows for a fitted peak.
pub fn peak_residuals(s: &Spectrum, f: &PeakFit, shape: PeakShape) -> Vec<[f64; 4]> {
    s.x()
        .iter()
        .zip(s.y())
        .map(|(&x, &y)| {
            let m = match shape {
                PeakShape::Lorentzian => lorentzian(x, f.center, f.fwhm, f.amplitude, f.offset),
                PeakShape::Gaussian => gaussian(x, f.center, f.fwhm, f.amplitude, f.offset),
            };
            [x, y, m, y - m]
        })
        .collect()
}

pub fn exp_residuals(s: &Spectrum, f: &ExpFit) -> Vec<[f64; 4]> {
    s.x()
        .iter()
        .zip(s.y())
        .map(|(&x, &y)| {
            let m = exponential(x, f.t1, f.amplitude, f.offset);
            [x, y, m, y - m]
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeakShape {
    Lorentzian,
    Gaussian,
}
