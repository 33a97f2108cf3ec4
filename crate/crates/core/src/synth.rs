//! Seeded synthetic spectra with additive Gaussian noise, used as stand-in data
//! and as the ground truth for fit round trips.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::specfit::{exponential, gaussian, lorentzian, Spectrum, SpectrumKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Noise {
    /// Standard deviation, in data units.
    pub sigma: f64,
    pub seed: u64,
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

fn add_noise(y: &mut [f64], noise: Option<Noise>) -> Result<()> {
    let Some(noise) = noise else {
        return Ok(());
    };
    let dist = Normal::new(0.0, noise.sigma)
        .map_err(|e| Error::config(format!("invalid noise sigma {}: {e}", noise.sigma)))?;
    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
    for v in y.iter_mut() {
        *v += dist.sample(&mut rng);
    }
    Ok(())
}

fn build(kind: SpectrumKind, x: &[f64], f: impl Fn(f64) -> f64, noise: Option<Noise>) -> Result<Spectrum> {
    let mut y: Vec<f64> = x.iter().map(|&v| f(v)).collect();
    add_noise(&mut y, noise)?;
    Spectrum::new(kind, x.to_vec(), y)
}

/// Lorentzian line with parameters (center, fwhm, amplitude, offset).
pub fn lorentzian_spectrum(kind: SpectrumKind, x: &[f64], p: [f64; 4], noise: Option<Noise>) -> Result<Spectrum> {
    build(kind, x, |v| lorentzian(v, p[0], p[1], p[2], p[3]), noise)
}

/// Gaussian line with parameters (center, fwhm, amplitude, offset).
pub fn gaussian_spectrum(kind: SpectrumKind, x: &[f64], p: [f64; 4], noise: Option<Noise>) -> Result<Spectrum> {
    build(kind, x, |v| gaussian(v, p[0], p[1], p[2], p[3]), noise)
}

/// Relaxation trace with parameters (t1, amplitude, offset).
pub fn exponential_trace(x: &[f64], p: [f64; 3], noise: Option<Noise>) -> Result<Spectrum> {
    build(SpectrumKind::T1, x, |v| exponential(v, p[0], p[1], p[2]), noise)
}

/// A Gaussian emission line described by its integrated area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub center_nm: f64,
    pub sigma_nm: f64,
    pub area: f64,
}

impl Line {
    pub fn eval(&self, x: f64) -> f64 {
        let d = (x - self.center_nm) / self.sigma_nm;
        self.area / (self.sigma_nm * (2.0 * std::f64::consts::PI).sqrt()) * (-0.5 * d * d).exp()
    }
}

/// PL spectrum: linear background `a + b·(x − x₀)` plus emission lines.
pub fn pl_spectrum(x: &[f64], background: (f64, f64), lines: &[Line], noise: Option<Noise>) -> Result<Spectrum> {
    let x0 = x.first().copied().unwrap_or(0.0);
    build(
        SpectrumKind::Pl,
        x,
        |v| background.0 + background.1 * (v - x0) + lines.iter().map(|l| l.eval(v)).sum::<f64>(),
        noise,
    )
}
