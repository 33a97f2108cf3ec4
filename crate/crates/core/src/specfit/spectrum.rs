use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Minimum number of samples accepted by any fit.
pub const MIN_FIT_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SpectrumKind {
    /// Photoluminescence, abscissa in nm.
    Pl,
    /// Microwave sweep, abscissa in MHz.
    Odmr,
    /// Relaxometry delay, abscissa in µs.
    T1,
    /// Lateral concentration profile, abscissa in µm.
    Profile,
}

impl fmt::Display for SpectrumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SpectrumKind::Pl => "PL",
            SpectrumKind::Odmr => "ODMR",
            SpectrumKind::T1 => "T1",
            SpectrumKind::Profile => "PROFILE",
        };
        f.write_str(s)
    }
}

/// An ordered series of (abscissa, value) samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub kind: SpectrumKind,
    x: Vec<f64>,
    y: Vec<f64>,
}

impl Spectrum {
    pub fn new(kind: SpectrumKind, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::Parse(format!(
                "abscissa and value columns differ in length ({} vs {})",
                x.len(),
                y.len()
            )));
        }
        if x.is_empty() {
            return Err(Error::Parse("spectrum has no samples".into()));
        }
        if let Some(bad) = x.iter().chain(&y).find(|v| !v.is_finite()) {
            return Err(Error::Parse(format!("non-finite sample {bad}")));
        }
        if let Some(i) = x.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::Parse(format!(
                "abscissa must be strictly increasing (row {}: {} after {})",
                i + 2,
                x[i + 1],
                x[i]
            )));
        }
        Ok(Spectrum { kind, x, y })
    }

    /// Reads two comma-separated columns. A non-numeric first line is taken as the
    /// header; blank lines and `#` comments are skipped.
    pub fn from_csv(kind: SpectrumKind, text: &str) -> Result<Self> {
        let mut x = Vec::new();
        let mut y = Vec::new();
        let mut first = true;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split(',').map(str::trim);
            let (a, b) = match (cols.next(), cols.next()) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    return Err(Error::Parse(format!(
                        "line {}: expected two columns, got `{line}`",
                        lineno + 1
                    )))
                }
            };
            match (a.parse::<f64>(), b.parse::<f64>()) {
                (Ok(a), Ok(b)) => {
                    x.push(a);
                    y.push(b);
                }
                _ if first => {}
                _ => {
                    return Err(Error::Parse(format!(
                        "line {}: cannot parse `{line}` as numbers",
                        lineno + 1
                    )))
                }
            }
            first = false;
        }
        Spectrum::new(kind, x, y)
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub(crate) fn require_fit(&self, allowed: &[SpectrumKind]) -> Result<()> {
        if !allowed.contains(&self.kind) {
            return Err(Error::config(format!(
                "cannot fit a {} spectrum with this model",
                self.kind
            )));
        }
        if self.len() < MIN_FIT_POINTS {
            return Err(Error::config(format!(
                "fit needs at least {MIN_FIT_POINTS} points, got {}",
                self.len()
            )));
        }
        let (lo, hi) = self
            .y
            .iter()
            .fold((f64::MAX, f64::MIN), |(l, h), &v| (l.min(v), h.max(v)));
        if hi - lo <= 1e-12 * hi.abs().max(lo.abs()).max(f64::MIN_POSITIVE) {
            return Err(Error::Degenerate(format!(
                "{} signal is constant; no feature to fit",
                self.kind
            )));
        }
        Ok(())
    }
}
