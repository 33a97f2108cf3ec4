//! Writes the seeded synthetic datasets used by the CLI tests and the README.
//!
//! `cargo run -p nvdamage --example make_sample_data -- <out-dir>`

use std::fs;
use std::io::Write;
use std::path::Path;

use nvdamage::specfit::{Spectrum, SpectrumKind};
use nvdamage::synth::{self, linspace, Line, Noise};

fn write(dir: &Path, name: &str, header: &str, comment: &str, s: &Spectrum) -> std::io::Result<()> {
    let mut f = fs::File::create(dir.join(name))?;
    writeln!(f, "# synthetic: {comment}")?;
    writeln!(f, "{header}")?;
    for (x, y) in s.x().iter().zip(s.y()) {
        writeln!(f, "{x},{y}")?;
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| ".".into());
    let dir = Path::new(&dir);
    fs::create_dir_all(dir)?;

    let odmr = synth::lorentzian_spectrum(
        SpectrumKind::Odmr,
        &linspace(2840.0, 2900.0, 241),
        [2870.0, 8.0, -0.02, 1.0],
        Some(Noise {
            sigma: 2e-4,
            seed: 20240601,
        }),
    )?;
    write(
        dir,
        "odmr.csv",
        "frequency_mhz,signal",
        "lorentzian 2870 MHz, fwhm 8 MHz, contrast 2%",
        &odmr,
    )?;

    let t1 = synth::exponential_trace(
        &linspace(0.0, 5000.0, 101),
        [800.0, 0.3, 1.0],
        Some(Noise { sigma: 3e-3, seed: 11 }),
    )?;
    write(
        dir,
        "t1.csv",
        "tau_us,signal",
        "T1 800 us, amplitude 0.3, offset 1",
        &t1,
    )?;

    let profile = synth::gaussian_spectrum(
        SpectrumKind::Profile,
        &linspace(-1000.0, 1000.0, 161),
        [12.0, 462.0, 0.6, 0.01],
        Some(Noise { sigma: 6e-3, seed: 5 }),
    )?;
    write(
        dir,
        "profile.csv",
        "x_um,nv_ppm",
        "gaussian fwhm 462 um centred at 12 um",
        &profile,
    )?;

    let lines = [
        Line {
            center_nm: 575.0,
            sigma_nm: 0.8,
            area: 60.0,
        },
        Line {
            center_nm: 638.0,
            sigma_nm: 0.8,
            area: 150.0,
        },
        Line {
            center_nm: 690.0,
            sigma_nm: 30.0,
            area: 20000.0,
        },
    ];
    let pl = synth::pl_spectrum(
        &linspace(550.0, 800.0, 1001),
        (40.0, 0.02),
        &lines,
        Some(Noise { sigma: 0.5, seed: 7 }),
    )?;
    write(
        dir,
        "pl.csv",
        "wavelength_nm,counts",
        "NV0 and NV- ZPLs over a phonon sideband",
        &pl,
    )?;

    fs::write(
        dir.join("calibration.txt"),
        "# reference sample measured with the same acquisition settings\narea_ref = 150\nppm_ref = 4.5\n",
    )?;
    Ok(())
}
