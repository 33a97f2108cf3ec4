//! `nvdamage`: electron-irradiation vacancy simulation and NV spectral analysis.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 domain or fit error.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "nvdamage",
    version,
    about = "Electron irradiation of diamond: vacancy simulation and NV analysis"
)]
#[command(arg_required_else_help = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Material key=value file, or a name looked up in $NVDAMAGE_MATERIAL_DIR
    /// ("diamond" is built in).
    #[arg(long, value_name = "FILE|NAME", default_value = "diamond")]
    pub material: String,
    /// Output file ("-" or absent: standard output).
    #[arg(long, short, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Add a generation timestamp to the provenance header.
    #[arg(long)]
    pub timestamp: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// 155 MeV, 1.5e18 e/cm2, 500 um FWHM Gaussian, 3 mm slab, 1 um steps.
    Ares155,
    /// 200 keV, 15 um uniform disk, 50 um slab, 100 nm steps.
    Tem200k,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileShape {
    Gaussian,
    Uniform,
}

#[derive(Debug, Args, Clone)]
pub struct BeamArgs {
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Beam kinetic energy, MeV.
    #[arg(long, allow_negative_numbers = true)]
    pub energy_mev: Option<f64>,
    /// Peak fluence, electrons/cm2.
    #[arg(long)]
    pub fluence: Option<f64>,
    /// Beam FWHM (diameter for a uniform profile), um.
    #[arg(long)]
    pub fwhm_um: Option<f64>,
    /// Slab thickness, mm.
    #[arg(long)]
    pub thickness_mm: Option<f64>,
    /// Propagation step, um (default 0.1 below 1 MeV, 1 above).
    #[arg(long)]
    pub step_um: Option<f64>,
    /// Transverse beam profile.
    #[arg(long, value_enum)]
    pub profile: Option<ProfileShape>,
    /// Disable the density-effect correction.
    #[arg(long)]
    pub no_density_effect: bool,
    /// Disable the shell correction.
    #[arg(long)]
    pub no_shell_correction: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ionization, radiative and total stopping power on a log energy grid.
    StoppingTable {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.01)]
        emin_mev: f64,
        #[arg(long, default_value_t = 1000.0)]
        emax_mev: f64,
        #[arg(long, default_value_t = 61)]
        points: usize,
        #[arg(long)]
        no_density_effect: bool,
        #[arg(long)]
        no_shell_correction: bool,
    },
    /// Displacement cross-section and vacancy rates on a log energy grid.
    XsectionTable {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.1)]
        emin_mev: f64,
        #[arg(long, default_value_t = 1000.0)]
        emax_mev: f64,
        #[arg(long, default_value_t = 41)]
        points: usize,
        /// Step length entering the primary-rate expression, um.
        #[arg(long, default_value_t = 1.0)]
        step_um: f64,
    },
    /// Beam energy and vacancy concentration versus depth.
    Profile {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        beam: BeamArgs,
    },
    /// Vacancy concentration over transverse position x depth.
    Map {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        beam: BeamArgs,
        /// Half-width of the transverse grid, um (default 1.5 x FWHM).
        #[arg(long)]
        x_extent_um: Option<f64>,
        /// Number of transverse samples (odd).
        #[arg(long, default_value_t = 61)]
        nx: usize,
        /// Keep every n-th depth row.
        #[arg(long, default_value_t = 1)]
        depth_stride: usize,
    },
    /// Vacancy concentration at a fixed depth versus fluence.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Beam energies, MeV (comma separated).
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.2, 155.0])]
        energy_mev: Vec<f64>,
        /// Explicit fluences (comma separated); overrides the log range.
        #[arg(long, value_delimiter = ',')]
        fluences: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1e16)]
        fluence_min: f64,
        #[arg(long, default_value_t = 1e21)]
        fluence_max: f64,
        #[arg(long, default_value_t = 11)]
        points: usize,
        /// Probe depth, um.
        #[arg(long, default_value_t = 0.0)]
        probe_um: f64,
    },
    /// Lowest beam energy able to displace a lattice atom.
    Threshold {
        #[command(flatten)]
        common: Common,
    },
    /// NV- concentration from vacancies with a nitrogen budget.
    Predict {
        #[command(flatten)]
        common: Common,
        #[arg(
            long,
            allow_negative_numbers = true,
            conflicts_with = "from_profile",
            required_unless_present = "from_profile"
        )]
        vacancy_ppm: Option<f64>,
        /// CSV produced by `profile` (uses its conc_ppm column).
        #[arg(long, value_name = "CSV")]
        from_profile: Option<PathBuf>,
        #[arg(long)]
        nitrogen_ppm: f64,
        #[arg(long = "yield", default_value_t = nvdamage::nvmodel::DEFAULT_YIELD)]
        yield_: f64,
    },
    /// ZPL areas, charge-state ratio and calibrated NV- concentration from a PL spectrum.
    AnalyzePl {
        #[command(flatten)]
        common: Common,
        /// Two-column CSV (wavelength nm, counts).
        input: PathBuf,
        /// key=value file with area_ref and ppm_ref.
        #[arg(long)]
        calibration: Option<PathBuf>,
        #[arg(long, default_value_t = nvdamage::specfit::NV_MINUS_ZPL_NM)]
        nv_minus_nm: f64,
        #[arg(long, default_value_t = nvdamage::specfit::NV_ZERO_ZPL_NM)]
        nv_zero_nm: f64,
        #[arg(long, default_value_t = nvdamage::specfit::DEFAULT_HALF_WIDTH_NM)]
        half_width_nm: f64,
        #[arg(long, default_value_t = 4.3)]
        s_minus: f64,
        #[arg(long, default_value_t = 3.3)]
        s_zero: f64,
        #[arg(long, default_value_t = 2.5)]
        k532: f64,
    },
    /// Lorentzian fit of an ODMR resonance and the derived sensitivities.
    FitOdmr {
        #[command(flatten)]
        common: Common,
        /// Two-column CSV (frequency MHz, signal).
        input: PathBuf,
        /// Photodiode voltage for the effective sensitivity.
        #[arg(long)]
        photodiode_volts: Option<f64>,
        /// Detected photon rate (1/s) for the shot-noise sensitivity.
        #[arg(long)]
        photon_rate: Option<f64>,
        /// Write (abscissa, data, fit, residual) rows here.
        #[arg(long, value_name = "CSV")]
        residuals: Option<PathBuf>,
    },
    /// Single-exponential T1 fit of a relaxometry trace.
    FitT1 {
        #[command(flatten)]
        common: Common,
        /// Two-column CSV (delay us, signal).
        input: PathBuf,
        #[arg(long, value_name = "CSV")]
        residuals: Option<PathBuf>,
    },
    /// Gaussian fit of a lateral concentration profile.
    FitProfile {
        #[command(flatten)]
        common: Common,
        /// Two-column CSV (position um, concentration).
        input: PathBuf,
        #[arg(long, value_name = "CSV")]
        residuals: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
