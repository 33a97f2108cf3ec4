use std::fmt;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use nvdamage::displacement::{displacement_threshold_beam_energy, total_vacancy_rate};
use nvdamage::nvmodel::predict_nv;
use nvdamage::specfit::{
    self, analyze_pl, exp_residuals, fit_exponential, fit_gaussian, fit_lorentzian, peak_residuals, Calibration,
    DebyeWaller, PeakShape, PlWindows, Spectrum, SpectrumKind,
};
use nvdamage::stopping::{log_grid, StoppingModel};
use nvdamage::transport::{
    apply_fluence, default_step_um, fluence_sweep, gaussian_beam_map, propagate_with, BeamShape, BeamSpec,
};
use nvdamage::MaterialSpec;

use crate::output::{open_sink, Provenance};
use crate::{BeamArgs, Command, Common, Preset, ProfileShape};

pub const MATERIAL_DIR_ENV: &str = "NVDAMAGE_MATERIAL_DIR";

#[derive(Debug)]
pub enum CliError {
    Core(nvdamage::Error),
    Io(io::Error),
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use nvdamage::Error::*;
        match self {
            CliError::Core(Domain(_) | Range(_) | FitNotConverged { .. } | Degenerate(_)) => 3,
            CliError::Core(Config(_) | Parse(_)) | CliError::Io(_) | CliError::Usage(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
            CliError::Usage(s) => f.write_str(s),
        }
    }
}

impl From<nvdamage::Error> for CliError {
    fn from(e: nvdamage::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T = ()> = Result<T, CliError>;

pub fn run(cmd: Command) -> CliResult {
    match cmd {
        Command::StoppingTable {
            common,
            emin_mev,
            emax_mev,
            points,
            no_density_effect,
            no_shell_correction,
        } => stopping_table(
            &common,
            emin_mev,
            emax_mev,
            points,
            !no_density_effect,
            !no_shell_correction,
        ),
        Command::XsectionTable {
            common,
            emin_mev,
            emax_mev,
            points,
            step_um,
        } => xsection_table(&common, emin_mev, emax_mev, points, step_um),
        Command::Profile { common, beam } => profile(&common, &beam),
        Command::Map {
            common,
            beam,
            x_extent_um,
            nx,
            depth_stride,
        } => map(&common, &beam, x_extent_um, nx, depth_stride),
        Command::Sweep {
            common,
            energy_mev,
            fluences,
            fluence_min,
            fluence_max,
            points,
            probe_um,
        } => sweep(
            &common,
            &energy_mev,
            fluences,
            fluence_min,
            fluence_max,
            points,
            probe_um,
        ),
        Command::Threshold { common } => threshold(&common),
        Command::Predict {
            common,
            vacancy_ppm,
            from_profile,
            nitrogen_ppm,
            yield_,
        } => predict(&common, vacancy_ppm, from_profile.as_deref(), nitrogen_ppm, yield_),
        Command::AnalyzePl {
            common,
            input,
            calibration,
            nv_minus_nm,
            nv_zero_nm,
            half_width_nm,
            s_minus,
            s_zero,
            k532,
        } => {
            let windows = PlWindows {
                nv_minus_nm,
                nv_zero_nm,
                half_width_nm,
            };
            let dw = DebyeWaller { s_minus, s_zero, k532 };
            analyze(&common, &input, calibration.as_deref(), &windows, &dw)
        }
        Command::FitOdmr {
            common,
            input,
            photodiode_volts,
            photon_rate,
            residuals,
        } => fit_odmr(&common, &input, photodiode_volts, photon_rate, residuals.as_deref()),
        Command::FitT1 {
            common,
            input,
            residuals,
        } => fit_t1(&common, &input, residuals.as_deref()),
        Command::FitProfile {
            common,
            input,
            residuals,
        } => fit_profile(&common, &input, residuals.as_deref()),
    }
}

/// Resolves `--material`: built-in name, existing path, then `$NVDAMAGE_MATERIAL_DIR/<name>`.
pub fn load_material(spec: &str) -> CliResult<MaterialSpec> {
    if spec == "diamond" {
        return Ok(MaterialSpec::diamond());
    }
    let direct = PathBuf::from(spec);
    if direct.is_file() {
        return Ok(MaterialSpec::from_file(&direct)?);
    }
    if let Some(dir) = std::env::var_os(MATERIAL_DIR_ENV) {
        let dir = PathBuf::from(dir);
        for candidate in [dir.join(spec), dir.join(format!("{spec}.mat"))] {
            if candidate.is_file() {
                return Ok(MaterialSpec::from_file(&candidate)?);
            }
        }
    }
    Err(CliError::Usage(format!(
        "material `{spec}` not found (not built in, not a file, not in ${MATERIAL_DIR_ENV})"
    )))
}

fn material_provenance(p: &mut Provenance, m: &MaterialSpec) {
    p.push("material", &m.name)
        .push("z", m.z)
        .push("a", m.a)
        .push("atom_density_cm3", m.atom_density)
        .push("mass_density_gcm3", m.mass_density)
        .push("ionization_ev", m.mean_ionization_potential)
        .push("displacement_ev", m.displacement_energy);
}

fn begin(common: &Common, command: &'static str) -> CliResult<(MaterialSpec, Provenance)> {
    let m = load_material(&common.material)?;
    let mut p = Provenance::new(command, common.timestamp);
    material_provenance(&mut p, &m);
    Ok((m, p))
}

fn stopping_table(common: &Common, lo: f64, hi: f64, points: usize, density: bool, shell: bool) -> CliResult {
    let (m, mut prov) = begin(common, "stopping-table")?;
    prov.push("emin_mev", lo)
        .push("emax_mev", hi)
        .push("points", points)
        .push("density_effect", density)
        .push("shell_correction", shell);
    let model = StoppingModel {
        density_effect: density,
        shell_correction: shell,
        sternheimer: None,
    };
    let grid = log_grid(lo, hi, points)?;
    let rows = grid
        .iter()
        .map(|&e| model.total(e, &m).map(|b| (e, b)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut w = open_sink(common.output.as_deref())?;
    prov.write_csv_header(&mut w)?;
    writeln!(w, "energy_mev,s_ion_mev_per_cm,s_rad_mev_per_cm,s_total_mev_per_cm")?;
    for (e, b) in rows {
        writeln!(w, "{e},{},{},{}", b.ionization, b.radiative, b.total)?;
    }
    w.flush()?;
    Ok(())
}

fn xsection_table(common: &Common, lo: f64, hi: f64, points: usize, step_um: f64) -> CliResult {
    let (m, mut prov) = begin(common, "xsection-table")?;
    prov.push("emin_mev", lo)
        .push("emax_mev", hi)
        .push("points", points)
        .push("step_um", step_um);
    let grid = log_grid(lo, hi, points)?;
    let rows = grid
        .iter()
        .map(|&e| total_vacancy_rate(e, &m, step_um * 1e-4).map(|r| (e, r)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut w = open_sink(common.output.as_deref())?;
    prov.write_csv_header(&mut w)?;
    writeln!(w, "energy_mev,e_max_ev,sigma_d_barn,n_per_cm,N_per_cm")?;
    for (e, r) in rows {
        writeln!(
            w,
            "{e},{},{},{},{}",
            r.e_max, r.cross_section, r.primary_per_cm, r.total_per_cm
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Beam, slab thickness (cm) and stopping model resolved from preset and flags.
struct Scenario {
    beam: BeamSpec,
    thickness_cm: f64,
    model: StoppingModel,
}

fn resolve_beam(args: &BeamArgs, prov: &mut Provenance) -> CliResult<Scenario> {
    let (energy, fluence, fwhm, thickness_mm, shape) = match args.preset {
        Some(Preset::Ares155) => (Some(155.0), 1.5e18, 500.0, 3.0, ProfileShape::Gaussian),
        Some(Preset::Tem200k) => (Some(0.2), 1e18, 15.0, 0.05, ProfileShape::Uniform),
        None => (None, 1e18, 500.0, 3.0, ProfileShape::Gaussian),
    };
    let energy = args
        .energy_mev
        .or(energy)
        .ok_or_else(|| CliError::Usage("--energy-mev or --preset is required".into()))?;
    let fluence = args.fluence.unwrap_or(fluence);
    let fwhm = args.fwhm_um.unwrap_or(fwhm);
    let thickness_mm = args.thickness_mm.unwrap_or(thickness_mm);
    let step_um = args.step_um.unwrap_or_else(|| default_step_um(energy));
    let shape = args.profile.unwrap_or(shape);
    let beam = BeamSpec {
        energy_mev: energy,
        peak_fluence: fluence,
        fwhm_um: fwhm,
        step_um,
        shape: match shape {
            ProfileShape::Gaussian => BeamShape::Gaussian,
            ProfileShape::Uniform => BeamShape::Uniform,
        },
    };
    beam.validate()?;
    let model = StoppingModel {
        density_effect: !args.no_density_effect,
        shell_correction: !args.no_shell_correction,
        sternheimer: None,
    };
    if let Some(p) = args.preset {
        prov.push("preset", format!("{p:?}").to_lowercase());
    }
    prov.push("energy_mev", energy)
        .push("fluence", fluence)
        .push("fwhm_um", fwhm)
        .push("profile", format!("{shape:?}").to_lowercase())
        .push("thickness_mm", thickness_mm)
        .push("step_um", step_um)
        .push("density_effect", model.density_effect)
        .push("shell_correction", model.shell_correction);
    Ok(Scenario {
        beam,
        thickness_cm: thickness_mm * 0.1,
        model,
    })
}

fn profile(common: &Common, args: &BeamArgs) -> CliResult {
    let (m, mut prov) = begin(common, "profile")?;
    let sc = resolve_beam(args, &mut prov)?;
    let p = propagate_with(&sc.beam, &m, sc.thickness_cm, &sc.model)?;
    let conc = apply_fluence(&p, sc.beam.peak_fluence, &m)?;
    prov.push("exit_energy_mev", p.exit_energy_mev);
    if let Some(s) = p.stopped_at_cm {
        eprintln!("warning: beam stopped at {} um", s * 1e4);
        prov.push("stopped_at_um", s * 1e4);
    }
    let mut w = open_sink(common.output.as_deref())?;
    prov.write_csv_header(&mut w)?;
    writeln!(w, "depth_um,energy_mev,vac_per_cm,conc_ppm")?;
    for (r, c) in p.records.iter().zip(&conc) {
        writeln!(w, "{},{},{},{}", depth_um(r.depth_cm), r.energy_mev, r.vac_per_cm, c)?;
    }
    w.flush()?;
    Ok(())
}

/// Depth in um with step-accumulation noise below 1e-9 um dropped.
fn depth_um(depth_cm: f64) -> f64 {
    (depth_cm * 1e13).round() / 1e9
}

fn map(common: &Common, args: &BeamArgs, x_extent: Option<f64>, nx: usize, stride: usize) -> CliResult {
    if stride == 0 {
        return Err(CliError::Usage("--depth-stride must be at least 1".into()));
    }
    let (m, mut prov) = begin(common, "map")?;
    let sc = resolve_beam(args, &mut prov)?;
    let extent = x_extent.unwrap_or(1.5 * sc.beam.fwhm_um);
    prov.push("x_extent_um", extent)
        .push("nx", nx)
        .push("depth_stride", stride);
    let p = propagate_with(&sc.beam, &m, sc.thickness_cm, &sc.model)?;
    let vmap = gaussian_beam_map(&p, &sc.beam, &m, extent, nx)?;
    let mut w = open_sink(common.output.as_deref())?;
    prov.write_csv_header(&mut w)?;
    write!(w, "depth_um\\x_um")?;
    for x in &vmap.x_um {
        write!(w, ",{x}")?;
    }
    writeln!(w)?;
    for (depth, row) in vmap.depth_um.iter().zip(&vmap.values).step_by(stride) {
        write!(w, "{}", (depth * 1e9).round() / 1e9)?;
        for v in row {
            write!(w, ",{v}")?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

fn sweep(
    common: &Common,
    energies: &[f64],
    fluences: Option<Vec<f64>>,
    fmin: f64,
    fmax: f64,
    points: usize,
    probe_um: f64,
) -> CliResult {
    let (m, mut prov) = begin(common, "sweep")?;
    let fluences = match fluences {
        Some(f) => f,
        None => log_grid(fmin, fmax, points)?,
    };
    prov.push(
        "energy_mev",
        energies.iter().map(f64::to_string).collect::<Vec<_>>().join(";"),
    )
    .push(
        "fluences",
        fluences.iter().map(f64::to_string).collect::<Vec<_>>().join(";"),
    )
    .push("probe_um", probe_um);
    let mut curves = Vec::with_capacity(energies.len());
    for &e in energies {
        let c = fluence_sweep(e, &m, &fluences, probe_um)?;
        if c.beyond_range {
            eprintln!("warning: probe depth {probe_um} um is beyond the damage range at {e} MeV");
        }
        curves.push(c);
    }
    let mut w = open_sink(common.output.as_deref())?;
    prov.write_csv_header(&mut w)?;
    writeln!(w, "energy_mev,fluence,conc_ppm,beyond_range")?;
    for c in &curves {
        for (f, ppm) in &c.points {
            writeln!(w, "{},{f},{ppm},{}", c.energy_mev, c.beyond_range)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn threshold(common: &Common) -> CliResult {
    let (m, prov) = begin(common, "threshold")?;
    let t = displacement_threshold_beam_energy(&m);
    let mut w = open_sink(common.output.as_deref())?;
    prov.write_csv_header(&mut w)?;
    writeln!(w, "threshold_kev")?;
    writeln!(w, "{t:.2}")?;
    w.flush()?;
    Ok(())
}

fn predict(
    common: &Common,
    vacancy_ppm: Option<f64>,
    from_profile: Option<&Path>,
    nitrogen_ppm: f64,
    yield_: f64,
) -> CliResult {
    let (_, mut prov) = begin(common, "predict")?;
    prov.push("nitrogen_ppm", nitrogen_ppm)
        .push("yield", yield_)
        .push("nitrogen_cap", "nitrogen_ppm/2 (model choice)");
    let mut w = open_sink(common.output.as_deref())?;
    match (vacancy_ppm, from_profile) {
        (Some(v), _) => {
            let p = predict_nv(v, nitrogen_ppm, yield_)?;
            if p.budget_limited {
                eprintln!("warning: NV- limited by the nitrogen budget");
            }
            prov.write_csv_header(&mut w)?;
            writeln!(w, "vacancy_ppm,nitrogen_ppm,nv_minus_ppm,budget_limited")?;
            writeln!(
                w,
                "{},{},{},{}",
                p.vacancy_ppm, p.nitrogen_ppm, p.nv_minus_ppm, p.budget_limited
            )?;
        }
        (None, Some(path)) => {
            prov.push("from_profile", path.display());
            let text = std::fs::read_to_string(path)?;
            let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
            let header = lines
                .next()
                .ok_or_else(|| CliError::Usage(format!("{} has no header row", path.display())))?;
            let col = header
                .split(',')
                .position(|h| h.trim() == "conc_ppm" || h.trim() == "vacancy_ppm")
                .ok_or_else(|| CliError::Usage("profile CSV needs a conc_ppm column".into()))?;
            let mut out = Vec::new();
            let mut limited = 0usize;
            for line in lines {
                let cell = line.split(',').nth(col).unwrap_or("").trim();
                let v: f64 = cell
                    .parse()
                    .map_err(|_| CliError::Core(nvdamage::Error::Parse(format!("bad conc_ppm value `{cell}`"))))?;
                let p = predict_nv(v, nitrogen_ppm, yield_)?;
                limited += usize::from(p.budget_limited);
                out.push(format!("{line},{},{}", p.nv_minus_ppm, p.budget_limited));
            }
            if limited > 0 {
                eprintln!("warning: {limited} row(s) limited by the nitrogen budget");
            }
            prov.write_csv_header(&mut w)?;
            writeln!(w, "{header},nv_minus_ppm,budget_limited")?;
            for line in out {
                writeln!(w, "{line}")?;
            }
        }
        (None, None) => return Err(CliError::Usage("--vacancy-ppm or --from-profile is required".into())),
    }
    w.flush()?;
    Ok(())
}

fn read_spectrum(kind: SpectrumKind, path: &Path) -> CliResult<Spectrum> {
    let text = std::fs::read_to_string(path)?;
    Ok(Spectrum::from_csv(kind, &text)?)
}

fn write_report(common: &Common, prov: &Provenance, body: serde_json::Value) -> CliResult {
    let mut report = prov.to_json();
    if let (Some(r), serde_json::Value::Object(b)) = (report.as_object_mut(), body) {
        r.extend(b);
    }
    let mut w = open_sink(common.output.as_deref())?;
    serde_json::to_writer_pretty(&mut w, &report).map_err(io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn write_residuals(prov: &Provenance, path: Option<&Path>, rows: &[[f64; 4]]) -> CliResult {
    let Some(path) = path else {
        return Ok(());
    };
    let mut w = open_sink(Some(path))?;
    prov.write_csv_header(&mut w)?;
    writeln!(w, "abscissa,data,fit,residual")?;
    for r in rows {
        writeln!(w, "{},{},{},{}", r[0], r[1], r[2], r[3])?;
    }
    w.flush()?;
    Ok(())
}

fn json<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).unwrap_or(serde_json::Value::Null)
}

fn analyze(
    common: &Common,
    input: &Path,
    calibration: Option<&Path>,
    windows: &PlWindows,
    dw: &DebyeWaller,
) -> CliResult {
    let mut prov = Provenance::new("analyze-pl", common.timestamp);
    prov.push("input", input.display())
        .push("nv_minus_nm", windows.nv_minus_nm)
        .push("nv_zero_nm", windows.nv_zero_nm)
        .push("half_width_nm", windows.half_width_nm)
        .push("s_minus", dw.s_minus)
        .push("s_zero", dw.s_zero)
        .push("k532", dw.k532);
    let cal = match calibration {
        Some(path) => {
            prov.push("calibration", path.display());
            Some(Calibration::parse(&std::fs::read_to_string(path)?)?)
        }
        None => None,
    };
    let s = read_spectrum(SpectrumKind::Pl, input)?;
    let report = analyze_pl(&s, windows, dw, cal.as_ref())?;
    for (name, z) in [("NV-", report.nv_minus), ("NV0", report.nv_zero)] {
        if z.clamped {
            eprintln!("warning: {name} ZPL area was negative after baseline removal; clamped to 0");
        }
    }
    if cal.is_some() {
        prov.push("assumption", "identical acquisition settings for sample and reference");
    }
    write_report(
        common,
        &prov,
        serde_json::json!({
            "nv_minus_area": report.nv_minus.area,
            "nv_zero_area": report.nv_zero.area,
            "nv_minus_clamped": report.nv_minus.clamped,
            "nv_zero_clamped": report.nv_zero.clamped,
            "xi": report.charge.xi,
            "nv_minus_ppm": report.nv_minus_ppm,
            "calibration": cal.map(|c| json(&c)),
        }),
    )
}

fn fit_odmr(
    common: &Common,
    input: &Path,
    volts: Option<f64>,
    rate: Option<f64>,
    residuals: Option<&Path>,
) -> CliResult {
    let mut prov = Provenance::new("fit-odmr", common.timestamp);
    prov.push("input", input.display());
    if let Some(v) = volts {
        prov.push("photodiode_volts", v);
    }
    if let Some(r) = rate {
        prov.push("photon_rate", r);
    }
    let s = read_spectrum(SpectrumKind::Odmr, input)?;
    let fit = fit_lorentzian(&s, None)?;
    let effective = volts.map(|v| specfit::effective_sensitivity(&fit, v)).transpose()?;
    let shot = rate.map(|r| specfit::shot_noise_sensitivity(&fit, r)).transpose()?;
    write_residuals(&prov, residuals, &peak_residuals(&s, &fit, PeakShape::Lorentzian))?;
    write_report(
        common,
        &prov,
        serde_json::json!({
            "model": "lorentzian",
            "fit": json(&fit),
            "effective_sensitivity": effective,
            "shot_noise_sensitivity_t_per_sqrt_hz": shot,
        }),
    )
}

fn fit_t1(common: &Common, input: &Path, residuals: Option<&Path>) -> CliResult {
    let mut prov = Provenance::new("fit-t1", common.timestamp);
    prov.push("input", input.display());
    let s = read_spectrum(SpectrumKind::T1, input)?;
    let fit = fit_exponential(&s)?;
    write_residuals(&prov, residuals, &exp_residuals(&s, &fit))?;
    write_report(
        common,
        &prov,
        serde_json::json!({ "model": "exponential", "fit": json(&fit) }),
    )
}

fn fit_profile(common: &Common, input: &Path, residuals: Option<&Path>) -> CliResult {
    let mut prov = Provenance::new("fit-profile", common.timestamp);
    prov.push("input", input.display());
    let s = read_spectrum(SpectrumKind::Profile, input)?;
    let fit = fit_gaussian(&s)?;
    write_residuals(&prov, residuals, &peak_residuals(&s, &fit, PeakShape::Gaussian))?;
    write_report(
        common,
        &prov,
        serde_json::json!({ "model": "gaussian", "fit": json(&fit) }),
    )
}
