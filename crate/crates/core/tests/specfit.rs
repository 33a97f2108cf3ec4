use nvdamage::specfit::*;
use nvdamage::synth::{self, linspace, Line, Noise};
use nvdamage::transport::{gaussian_beam_map, propagate, BeamSpec};
use nvdamage::{Error, MaterialSpec};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

const ODMR: [f64; 4] = [2870.0, 8.0, -0.02, 1.0];

fn odmr_axis() -> Vec<f64> {
    linspace(2830.0, 2910.0, 241)
}

#[test]
fn lorentzian_exact_recovery() {
    let s = synth::lorentzian_spectrum(SpectrumKind::Odmr, &odmr_axis(), ODMR, None).unwrap();
    let f = fit_lorentzian(&s, None).unwrap();
    for (got, want) in f.params().iter().zip(ODMR) {
        assert!(rel(*got, want) < 1e-6, "{got} vs {want}");
    }
    assert!((f.contrast - 0.02).abs() < 1e-8);
    assert!(f.converged);
    assert!(f.residual_rms < 1e-9);
}

#[test]
fn lorentzian_noisy_recovery() {
    let noise = Some(Noise {
        sigma: 0.01 * 0.02,
        seed: 20_240_601,
    });
    let s = synth::lorentzian_spectrum(SpectrumKind::Odmr, &odmr_axis(), ODMR, noise).unwrap();
    let f = fit_lorentzian(&s, None).unwrap();
    for (got, want) in f.params().iter().zip(ODMR) {
        assert!(rel(*got, want) < 0.02, "{got} vs {want}");
    }
    assert!((0.0..=1.0).contains(&f.contrast));
    assert!(rel(f.residual_rms, 2e-4) < 0.2);
    assert!(f.std_errors.iter().all(|e| e.is_finite() && *e > 0.0));
}

#[test]
fn lorentzian_with_user_guess_and_pl_peak() {
    let x = linspace(630.0, 646.0, 161);
    let p = [638.0, 1.5, 200.0, 10.0];
    let s = synth::lorentzian_spectrum(SpectrumKind::Pl, &x, p, None).unwrap();
    let f = fit_lorentzian(&s, Some([637.0, 3.0, 100.0, 0.0])).unwrap();
    for (got, want) in f.params().iter().zip(p) {
        assert!(rel(*got, want) < 1e-6);
    }
}

#[test]
fn fits_are_deterministic() {
    let noise = Some(Noise { sigma: 5e-4, seed: 3 });
    let s = synth::lorentzian_spectrum(SpectrumKind::Odmr, &odmr_axis(), ODMR, noise).unwrap();
    let a = fit_lorentzian(&s, None).unwrap();
    let b = fit_lorentzian(&s.clone(), None).unwrap();
    assert_eq!(a, b);
}

#[test]
fn wrong_kind_and_short_input() {
    let s = synth::lorentzian_spectrum(SpectrumKind::T1, &odmr_axis(), ODMR, None).unwrap();
    assert!(matches!(fit_lorentzian(&s, None), Err(Error::Config(_))));
    let s = synth::lorentzian_spectrum(SpectrumKind::Odmr, &linspace(2860.0, 2880.0, 7), ODMR, None).unwrap();
    assert!(matches!(fit_lorentzian(&s, None), Err(Error::Config(_))));
}

#[test]
fn exponential_recovery() {
    let x = linspace(0.0, 5000.0, 101);
    let p = [800.0, 0.3, 1.0];
    let s = synth::exponential_trace(&x, p, None).unwrap();
    let f = fit_exponential(&s).unwrap();
    assert!(rel(f.t1, p[0]) < 1e-6);
    assert!(rel(f.amplitude, p[1]) < 1e-6);
    assert!(rel(f.offset, p[2]) < 1e-6);

    let noisy = synth::exponential_trace(&x, p, Some(Noise { sigma: 0.003, seed: 11 })).unwrap();
    let f = fit_exponential(&noisy).unwrap();
    assert!(rel(f.t1, p[0]) < 0.03, "{}", f.t1);
}

#[test]
fn exponential_constant_signal_is_degenerate() {
    let x = linspace(0.0, 100.0, 20);
    let s = Spectrum::new(SpectrumKind::T1, x, vec![0.7; 20]).unwrap();
    assert!(matches!(fit_exponential(&s), Err(Error::Degenerate(_))));
}

#[test]
fn gaussian_recovery() {
    let x = linspace(-1500.0, 1500.0, 121);
    let p = [12.0, 462.0, 0.6, 0.01];
    let s = synth::gaussian_spectrum(SpectrumKind::Profile, &x, p, None).unwrap();
    let f = fit_gaussian(&s).unwrap();
    for (got, want) in f.params().iter().zip(p) {
        assert!(rel(*got, want) < 1e-6, "{got} vs {want}");
    }
    let noisy = synth::gaussian_spectrum(SpectrumKind::Profile, &x, p, Some(Noise { sigma: 0.006, seed: 5 })).unwrap();
    let f = fit_gaussian(&noisy).unwrap();
    assert!(rel(f.fwhm, 462.0) < 0.02);
    assert!((f.fwhm - 462.0).abs() < 10.0);
}

#[test]
fn simulated_map_cut_has_beam_width() {
    let m = MaterialSpec::diamond();
    let beam = BeamSpec::gaussian(155.0, 1.5e18, 500.0).unwrap();
    let p = propagate(&beam, &m, 0.005).unwrap();
    let map = gaussian_beam_map(&p, &beam, &m, 1500.0, 151).unwrap();
    let cut = Spectrum::new(SpectrumKind::Profile, map.x_um.clone(), map.values[20].clone()).unwrap();
    let f = fit_gaussian(&cut).unwrap();
    assert!(rel(f.fwhm, 500.0) < 0.01, "{}", f.fwhm);
    assert!(f.center.abs() < 1e-6);
}

#[test]
fn residual_rows() {
    let x = linspace(0.0, 10.0, 11);
    let s = synth::exponential_trace(&x, [2.0, 1.0, 0.0], None).unwrap();
    let f = fit_exponential(&s).unwrap();
    let rows = exp_residuals(&s, &f);
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| r[3].abs() < 1e-9 && r[1] == r[2] + r[3]));
}

#[test]
fn zpl_area_flat_and_gaussian() {
    let x = linspace(560.0, 660.0, 2001);
    let flat = synth::pl_spectrum(&x, (100.0, 0.4), &[], None).unwrap();
    let a = zpl_area(&flat, (633.0, 643.0)).unwrap();
    assert!(a.area.abs() < 1e-9);

    let line = Line {
        center_nm: 638.0,
        sigma_nm: 0.8,
        area: 250.0,
    };
    let s = synth::pl_spectrum(&x, (100.0, 0.4), &[line], None).unwrap();
    let a = zpl_area(&s, (633.0, 643.0)).unwrap();
    assert!(rel(a.area, 250.0) < 0.01, "{}", a.area);
    assert!(!a.clamped);
}

#[test]
fn zpl_area_errors_and_clamp() {
    let x = linspace(600.0, 660.0, 601);
    let dip = Line {
        center_nm: 638.0,
        sigma_nm: 1.0,
        area: -50.0,
    };
    let s = synth::pl_spectrum(&x, (10.0, 0.0), &[dip], None).unwrap();
    let a = zpl_area(&s, (633.0, 643.0)).unwrap();
    assert!(a.clamped);
    assert_eq!(a.area, 0.0);
    assert!(matches!(zpl_area(&s, (570.0, 580.0)), Err(Error::Range(_))));
    assert!(matches!(zpl_area(&s, (640.0, 640.2)), Err(Error::Range(_))));
}

fn pl_sample(scale: f64, seed: u64) -> Spectrum {
    let x = linspace(550.0, 700.0, 1501);
    let lines = [
        Line {
            center_nm: 638.0,
            sigma_nm: 0.9,
            area: 400.0 * scale,
        },
        Line {
            center_nm: 575.0,
            sigma_nm: 0.9,
            area: 30.0 * scale,
        },
        // phonon sideband
        Line {
            center_nm: 680.0,
            sigma_nm: 25.0,
            area: 20_000.0 * scale,
        },
    ];
    synth::pl_spectrum(&x, (5.0, 0.0), &lines, Some(Noise { sigma: 0.01, seed })).unwrap()
}

#[test]
fn pristine_versus_irradiated() {
    let dw = DebyeWaller::default();
    let irradiated = analyze_pl(&pl_sample(1.0, 1), &PlWindows::default(), &dw, None).unwrap();
    let pristine = analyze_pl(&pl_sample(1e-3, 2), &PlWindows::default(), &dw, None).unwrap();
    let ratio = irradiated.nv_minus.area / pristine.nv_minus.area;
    assert!(ratio > 500.0 && ratio < 2000.0, "{ratio}");
    assert!(irradiated.charge.xi > 0.9, "{}", irradiated.charge.xi);
    assert!(irradiated.nv_minus_ppm.is_none());
}

#[test]
fn charge_ratio_closed_forms() {
    let dw = DebyeWaller::default();
    let eq = charge_ratio(3.0, 3.0, &dw).unwrap().xi;
    assert!((eq - 1.0 / (1.0 + 2.5 * (-1.0f64).exp())).abs() < 1e-12);
    assert!((eq - 0.520_915_105_357_916_6).abs() < 1e-12);
    assert_eq!(charge_ratio(3.0, 0.0, &dw).unwrap().xi, 1.0);
    assert_eq!(charge_ratio(0.0, 3.0, &dw).unwrap().xi, 0.0);
    assert!(matches!(charge_ratio(0.0, 0.0, &dw), Err(Error::Domain(_))));
    assert!(charge_ratio(-1.0, 1.0, &dw).is_err());
}

#[test]
fn calibration() {
    let cal = Calibration::parse("area_ref = 250\nppm_ref = 0.3 # reference\n").unwrap();
    assert_eq!(nv_concentration(250.0, Some(&cal)).unwrap(), 0.3);
    assert!((nv_concentration(500.0, Some(&cal)).unwrap() - 0.6).abs() < 1e-15);
    assert!(matches!(nv_concentration(1.0, None), Err(Error::Config(_))));
    assert!(Calibration::parse("area_ref=1\n").is_err());
    assert!(Calibration::parse("area_ref=0\nppm_ref=1\n").is_err());
    assert!(Calibration::parse("area=1\nppm_ref=1\n").is_err());
}

fn fit_with(fwhm: f64, contrast: f64) -> PeakFit {
    PeakFit {
        center: 2870.0,
        fwhm,
        amplitude: -contrast,
        offset: 1.0,
        contrast,
        residual_rms: 0.0,
        std_errors: [0.0; 4],
        iterations: 0,
        converged: true,
    }
}

#[test]
fn sensitivity_values() {
    assert_eq!(effective_sensitivity(&fit_with(1.0, 1.0), 1.0).unwrap(), 1.0);
    let a = effective_sensitivity(&fit_with(6.0, 0.01), 0.4).unwrap();
    let b = effective_sensitivity(&fit_with(6.0, 0.02), 0.4).unwrap();
    assert!(rel(b, a / 2.0) < 1e-15);
    assert!(matches!(
        effective_sensitivity(&fit_with(6.0, 0.0), 0.4),
        Err(Error::Domain(_))
    ));
    assert!(effective_sensitivity(&fit_with(6.0, 0.01), 0.0).is_err());

    let eta = shot_noise_sensitivity(&fit_with(1.0, 0.01), 1e12).unwrap();
    assert!(rel(eta, 2.749_286_996_141_075e-9) < 1e-12, "{eta}");
    assert!(
        rel(
            shot_noise_sensitivity_raw(1.0, 1.0, 1.0, 1.0).unwrap(),
            4.0 / (3.0 * 3f64.sqrt())
        ) < 1e-15
    );
    let e4 = shot_noise_sensitivity(&fit_with(1.0, 0.01), 4e12).unwrap();
    assert!(rel(e4, eta / 2.0) < 1e-14);
    assert!(shot_noise_sensitivity(&fit_with(1.0, 0.0), 1e12).is_err());
}

#[test]
fn irradiated_region_improves_sensitivity() {
    // Stand-in for the mapped ODMR: pristine region has ~1/1000 of the PL and a
    // lower contrast.
    let irr = effective_sensitivity(&fit_with(7.0, 0.012), 2.0).unwrap();
    let pri = effective_sensitivity(&fit_with(7.5, 0.009), 2.0 / 1000.0).unwrap();
    let gain = pri / irr;
    assert!(gain > 30.0 && gain < 60.0, "{gain}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lorentzian_round_trip(c in 2850.0f64..2890.0, w in 3.0f64..15.0, a in -0.05f64..-0.005, o in 0.5f64..2.0) {
        let p = [c, w, a, o];
        let s = synth::lorentzian_spectrum(SpectrumKind::Odmr, &odmr_axis(), p, None).unwrap();
        let f = fit_lorentzian(&s, None).unwrap();
        for (got, want) in f.params().iter().zip(p) {
            prop_assert!(rel(*got, want) < 1e-6);
        }
    }

    #[test]
    fn gaussian_round_trip(c in -200.0f64..200.0, w in 200.0f64..800.0, a in 0.1f64..2.0, o in 0.01f64..0.5) {
        let p = [c, w, a, o];
        let s = synth::gaussian_spectrum(SpectrumKind::Profile, &linspace(-2000.0, 2000.0, 161), p, None).unwrap();
        let f = fit_gaussian(&s).unwrap();
        for (got, want) in f.params().iter().zip(p) {
            prop_assert!(rel(*got, want) < 1e-6);
        }
    }

    #[test]
    fn exponential_round_trip(t in 100.0f64..2000.0, a in 0.05f64..1.0, o in 0.2f64..2.0) {
        let p = [t, a, o];
        let s = synth::exponential_trace(&linspace(0.0, 6000.0, 121), p, None).unwrap();
        let f = fit_exponential(&s).unwrap();
        prop_assert!(rel(f.t1, t) < 1e-6);
        prop_assert!(rel(f.amplitude, a) < 1e-6);
        prop_assert!(rel(f.offset, o) < 1e-6);
    }

    #[test]
    fn xi_monotone_and_scale_invariant(m in 1e-3f64..1e4, z in 1e-3f64..1e4, k in 1e-3f64..1e3, dm in 1e-3f64..10.0) {
        let dw = DebyeWaller::default();
        let base = charge_ratio(m, z, &dw).unwrap().xi;
        prop_assert!((0.0..=1.0).contains(&base));
        prop_assert!(charge_ratio(m * (1.0 + dm), z, &dw).unwrap().xi >= base);
        prop_assert!(charge_ratio(m, z * (1.0 + dm), &dw).unwrap().xi <= base);
        prop_assert!((charge_ratio(k * m, k * z, &dw).unwrap().xi - base).abs() <= 1e-14);
    }

    #[test]
    fn nv_concentration_linear(area in 0.0f64..1e6, k in 1e-3f64..1e3, aref in 1.0f64..1e5, pref in 1e-3f64..10.0) {
        let cal = Calibration::new(aref, pref).unwrap();
        let a = nv_concentration(area, Some(&cal)).unwrap();
        let b = nv_concentration(k * area, Some(&cal)).unwrap();
        prop_assert!((b - k * a).abs() <= 1e-12 * (k * a).abs());
    }

    #[test]
    fn sensitivity_homogeneity(w in 0.1f64..20.0, c in 1e-3f64..0.5, r in 1e6f64..1e14, k in 0.1f64..10.0) {
        let eta = shot_noise_sensitivity(&fit_with(w, c), r).unwrap();
        let scaled_w = shot_noise_sensitivity(&fit_with(k * w, c), r).unwrap();
        let scaled_r = shot_noise_sensitivity(&fit_with(w, c), k * k * r).unwrap();
        prop_assert!(rel(scaled_w, k * eta) < 1e-13);
        prop_assert!(rel(scaled_r, eta / k) < 1e-13);
    }
}
