use granular_decay::medium::*;
use granular_decay::quad::{integrate_with_breaks, QuadOptions};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

#[test]
fn i2_closed_form_matches_quadrature_at_random_points() {
    let a = 0.5;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..10 {
        let r = 2.0 * a * 0.95 * rng.random::<f64>();
        let c = 2.0 * rng.random::<f64>() - 1.0;
        let closed = overlap_i2(r, c, a);
        let numeric = overlap_i2_numeric(r, c, a, 1e-14).unwrap();
        let rel = (closed - numeric).abs() / closed.abs();
        assert!(rel <= 1e-4, "r={r} c={c}: {closed} vs {numeric}");
    }
}

#[test]
fn i2_quadrature_at_contact_scale_and_origin() {
    let a = 0.5;
    let v = overlap_i2_numeric(0.0, 0.3, a, 1e-14).unwrap();
    assert!((v - sphere_volume(a) * a * a / 5.0).abs() <= 1e-10);
    let numeric = overlap_i2_numeric(a, 1.0, a, 1e-14).unwrap();
    let closed = overlap_i2(a, 1.0, a);
    assert!((closed - numeric).abs() <= 1e-4 * closed.abs());
}

#[test]
fn i2_continuous_across_case_boundary() {
    // r² = 2ah with h = r cosθ, so r = 2a cosθ
    let a = 0.5;
    let c = 0.6;
    let r0 = 2.0 * a * c;
    let scale = sphere_volume(a) * a;
    for delta in [1e-3, 1e-4] {
        let lo = overlap_i2_numeric(r0 - delta, c, a, 1e-14).unwrap();
        let hi = overlap_i2_numeric(r0 + delta, c, a, 1e-14).unwrap();
        assert!((hi - lo).abs() <= 4.0 * scale * delta, "delta {delta}: {}", hi - lo);
        let clo = overlap_i2(r0 - delta, c, a);
        let chi = overlap_i2(r0 + delta, c, a);
        assert!((chi - clo).abs() <= 4.0 * scale * delta);
        assert!((lo - clo).abs() <= 1e-4 * clo);
    }
}

#[test]
fn i2_quadrature_rejects_bad_input() {
    assert!(overlap_i2_numeric(1.0, 0.0, 0.5, 1e-10).is_err());
    assert!(overlap_i2_numeric(0.1, 1.5, 0.5, 1e-10).is_err());
    assert!(overlap_i2_numeric(0.1, 0.5, 0.5, 0.0).is_err());
}

#[test]
fn filling_profile_surface_deficit_integrates_to_zero() {
    let (a, nv0) = (0.5, 0.05);
    let f = |h: f64| {
        let bulk = if h < 0.0 { nv0 } else if h == 0.0 { nv0 / 2.0 } else { 0.0 };
        mean_filling_profile(h, a, nv0) - bulk
    };
    let res = integrate_with_breaks(f, &[-a, 0.0, a], QuadOptions::new(1e-16, 1e-14)).unwrap();
    assert!(res.value.abs() <= 1e-12, "{}", res.value);
}

#[test]
fn filling_profile_at_half_radius() {
    let (a, nv0) = (0.5, 0.05);
    let n = nv0 / sphere_volume(a);
    let want = n * (0.5 * sphere_volume(a) - PI * a.powi(3) / 2.0 + PI * a.powi(3) / 24.0);
    assert!((mean_filling_profile(a / 2.0, a, nv0) - want).abs() < 1e-16);
    // the same value as the volume of the cap of the centre-ball lying below the surface
    let cap_height = a - a / 2.0;
    let cap = PI * cap_height * cap_height * (3.0 * a - cap_height) / 3.0;
    assert!((mean_filling_profile(a / 2.0, a, nv0) - n * cap).abs() < 1e-16);
}

#[test]
fn effective_susceptibility_is_first_order_in_chi() {
    let (q, nv0) = (0.4, 0.05);
    let mut prev = f64::INFINITY;
    for k in 1..8 {
        let chi = Complex64::new(0.3, 0.2) * 10f64.powi(-k);
        let dev = (chi_effective(chi, q, nv0) / nv0 / chi - 1.0).norm();
        assert!(dev < prev);
        assert!(dev <= chi.norm());
        prev = dev;
    }
    assert!(prev < 1e-7);
}

#[test]
fn lorentz_examples() {
    let m = LorentzSusceptibility::lorentz(0.7, 2.0, 0.0).unwrap();
    let chi = m.chi_at(1e-4).unwrap();
    assert!((chi.re - 0.7).abs() < 1e-8 && chi.im == 0.0);
    let m = LorentzSusceptibility::lorentz(0.7, 2.0, 0.3).unwrap();
    let chi = m.chi_at(2.0).unwrap();
    assert!(chi.re.abs() < 1e-15);
    assert!((chi.im - 0.7 * 2.0 / 0.3).abs() < 1e-12);
    assert!(m.chi_at(1e9).unwrap().norm() < 1e-15);
    let fixed = LorentzSusceptibility::fixed(Complex64::new(0.5, 0.5)).unwrap();
    assert_eq!(fixed.chi_at(3.0).unwrap(), Complex64::new(0.5, 0.5));
    assert!(m.chi_at(0.0).is_err());
    assert!(LorentzSusceptibility::lorentz(-1.0, 1.0, 0.1).is_err());
    assert!(LorentzSusceptibility::lorentz(1.0, 0.0, 0.1).is_err());
    assert!(LorentzSusceptibility::fixed(Complex64::new(0.1, -0.1)).is_err());
}

#[test]
fn medium_spec_validation() {
    let chi = LorentzSusceptibility::fixed(Complex64::new(0.5, 0.0)).unwrap();
    let m = MediumSpec::new(0.5, 0.05, chi).unwrap();
    assert!(m.is_dilute());
    assert!((m.number_density() * m.sphere_volume() - 0.05).abs() < 1e-16);
    assert!(!MediumSpec::new(0.5, 0.2, chi).unwrap().is_dilute());
    assert!(MediumSpec::new(0.0, 0.05, chi).is_err());
    assert!(MediumSpec::new(0.5, 1.0, chi).is_err());
    assert!(MediumSpec::new(0.5, -0.1, chi).is_err());
}

proptest! {
    #[test]
    fn passivity(s in 0.0f64..10.0, w0 in 0.01f64..10.0, g in 0.0f64..5.0, w in 1e-3f64..20.0) {
        let m = LorentzSusceptibility::lorentz(s, w0, g).unwrap();
        prop_assert!(m.chi_at(w).unwrap().im >= 0.0);
    }

    #[test]
    fn overlap_c_monotone_in_unit_interval(a in 0.05f64..3.0, x in 0.0f64..2.2, y in 0.0f64..2.2) {
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        let (cl, ch) = (overlap_c(lo * a, a), overlap_c(hi * a, a));
        prop_assert!(ch <= cl + 1e-15);
        prop_assert!((0.0..=1.0).contains(&cl));
    }

    #[test]
    fn i2_nonnegative(a in 0.05f64..3.0, x in 0.0f64..2.0, c in -1.0f64..1.0) {
        prop_assert!(overlap_i2(x * a, c, a) >= -1e-15 * a.powi(5));
    }

    #[test]
    fn filling_profile_monotone(a in 0.05f64..2.0, nv0 in 0.0f64..0.2, x in -2.0f64..2.0, y in -2.0f64..2.0) {
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        let (fl, fh) = (mean_filling_profile(lo * a, a, nv0), mean_filling_profile(hi * a, a, nv0));
        prop_assert!(fh <= fl + 1e-15);
        prop_assert!(fl <= nv0 + 1e-15 && fh >= -1e-15);
    }
}
