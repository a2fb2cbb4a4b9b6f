use granular_decay::greens::greens_farfield;
use granular_decay::mie::*;
use granular_decay::tensor::{Position, Vec3};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vec3 {
    let u: f64 = 2.0 * rng.random::<f64>() - 1.0;
    let phi: f64 = 2.0 * PI * rng.random::<f64>();
    let s = (1.0 - u * u).sqrt();
    Vec3::new(s * phi.cos(), s * phi.sin(), u)
}

#[test]
fn medium_kernel_equals_single_sphere_kernel_times_chi() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..200 {
        let e = random_unit(&mut rng);
        let k = random_unit(&mut rng);
        let q = 0.3 * rng.random::<f64>();
        let chi = Complex64::from_polar(0.3 * rng.random::<f64>(), PI * rng.random::<f64>());
        let lhs = effective_kernel_tensor(e, k, q, chi).unwrap();
        let rhs = mie_kernel_tensor(e, k, q, chi).unwrap() * chi;
        assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
    }
}

#[test]
fn dipole_expansion_error_bounded_and_shrinking() {
    let chi = c(0.1, 0.0);
    let mut prev = f64::INFINITY;
    for q in [0.05, 0.02, 0.01] {
        let full = mie_amplitudes(q, chi, 2).unwrap().electric(1);
        let series = mie_amplitudes_small_q(q, chi, SmallQForm::ClosedInChi).be1;
        let dev = (full / series - 1.0).norm();
        assert!(dev <= 5.0 * q, "q={q}: {dev}");
        assert!(dev < prev);
        prev = dev;
    }
}

#[test]
fn dipole_expansion_order_beyond_included_terms() {
    let chi = c(0.1, 0.05);
    let dev = |q: f64| {
        let full = mie_amplitudes(q, chi, 2).unwrap().electric(1);
        (full / mie_amplitudes_small_q(q, chi, SmallQForm::ClosedInChi).be1 - 1.0).norm()
    };
    let order = (dev(0.1) / dev(0.05)).log2();
    assert!(order >= 2.0, "observed order {order}");
}

#[test]
fn higher_multipoles_are_suppressed() {
    for (q, chi) in [(0.1, c(0.2, 0.1)), (0.3, c(0.5, 0.5)), (0.5, c(0.5, 0.0))] {
        let b = mie_amplitudes(q, chi, 6).unwrap();
        for l in 1..6 {
            assert!(b.electric(l + 1).norm() <= q * q * b.electric(l).norm(), "q={q} l={l}");
            assert!(b.magnetic(l + 1).norm() <= q * q * b.magnetic(l).norm(), "q={q} l={l}");
        }
    }
}

#[test]
fn small_q_examples() {
    let (q, chi) = (0.01, c(0.1, 0.0));
    let b = mie_amplitudes(q, chi, 2).unwrap();
    assert!((b.magnetic(1) / (I / 30.0 * q.powi(5) * chi) - 1.0).norm() <= 3.0 * q * q);
    let be2 = -q.powi(5) / 18.0 * chi / (5.0 + 2.0 * chi);
    assert!((b.electric(2) / be2 - 1.0).norm() <= 3.0 * q * q);
    let z = mie_amplitudes_small_q(0.0, chi, SmallQForm::ClosedInChi);
    assert_eq!((z.be1, z.be2, z.bm1), (c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)));
    // χ-linearized form is the small-χ limit of the closed one
    let (q, chi) = (0.2, c(1e-3, 5e-4));
    let a = mie_amplitudes_small_q(q, chi, SmallQForm::ClosedInChi);
    let l = mie_amplitudes_small_q(q, chi, SmallQForm::LinearizedInChi);
    assert!((a.be1 / l.be1 - 1.0).norm() < 10.0 * chi.norm().powi(2));
    assert!((a.be2 / l.be2 - 1.0).norm() < 10.0 * chi.norm().powi(2));
}

#[test]
fn absorbing_spheres_extinguish() {
    for iq in 1..=6 {
        let q = 0.05 * iq as f64;
        for ic in 0..=5 {
            for re in [0.0, 0.2, 0.5] {
                let chi = c(re, 0.1 * ic as f64);
                let b = mie_amplitudes(q, chi, 2).unwrap();
                assert!(b.electric(1).im >= 0.0, "q={q} chi={chi}");
                let bound = 1.5 * 3.0 / 2.0;
                assert!(b.electric(1).norm() <= bound);
            }
        }
    }
}

#[test]
fn argument_checks() {
    assert!(mie_amplitudes(0.0, c(0.1, 0.0), 2).is_err());
    assert!(mie_amplitudes(2.5, c(0.1, 0.0), 2).is_err());
    assert!(mie_amplitudes(0.5, c(0.1, 0.0), 0).is_err());
    assert!(mie_amplitudes(0.5, c(0.1, 0.0), 11).is_err());
    let b = mie_amplitudes(0.5, c(0.1, 0.0), 2).unwrap();
    assert!(mie_farfield(9.0, 0.3, 0.2, &b, 1.0).is_err());
    assert!(mie_kernel_tensor(Vec3::new(1.0, 1.0, 0.0), Vec3::new(0.0, 0.0, 1.0), 0.1, c(0.1, 0.0)).is_err());
}

#[test]
fn forward_scattering_is_azimuthally_degenerate() {
    let b = mie_amplitudes(0.4, c(0.5, 0.2), LMAX_DEFAULT).unwrap();
    for phi in [0.3, 1.1, 2.0, -0.7] {
        let (et, ep) = mie_farfield(50.0, 0.0, phi, &b, 1.0).unwrap();
        let want = et / phi.cos();
        assert!((ep / -phi.sin() - want).norm() <= 1e-12 * want.norm());
    }
}

#[test]
fn zero_amplitude_gives_zero_field() {
    let b = mie_amplitudes(0.4, c(0.5, 0.2), 3).unwrap();
    let (et, ep) = mie_farfield(30.0, 1.2, 0.4, &b, 0.0).unwrap();
    assert_eq!((et.norm(), ep.norm()), (0.0, 0.0));
}

fn closed_form_field(q: f64, chi: Complex64, r: f64, theta: f64, phi: f64) -> (Complex64, Complex64) {
    let q2 = q * q;
    let ct = theta.cos();
    let pre = Complex64::from_polar(1.0 / r, r) * q.powi(3) * chi;
    let third = c(1.0 - q2, -2.0 / 3.0 * q.powi(3)) / 9.0;
    let et = (1.0 / 3.0 * (1.0 - q2 / 5.0) * ct + q2 / 15.0 * ct * ct + chi * (-third * ct - q2 / 75.0 * (2.0 * ct * ct - 1.0)))
        * pre
        * phi.cos();
    let ep = -(1.0 / 3.0 * (1.0 - q2 / 5.0) + q2 / 15.0 * ct + chi * (-third - q2 / 75.0 * ct)) * pre * phi.sin();
    (et, ep)
}

#[test]
fn far_field_matches_closed_form_to_expansion_order() {
    let angles = [(0.3, 0.2), (1.2, 0.9), (2.5, 2.0), (PI / 2.0, 0.6)];
    let deviation = |s: f64| {
        let (q, chi) = (s, c(s, 0.5 * s));
        let b = mie_amplitudes(q, chi, 2).unwrap();
        let mut worst = 0.0f64;
        for (theta, phi) in angles {
            let (et, ep) = mie_farfield(40.0, theta, phi, &b, 1.0).unwrap();
            let (ct, cp) = closed_form_field(q, chi, 40.0, theta, phi);
            let scale = q.powi(3) * chi.norm() / 40.0;
            worst = worst.max((et - ct).norm() / scale).max((ep - cp).norm() / scale);
        }
        worst
    };
    let (d1, d2) = (deviation(0.1), deviation(0.05));
    assert!(d1 <= 0.1 * 0.1, "{d1}");
    assert!(d1 / d2 >= 3.0, "{d1} {d2}");
}

#[test]
fn far_field_equals_kernel_form() {
    // E = −v₀χ·G₀·K·x̂ with the long-range Green function
    let (q, chi) = (0.05, c(0.05, 0.02));
    let amps = MieAmplitudes::from_small_q(q, chi, SmallQForm::LinearizedInChi);
    let v0 = 4.0 * PI * q.powi(3) / 3.0;
    let k = Vec3::new(0.0, 0.0, 1.0);
    let x = Vec3::new(1.0, 0.0, 0.0);
    for (theta, phi) in [(0.4f64, 0.3f64), (1.9, -1.2)] {
        let r = 60.0;
        let rhat = Vec3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos());
        let g = greens_farfield(rhat * r, Position::ZERO).unwrap();
        let kern = mie_kernel_tensor(rhat, k, q, chi).unwrap();
        let field = (g.dot(&kern) * (-v0 * chi)).apply(x);
        let th = Vec3::new(theta.cos() * phi.cos(), theta.cos() * phi.sin(), -theta.sin());
        let ph = Vec3::new(-phi.sin(), phi.cos(), 0.0);
        let project = |u: Vec3| field[0] * u.x + field[1] * u.y + field[2] * u.z;
        let (et, ep) = mie_farfield(r, theta, phi, &amps, 1.0).unwrap();
        let scale = q.powi(3) * chi.norm() / r;
        let tol = scale * (q.powi(4) + chi.norm().powi(2) + q.powi(3) * chi.norm()) * 5.0;
        assert!((project(th) - et).norm() <= tol, "{} vs {}", project(th), et);
        assert!((project(ph) - ep).norm() <= tol);
    }
}

#[test]
fn kernel_limits() {
    let e = Vec3::new(0.6, 0.0, 0.8);
    let k = Vec3::new(0.0, 0.0, 1.0);
    let chi = c(0.2, 0.1);
    let at0 = mie_kernel_tensor(e, k, 0.0, chi).unwrap();
    let want = granular_decay::Dyadic::scalar(1.0 - chi / 3.0);
    assert!(at0.max_abs_diff(&want) < 1e-16);
    let q = 0.3;
    let geo = mie_kernel_tensor(e, k, q, c(0.0, 0.0)).unwrap();
    let want = granular_decay::Dyadic::scalar(c(1.0 - q * q / 5.0 + q * q / 5.0 * 0.8, 0.0));
    assert!(geo.max_abs_diff(&want) < 1e-16);
    assert_eq!(effective_kernel_tensor(e, k, q, c(0.0, 0.0)).unwrap().max_abs(), 0.0);
}

proptest! {
    #[test]
    fn refractive_index_is_passive(re in -0.9f64..3.0, im in 0.0f64..3.0) {
        let m = refractive_index(c(re, im));
        prop_assert!(m.im >= 0.0);
        prop_assert!((m * m - c(1.0 + re, im)).norm() < 1e-13);
    }

    #[test]
    fn amplitudes_finite(q in 0.01f64..1.0, re in 0.0f64..1.0, im in 0.0f64..1.0) {
        let b = mie_amplitudes(q, c(re, im), LMAX_LIMIT).unwrap();
        prop_assert!(b.electric.iter().chain(&b.magnetic).all(|v| v.re.is_finite() && v.im.is_finite()));
    }
}
