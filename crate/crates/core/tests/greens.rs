use granular_decay::greens::*;
use granular_decay::tensor::{Dyadic, Position, Vec3};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn random_point(rng: &mut ChaCha8Rng, scale: f64) -> Position {
    Position::new(
        scale * (2.0 * rng.random::<f64>() - 1.0),
        scale * (2.0 * rng.random::<f64>() - 1.0),
        scale * (2.0 * rng.random::<f64>() - 1.0),
    )
}

#[test]
fn reciprocity_thousand_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let r = random_point(&mut rng, 20.0);
        let rp = random_point(&mut rng, 20.0);
        let g = greens_vacuum(r, rp).unwrap();
        let h = greens_vacuum(rp, r).unwrap();
        assert!(g.max_abs_diff(&h.transpose()) <= 1e-14 * g.max_abs().max(1e-300));
    }
}

#[test]
fn term_by_term_unit_separation() {
    // −(1/4πs)(I − ŝŝ)e^{is} + (1/4πs)(−i/s + 1/s²)(I − 3ŝŝ)e^{is}, s = 1, ŝ = ẑ
    let e = Complex64::from_polar(1.0, 1.0) / (4.0 * PI);
    let near = Complex64::new(1.0, -1.0) * e;
    let g = greens_vacuum(Position::new(0.0, 0.0, 1.0), Position::ZERO).unwrap();
    assert!((g.get(0, 0) - (-e + near)).norm() < 1e-16);
    assert!((g.get(1, 1) - (-e + near)).norm() < 1e-16);
    assert!((g.get(2, 2) - (near * -2.0)).norm() < 1e-16);
}

#[test]
fn far_field_leading_term_on_axis() {
    let s = 1e4;
    let g = greens_vacuum(Position::new(0.0, 0.0, s), Position::ZERO).unwrap();
    let lead = -Complex64::from_polar(1.0 / (4.0 * PI * s), s);
    assert!((g.get(0, 0) - lead).norm() < 2.0 / (4.0 * PI * s * s));
    assert!(g.get(2, 2).norm() < 2.01 / (4.0 * PI * s * s));
}

#[test]
fn farfield_against_full_at_s100() {
    let r = Position::new(60.0, -48.0, 64.0);
    assert!((r.norm() - 100.0).abs() < 1e-12);
    let full = greens_vacuum(r, Position::ZERO).unwrap();
    let far = greens_farfield(r, Position::ZERO).unwrap();
    let bound = 1.0 / (4.0 * PI * 100.0) * (1.0 / 100.0 + 1.0 / 1e4) * 3.0;
    assert!(full.max_abs_diff(&far) <= bound);
}

#[test]
fn farfield_halves_when_distance_doubles() {
    let u = Vec3::new(0.36, 0.48, 0.8);
    let g1 = greens_farfield(u * 20.0, Position::ZERO).unwrap();
    let g2 = greens_farfield(u * 40.0, Position::ZERO).unwrap();
    assert!((g1.max_abs() / g2.max_abs() - 2.0).abs() < 1e-12);
}

#[test]
fn wave_identity_at_s5() {
    let r = Position::new(3.0, 0.0, 4.0);
    let d = verify_wave_identity(r, Position::ZERO, 1e-3).unwrap();
    assert!(d <= 1e-5, "{d}");
}

#[test]
fn wave_identity_converges_quadratically() {
    let r = Position::new(1.0, -2.0, 4.0);
    let rp = Position::new(0.5, 0.5, -0.5);
    let coarse = verify_wave_identity(r, rp, 1e-2).unwrap();
    let fine = verify_wave_identity(r, rp, 5e-3).unwrap();
    let ratio = coarse / fine;
    assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn wave_identity_fails_for_far_field_only() {
    let r = Position::new(0.0, 6.0, 8.0);
    let res = wave_identity_residuals_with(|x| greens_farfield_min(x, Position::ZERO, 1.0), r, 1e-3).unwrap();
    // the dropped near-field terms are of relative size 1/s
    assert!(res.max() > 0.1 / 10.0, "{res:?}");
    let ok = wave_identity_residuals_with(|x| greens_vacuum(x, Position::ZERO), r, 1e-3).unwrap();
    assert!(ok.max() < 1e-5);
}

fn rotation(a: f64, b: f64, c: f64) -> [[f64; 3]; 3] {
    let (sa, ca) = a.sin_cos();
    let (sb, cb) = b.sin_cos();
    let (sc, cc) = c.sin_cos();
    let rz = [[ca, -sa, 0.0], [sa, ca, 0.0], [0.0, 0.0, 1.0]];
    let ry = [[cb, 0.0, sb], [0.0, 1.0, 0.0], [-sb, 0.0, cb]];
    let rx = [[1.0, 0.0, 0.0], [0.0, cc, -sc], [0.0, sc, cc]];
    let mul = |p: [[f64; 3]; 3], q: [[f64; 3]; 3]| {
        let mut o = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    o[i][j] += p[i][k] * q[k][j];
                }
            }
        }
        o
    };
    mul(rz, mul(ry, rx))
}

fn apply(m: &[[f64; 3]; 3], v: Vec3) -> Vec3 {
    Vec3::new(
        m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
        m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
        m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
    )
}

proptest! {
    #[test]
    fn rotational_covariance(
        a in 0.0f64..6.3, b in 0.0f64..6.3, c in 0.0f64..6.3,
        x in -10.0f64..10.0, y in -10.0f64..10.0, z in 0.5f64..10.0,
    ) {
        let rot = rotation(a, b, c);
        let r = Position::new(x, y, z);
        let rp = Position::new(0.2, -0.1, -0.3);
        let lhs = greens_vacuum(r, rp).unwrap().rotate(&rot);
        let rhs = greens_vacuum(apply(&rot, r), apply(&rot, rp)).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * lhs.max_abs());
    }

    #[test]
    fn farfield_transversality(x in -50.0f64..50.0, y in -50.0f64..50.0, z in 12.0f64..50.0) {
        let r = Position::new(x, y, z);
        let g = greens_farfield(r, Position::ZERO).unwrap();
        let s = r.normalized().unwrap();
        for v in g.apply(s) {
            prop_assert!(v.norm() <= 1e-14 * g.max_abs());
        }
    }

    #[test]
    fn symmetric_in_indices(x in -5.0f64..5.0, y in -5.0f64..5.0, z in -5.0f64..5.0) {
        prop_assume!(x * x + y * y + z * z > 1e-4);
        let g: Dyadic = greens_vacuum(Position::new(x, y, z), Position::ZERO).unwrap();
        prop_assert_eq!(g, g.transpose());
    }
}
