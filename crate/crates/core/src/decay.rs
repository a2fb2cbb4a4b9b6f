//! Average spontaneous-decay rate of an atom at height `ζ_a` (in units of
//! `c/ω_a`) above the granular half-space, for large `ζ_a`.
//!
//! Rates are always relative to the vacuum rate `Γ₀`. Contributions of the
//! dipole component normal to the surface fall off as `1/ζ_a²` and are
//! dropped, so only the parallel fraction of the dipole enters.

use crate::error::{invalid, Result};
use crate::medium::MediumSpec;
use crate::specfun::exp_integral_en;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Heights below this produce a warning: the large-distance forms lose accuracy.
pub const ZETA_WARN: f64 = 5.0;
/// Real part given to `u = −2iζ_a` to keep it off the branch cut of `E_n`.
pub const U_OFFSET: f64 = 1e-12;

/// Atom height, medium, and `|μ_∥|²/|μ|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecaySetup {
    pub zeta_a: f64,
    pub medium: MediumSpec,
    pub dipole_parallel_fraction: f64,
}

impl DecaySetup {
    pub fn new(zeta_a: f64, medium: MediumSpec, dipole_parallel_fraction: f64) -> Result<Self> {
        if !(zeta_a > 0.0 && zeta_a.is_finite()) {
            return Err(invalid(format!("zeta_a must be finite and > 0, got {zeta_a}")));
        }
        if !(0.0..=1.0).contains(&dipole_parallel_fraction) {
            return Err(invalid(format!(
                "dipole parallel fraction must lie in [0, 1], got {dipole_parallel_fraction}"
            )));
        }
        if zeta_a < ZETA_WARN {
            log::warn!("zeta_a = {zeta_a} is below {ZETA_WARN}; large-distance asymptotics may be inaccurate");
        }
        Ok(Self {
            zeta_a,
            medium,
            dipole_parallel_fraction,
        })
    }
}

/// One point of the decay-rate curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayCurvePoint {
    pub zeta_a: f64,
    /// Correction function `f(ζ_a)`.
    pub f_value: f64,
    /// `⟨Γ⟩/Γ₀`.
    pub gamma_relative: f64,
    /// `(1 − 2q²/5)·χ·e^{2iζ}/ζ`.
    pub first_order_term: Complex64,
    /// `−(1/3 − 28q²/75 − 2iq³/9)·χ²·e^{2iζ}/ζ`.
    pub second_order_term: Complex64,
}

/// Transverse (`xx`) component of `∫ G₀·G₀` over the half-space at distance
/// `ζ_a` from the atom, with both Green functions in far-field form:
/// `(ζ/16π)[(4/3)E₀(u) − E₁(u) − E₃(u)/3]`, `u = −2iζ`.
///
/// For large `ζ` this tends to `−e^{2iζ}/(32πζ)`.
pub fn lateral_integral_exact(zeta_a: f64) -> Result<Complex64> {
    if !(zeta_a > 0.0 && zeta_a.is_finite()) {
        return Err(invalid(format!("zeta_a must be finite and > 0, got {zeta_a}")));
    }
    let u = Complex64::new(U_OFFSET, -2.0 * zeta_a);
    let e0 = exp_integral_en(0, u)?;
    let e1 = exp_integral_en(1, u)?;
    let e3 = exp_integral_en(3, u)?;
    Ok(zeta_a / (16.0 * PI) * (4.0 / 3.0 * e0 - e1 - e3 / 3.0))
}

fn terms(zeta_a: f64, q: f64, chi: Complex64) -> (Complex64, Complex64) {
    let q2 = q * q;
    let phase = Complex64::from_polar(1.0 / zeta_a, 2.0 * zeta_a);
    let first = (1.0 - 0.4 * q2) * chi * phase;
    let coeff = Complex64::new(1.0 / 3.0 - 28.0 / 75.0 * q2, -2.0 / 9.0 * q2 * q);
    let second = -coeff * chi * chi * phase;
    (first, second)
}

/// Correction function
/// `f(ζ) = Im{[1 − 2q²/5 − (1/3 − 28q²/75 − 2iq³/9)χ]·χ·e^{2iζ}/ζ}`.
///
/// ```
/// use granular_decay::decay::decay_correction_f;
/// use num_complex::Complex64;
/// let f = decay_correction_f(10.0, 0.0, Complex64::new(0.5, 0.0));
/// let want = (0.5 - 0.25 / 3.0) * 20f64.sin() / 10.0;
/// assert!((f - want).abs() < 1e-15);
/// ```
pub fn decay_correction_f(zeta_a: f64, q: f64, chi: Complex64) -> f64 {
    let (a, b) = terms(zeta_a, q, chi);
    (a + b).im
}

/// `⟨Γ⟩/Γ₀ = 1 − (3/16)·nv0·fraction·f`.
pub fn gamma_from_f(f_value: f64, nv0: f64, dipole_parallel_fraction: f64) -> f64 {
    1.0 - 3.0 / 16.0 * nv0 * dipole_parallel_fraction * f_value
}

/// `⟨Γ⟩/Γ₀ = 1 − (3/16)·nv0·(|μ_∥|²/|μ|²)·f(ζ_a)`, with `χ` evaluated at
/// the atomic frequency (`ω = 1` in reduced units).
pub fn decay_rate_relative(setup: &DecaySetup) -> Result<DecayCurvePoint> {
    let chi = setup.medium.chi.chi_at(1.0)?;
    let q = setup.medium.radius_q;
    let (first, second) = terms(setup.zeta_a, q, chi);
    let f_value = (first + second).im;
    let gamma_relative = gamma_from_f(f_value, setup.medium.density_nv0, setup.dipole_parallel_fraction);
    Ok(DecayCurvePoint {
        zeta_a: setup.zeta_a,
        f_value,
        gamma_relative,
        first_order_term: first,
        second_order_term: second,
    })
}

/// [`decay_rate_relative`] over a grid of heights.
pub fn decay_curve(medium: MediumSpec, dipole_parallel_fraction: f64, zetas: &[f64]) -> Result<Vec<DecayCurvePoint>> {
    zetas
        .iter()
        .map(|&z| decay_rate_relative(&DecaySetup::new(z, medium, dipole_parallel_fraction)?))
        .collect()
}

/// `f(ζ)` for non-absorbing spheres:
/// `[1 − 2q²/5 − (1/3 − 28q²/75)χ]·χ·sin 2ζ/ζ + (2/9)q³χ²·cos 2ζ/ζ`.
pub fn decay_scattering_only(zeta_a: f64, q: f64, chi_real: f64) -> f64 {
    let q2 = q * q;
    let (s, c) = (2.0 * zeta_a).sin_cos();
    let bracket = 1.0 - 0.4 * q2 - (1.0 / 3.0 - 28.0 / 75.0 * q2) * chi_real;
    bracket * chi_real * s / zeta_a + 2.0 / 9.0 * q2 * q * chi_real * chi_real * c / zeta_a
}

/// `f(ζ)` for point-like (`q = 0`) absorbing spheres:
/// `(χ_r − χ_r²/3 + χ_i²/3)·sin 2ζ/ζ + (1 − 2χ_r/3)·χ_i·cos 2ζ/ζ`.
pub fn decay_absorbing_only(zeta_a: f64, chi: Complex64) -> f64 {
    let (cr, ci) = (chi.re, chi.im);
    let (s, c) = (2.0 * zeta_a).sin_cos();
    (cr - cr * cr / 3.0 + ci * ci / 3.0) * s / zeta_a + (1.0 - 2.0 * cr / 3.0) * ci * c / zeta_a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::medium::LorentzSusceptibility;

    fn medium(q: f64, nv0: f64, chi: Complex64) -> MediumSpec {
        MediumSpec::new(q, nv0, LorentzSusceptibility::fixed(chi).unwrap()).unwrap()
    }

    #[test]
    fn vacuum_limits() {
        assert_eq!(decay_correction_f(7.0, 0.4, Complex64::new(0.0, 0.0)), 0.0);
        let m = medium(0.5, 0.0, Complex64::new(0.5, 0.5));
        let p = decay_rate_relative(&DecaySetup::new(10.0, m, 1.0).unwrap()).unwrap();
        assert_eq!(p.gamma_relative, 1.0);
        let m = medium(0.5, 0.05, Complex64::new(0.5, 0.5));
        let p = decay_rate_relative(&DecaySetup::new(10.0, m, 0.0).unwrap()).unwrap();
        assert_eq!(p.gamma_relative, 1.0);
    }

    #[test]
    fn zeros_of_real_point_spheres() {
        for m in 1..20 {
            let z = m as f64 * PI / 2.0;
            assert!(decay_correction_f(z, 0.0, Complex64::new(0.7, 0.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn absorbing_figure_case() {
        let chi = Complex64::new(0.5, 0.5);
        let m = medium(1e-300, 0.05, chi);
        let p = decay_rate_relative(&DecaySetup::new(10.0, m, 1.0).unwrap()).unwrap();
        let f = decay_correction_f(10.0, 0.0, chi);
        assert!((p.gamma_relative - (1.0 - 3.0 / 16.0 * 0.05 * f)).abs() < 1e-16);
        assert!((p.first_order_term + p.second_order_term).im == p.f_value);
    }

    #[test]
    fn setup_validation() {
        let m = medium(0.5, 0.05, Complex64::new(0.5, 0.0));
        assert!(DecaySetup::new(0.0, m, 1.0).is_err());
        assert!(DecaySetup::new(10.0, m, 1.5).is_err());
        assert!(DecaySetup::new(2.0, m, 0.5).is_ok());
        assert!(lateral_integral_exact(-1.0).is_err());
    }
}
