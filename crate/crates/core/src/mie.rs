//! Mie multipole amplitudes of a homogeneous dielectric sphere (`k = 1`),
//! their small-sphere expansions, the scattered far field, and the scattering
//! kernels of a single sphere and of the averaged sphere medium.

use crate::error::{invalid, Error, Result};
use crate::specfun::{angular_pi_tau_all, spherical_bessel_j_all, spherical_hankel1_all};
use crate::tensor::{Dyadic, Vec3};
use num_complex::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Largest multipole order supported.
pub const LMAX_LIMIT: usize = 10;
/// Default truncation order of far-field sums.
pub const LMAX_DEFAULT: usize = 4;

/// Electric and magnetic amplitudes `B^e_l`, `B^m_l` for `l = 1..=lmax`.
#[derive(Debug, Clone, PartialEq)]
pub struct MieAmplitudes {
    /// `electric[l - 1] = B^e_l`.
    pub electric: Vec<Complex64>,
    /// `magnetic[l - 1] = B^m_l`.
    pub magnetic: Vec<Complex64>,
    pub q: f64,
    pub chi: Complex64,
}

impl MieAmplitudes {
    pub fn lmax(&self) -> usize {
        self.electric.len()
    }

    /// `B^e_l` for `l ≥ 1`; zero beyond the stored order.
    pub fn electric(&self, l: usize) -> Complex64 {
        self.electric.get(l.wrapping_sub(1)).copied().unwrap_or_default()
    }

    /// `B^m_l` for `l ≥ 1`; zero beyond the stored order.
    pub fn magnetic(&self, l: usize) -> Complex64 {
        self.magnetic.get(l.wrapping_sub(1)).copied().unwrap_or_default()
    }

    /// Amplitude set holding only the low-order expansions, `lmax = 2`.
    pub fn from_small_q(q: f64, chi: Complex64, form: SmallQForm) -> Self {
        let s = mie_amplitudes_small_q(q, chi, form);
        Self {
            electric: vec![s.be1, s.be2],
            magnetic: vec![s.bm1, Complex64::new(0.0, 0.0)],
            q,
            chi,
        }
    }
}

/// `√(1 + χ)` on the branch with non-negative imaginary part.
pub fn refractive_index(chi: Complex64) -> Complex64 {
    let m = (Complex64::new(1.0, 0.0) + chi).sqrt();
    if m.im < 0.0 {
        -m
    } else {
        m
    }
}

/// Full amplitudes from spherical Bessel and Hankel functions.
///
/// ```
/// use granular_decay::mie::mie_amplitudes;
/// use num_complex::Complex64;
/// let b = mie_amplitudes(0.01, Complex64::new(0.1, 0.0), 2).unwrap();
/// let lead = Complex64::new(0.0, 1e-6 * 0.1 / 3.1);
/// assert!((b.electric(1) / lead - 1.0).norm() < 1e-4);
/// ```
pub fn mie_amplitudes(q: f64, chi: Complex64, lmax: usize) -> Result<MieAmplitudes> {
    if !(q > 0.0 && q <= 2.0) {
        return Err(invalid(format!("q must lie in (0, 2], got {q}")));
    }
    if !(1..=LMAX_LIMIT).contains(&lmax) {
        return Err(invalid(format!("lmax must lie in 1..={LMAX_LIMIT}, got {lmax}")));
    }
    if !(chi.re.is_finite() && chi.im.is_finite()) {
        return Err(Error::NonFinite("chi"));
    }
    let eps = Complex64::new(1.0, 0.0) + chi;
    let qc = Complex64::new(q, 0.0);
    let qp = refractive_index(chi) * q;
    let jq = spherical_bessel_j_all(lmax + 1, qc);
    let jqp = spherical_bessel_j_all(lmax + 1, qp);
    let hq = spherical_hankel1_all(lmax + 1, qc)?;

    let mut electric = Vec::with_capacity(lmax);
    let mut magnetic = Vec::with_capacity(lmax);
    for l in 1..=lmax {
        let lf = (l + 1) as f64;
        // [z·f_l(z)]′ = (l+1)·f_l(z) − z·f_{l+1}(z)
        let dj_q = lf * jq[l] - qc * jq[l + 1];
        let dj_qp = lf * jqp[l] - qp * jqp[l + 1];
        let dh_q = lf * hq[l] - qc * hq[l + 1];
        let prefactor = I.powi(l as i32 + 1) * ((2 * l + 1) as f64 / (l * (l + 1)) as f64);

        let amplitude = |kind: &'static str, weight: Complex64| -> Result<Complex64> {
            let num = weight * (dj_q * jqp[l]) - dj_qp * jq[l];
            let t1 = weight * (dh_q * jqp[l]);
            let t2 = dj_qp * hq[l];
            let den = t1 - t2;
            if den.norm() < 1e-14 * (t1.norm() + t2.norm()) {
                return Err(Error::Resonance {
                    kind,
                    order: l,
                    magnitude: den.norm(),
                });
            }
            Ok(prefactor * num / den)
        };
        electric.push(amplitude("electric", eps)?);
        magnetic.push(amplitude("magnetic", Complex64::new(1.0, 0.0))?);
    }
    for v in electric.iter().chain(&magnetic) {
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite("mie_amplitudes"));
        }
    }
    Ok(MieAmplitudes {
        electric,
        magnetic,
        q,
        chi,
    })
}

/// Which small-sphere expansion to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SmallQForm {
    /// Expansion in `q` to order `q⁶`, exact in `χ`.
    #[default]
    ClosedInChi,
    /// The same, additionally expanded to second order in `χ`.
    LinearizedInChi,
}

/// Low-order amplitudes from the small-sphere expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallQAmplitudes {
    pub be1: Complex64,
    pub be2: Complex64,
    pub bm1: Complex64,
}

pub fn mie_amplitudes_small_q(q: f64, chi: Complex64, form: SmallQForm) -> SmallQAmplitudes {
    let q2 = q * q;
    let q3 = q2 * q;
    let q5 = q3 * q2;
    let bm1 = I / 30.0 * q5 * chi;
    match form {
        SmallQForm::ClosedInChi => {
            let ratio = chi / (3.0 + chi);
            let be1 = I * q3 * ratio * (1.0 - 0.6 * q2 * (1.0 - chi) / (3.0 + chi) + 2.0 * I / 3.0 * q3 * ratio);
            let be2 = -q5 / 18.0 * chi / (5.0 + 2.0 * chi);
            SmallQAmplitudes { be1, be2, bm1 }
        }
        SmallQForm::LinearizedInChi => {
            let be1 = I / 3.0 * q3 * chi
                * (1.0 - chi / 3.0 - q2 / 5.0 * (1.0 - 5.0 * chi / 3.0) + 2.0 * I / 9.0 * q3 * chi);
            let be2 = -q5 / 90.0 * chi * (1.0 - 0.4 * chi);
            SmallQAmplitudes { be1, be2, bm1 }
        }
    }
}

/// Scattered far field `(E_θ, E_φ)` at distance `r ≥ 10` for an incident
/// wave along `+z` polarized along `x` with amplitude `e0`.
pub fn mie_farfield(
    r: f64,
    theta: f64,
    phi: f64,
    amplitudes: &MieAmplitudes,
    e0: f64,
) -> Result<(Complex64, Complex64)> {
    if !(r >= 10.0) {
        return Err(Error::FarZone(format!("r = {r} is inside the far-zone limit 10")));
    }
    let lmax = amplitudes.lmax();
    let (pi, tau) = angular_pi_tau_all(lmax, theta.cos().clamp(-1.0, 1.0))?;
    let mut s_theta = Complex64::new(0.0, 0.0);
    let mut s_phi = Complex64::new(0.0, 0.0);
    for l in 1..=lmax {
        let phase = (-I).powi(l as i32);
        let (be, bm) = (amplitudes.electric(l), amplitudes.magnetic(l));
        s_theta += phase * (be * tau[l] + bm * pi[l]);
        s_phi += phase * (be * pi[l] + bm * tau[l]);
    }
    let radial = e0 * Complex64::from_polar(1.0 / r, r);
    Ok((radial * phi.cos() * s_theta, -radial * phi.sin() * s_phi))
}

fn check_unit(v: Vec3, name: &str) -> Result<()> {
    if (v.norm() - 1.0).abs() > 1e-12 {
        return Err(invalid(format!("{name} must be a unit vector, |{name}| = {}", v.norm())));
    }
    Ok(())
}

/// Single-sphere scattering kernel in the direction `ê` for incidence along
/// `k̂`, so that the scattered far field is `−v₀χ·G₀·K·E_i`:
/// `I(1 − q²/5 + (q²/5)ê·k̂) + χ[I(−1/3 + q²/3 + 2iq³/9) − (q²/25)(I ê·k̂ + k̂ê)]`.
pub fn mie_kernel_tensor(e_hat: Vec3, k_hat: Vec3, q: f64, chi: Complex64) -> Result<Dyadic> {
    check_unit(e_hat, "e_hat")?;
    check_unit(k_hat, "k_hat")?;
    let q2 = q * q;
    let ek = e_hat.dot(k_hat);
    let first = 1.0 - q2 / 5.0 + q2 / 5.0 * ek;
    let second = Complex64::new(-1.0 / 3.0 + q2 / 3.0, 2.0 / 9.0 * q2 * q);
    let diag = first + chi * (second - q2 / 25.0 * ek);
    Ok(Dyadic::scalar(diag) - Dyadic::outer(k_hat, e_hat) * (chi * (q2 / 25.0)))
}

/// Kernel of the averaged medium between two Green functions, with `ê` the
/// direction from the scatterer to the observer and `ê′` the direction from
/// the source to the scatterer reversed:
/// `χ[1 − (q²/5)(1 + ê·ê′)]I − χ²[I(1/3 − q²/3 − (q²/25)ê·ê′ − 2iq³/9) − (q²/25)ê′ê]`.
pub fn medium_kernel_tensor(e_hat: Vec3, ep_hat: Vec3, q: f64, chi: Complex64) -> Result<Dyadic> {
    check_unit(e_hat, "e_hat")?;
    check_unit(ep_hat, "ep_hat")?;
    let q2 = q * q;
    let ee = e_hat.dot(ep_hat);
    let first = chi * (1.0 - q2 / 5.0 * (1.0 + ee));
    let second = Complex64::new(1.0 / 3.0 - q2 / 3.0 - q2 / 25.0 * ee, -2.0 / 9.0 * q2 * q);
    let chi2 = chi * chi;
    Ok(Dyadic::scalar(first - chi2 * second) + Dyadic::outer(ep_hat, e_hat) * (chi2 * (q2 / 25.0)))
}

/// [`medium_kernel_tensor`] for plane-wave incidence along `k̂`, i.e. with
/// `ê′ = −k̂`.
pub fn effective_kernel_tensor(e_hat: Vec3, k_hat: Vec3, q: f64, chi: Complex64) -> Result<Dyadic> {
    medium_kernel_tensor(e_hat, -k_hat, q, chi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn empty_sphere_scatters_nothing() {
        let b = mie_amplitudes(0.7, c(0.0, 0.0), 6).unwrap();
        assert!(b.electric.iter().chain(&b.magnetic).all(|v| *v == c(0.0, 0.0)));
    }

    #[test]
    fn leading_dipole() {
        let (q, chi) = (0.01, c(0.1, 0.0));
        let b = mie_amplitudes(q, chi, 3).unwrap();
        let be1 = I * q.powi(3) * chi / (3.0 + chi);
        assert!((b.electric(1) / be1 - 1.0).norm() < 3.0 * q * q);
        let bm1 = I / 30.0 * q.powi(5) * chi;
        assert!((b.magnetic(1) / bm1 - 1.0).norm() < 3.0 * q * q);
        assert_eq!(b.electric(7), c(0.0, 0.0));
    }

    #[test]
    fn small_q_limits() {
        let s = mie_amplitudes_small_q(0.0, c(0.4, 0.2), SmallQForm::ClosedInChi);
        assert_eq!((s.be1, s.be2, s.bm1), (c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)));
        let m = MieAmplitudes::from_small_q(0.1, c(0.2, 0.0), SmallQForm::LinearizedInChi);
        assert_eq!(m.lmax(), 2);
        assert_eq!(m.magnetic(2), c(0.0, 0.0));
    }

    #[test]
    fn argument_checks() {
        assert!(mie_amplitudes(0.0, c(0.1, 0.0), 2).is_err());
        assert!(mie_amplitudes(0.5, c(0.1, 0.0), 11).is_err());
        assert!(mie_amplitudes(0.5, c(0.1, 0.0), 0).is_err());
        let b = mie_amplitudes(0.5, c(0.1, 0.0), 2).unwrap();
        assert!(matches!(mie_farfield(5.0, 0.1, 0.2, &b, 1.0), Err(Error::FarZone(_))));
        assert!(mie_kernel_tensor(Vec3::new(1.0, 1.0, 0.0), Vec3::EZ, 0.1, c(0.1, 0.0)).is_err());
    }

    #[test]
    fn kernel_at_q_zero() {
        let chi = c(0.3, 0.1);
        let k = mie_kernel_tensor(Vec3::EX, Vec3::EZ, 0.0, chi).unwrap();
        assert!(k.max_abs_diff(&Dyadic::scalar(1.0 - chi / 3.0)) < 1e-16);
        let e = effective_kernel_tensor(Vec3::EX, Vec3::EZ, 0.2, c(0.0, 0.0)).unwrap();
        assert_eq!(e.max_abs(), 0.0);
    }

    #[test]
    fn backscatter_minus_forward() {
        let (q, chi) = (0.3, c(1e-9, 0.0));
        let fwd = effective_kernel_tensor(Vec3::EZ, Vec3::EZ, q, chi).unwrap();
        let back = effective_kernel_tensor(-Vec3::EZ, Vec3::EZ, q, chi).unwrap();
        let diff = (fwd - back) * (1.0 / chi.re);
        assert!(diff.max_abs_diff(&Dyadic::scalar(c(0.4 * q * q, 0.0))) < 1e-7);
    }
}
