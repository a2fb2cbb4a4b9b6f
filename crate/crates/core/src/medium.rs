//! Statistical description of the granular half-space: susceptibility model,
//! pair-overlap functions, effective susceptibility and the mean filling
//! profile next to the surface.

use crate::error::{invalid, Error, Result};
use crate::quad::{integrate_with_breaks, QuadOptions};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Volume of a sphere of radius `a`.
pub fn sphere_volume(a: f64) -> f64 {
    4.0 * PI * a * a * a / 3.0
}

/// Susceptibility of the sphere material at the working frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LorentzSusceptibility {
    /// Single damped resonance, `χ(ω) = s·ω₀²/(ω₀² − ω² − iγω)`.
    Lorentz {
        strength: f64,
        resonance: f64,
        damping: f64,
    },
    /// A fixed value, used when only `χ(ω_a)` matters.
    Fixed(Complex64),
}

impl LorentzSusceptibility {
    pub fn lorentz(strength: f64, resonance: f64, damping: f64) -> Result<Self> {
        if !(strength >= 0.0 && strength.is_finite()) {
            return Err(invalid(format!("strength must be finite and >= 0, got {strength}")));
        }
        if !(resonance > 0.0 && resonance.is_finite()) {
            return Err(invalid(format!("resonance must be finite and > 0, got {resonance}")));
        }
        if !(damping >= 0.0 && damping.is_finite()) {
            return Err(invalid(format!("damping must be finite and >= 0, got {damping}")));
        }
        Ok(Self::Lorentz {
            strength,
            resonance,
            damping,
        })
    }

    /// Fixed value; `Im χ < 0` would describe a gain medium and is rejected.
    pub fn fixed(chi: Complex64) -> Result<Self> {
        if !(chi.re.is_finite() && chi.im.is_finite()) {
            return Err(Error::NonFinite("susceptibility"));
        }
        if chi.im < 0.0 {
            return Err(invalid(format!("Im chi must be >= 0, got {}", chi.im)));
        }
        Ok(Self::Fixed(chi))
    }

    /// `χ(ω)` for `ω > 0`.
    ///
    /// ```
    /// use granular_decay::medium::LorentzSusceptibility;
    /// let m = LorentzSusceptibility::lorentz(2.0, 1.0, 0.1).unwrap();
    /// let chi = m.chi_at(1.0).unwrap();
    /// assert!(chi.re.abs() < 1e-15 && (chi.im - 20.0).abs() < 1e-12);
    /// ```
    pub fn chi_at(&self, omega: f64) -> Result<Complex64> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(invalid(format!("omega must be finite and > 0, got {omega}")));
        }
        match *self {
            Self::Fixed(chi) => Ok(chi),
            Self::Lorentz {
                strength,
                resonance,
                damping,
            } => {
                let w0 = resonance * resonance;
                let den = Complex64::new(w0 - omega * omega, -damping * omega);
                let chi = strength * w0 / den;
                if chi.re.is_finite() && chi.im.is_finite() {
                    Ok(chi)
                } else {
                    Err(Error::NonFinite("chi_at"))
                }
            }
        }
    }
}

/// Radius, filling factor and susceptibility of the sphere medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumSpec {
    /// Sphere radius in units of `c/ω`, i.e. the size parameter `q`.
    pub radius_q: f64,
    /// Filling factor `n·v₀`.
    pub density_nv0: f64,
    pub chi: LorentzSusceptibility,
}

impl MediumSpec {
    /// Validates `q > 0` and `0 ≤ nv0 < 1`. Logs a warning outside the dilute,
    /// small-sphere regime (`nv0 ≥ 0.1` or `q ≥ 1`).
    pub fn new(radius_q: f64, density_nv0: f64, chi: LorentzSusceptibility) -> Result<Self> {
        if !(radius_q > 0.0 && radius_q.is_finite()) {
            return Err(invalid(format!("radius q must be finite and > 0, got {radius_q}")));
        }
        if !(0.0..1.0).contains(&density_nv0) {
            return Err(invalid(format!("filling factor must lie in [0, 1), got {density_nv0}")));
        }
        if density_nv0 >= 0.1 {
            log::warn!("filling factor {density_nv0} is outside the dilute regime (< 0.1)");
        }
        if radius_q >= 1.0 {
            log::warn!("sphere size q = {radius_q} is outside the small-sphere regime (< 1)");
        }
        Ok(Self {
            radius_q,
            density_nv0,
            chi,
        })
    }

    pub fn sphere_volume(&self) -> f64 {
        sphere_volume(self.radius_q)
    }

    /// Number density `n = nv0 / v₀`.
    pub fn number_density(&self) -> f64 {
        self.density_nv0 / self.sphere_volume()
    }

    pub fn is_dilute(&self) -> bool {
        self.density_nv0 < 0.1 && self.radius_q < 1.0
    }
}

/// Normalized overlap volume of two balls of radius `a` with centres `r`
/// apart: `1 − 3r/4a + r³/16a³` for `r < 2a`, zero beyond.
pub fn overlap_c(r: f64, a: f64) -> f64 {
    let x = r / a;
    if x >= 2.0 {
        return 0.0;
    }
    1.0 - 0.75 * x + x * x * x / 16.0
}

/// Second height moment of the lens shared by two balls of radius `a` whose
/// centres differ by `r` at polar angle `θ` to the surface normal; heights are
/// measured from the midpoint of the two centres.
pub fn overlap_i2(r: f64, cos_theta: f64, a: f64) -> f64 {
    let x = r / a;
    if x >= 2.0 {
        return 0.0;
    }
    let c2 = cos_theta * cos_theta;
    let bracket = 0.2 - 3.0 * x / 16.0 * (1.0 + c2) + x * x / 4.0 * c2 + x.powi(3) / 32.0 * (1.0 - 3.0 * c2)
        - x.powi(5) / 1280.0 * (3.0 - 5.0 * c2);
    sphere_volume(a) * a * a * bracket
}

/// [`overlap_i2`] by direct quadrature over the lens, to absolute tolerance
/// `tol`. The chord length in `y′` is integrated analytically; `x′` and the
/// height `h′` are integrated adaptively.
pub fn overlap_i2_numeric(r: f64, cos_theta: f64, a: f64, tol: f64) -> Result<f64> {
    if !(0.0..2.0 * a).contains(&r) {
        return Err(invalid(format!("separation must lie in [0, 2a), got {r}")));
    }
    if !(-1.0..=1.0).contains(&cos_theta) {
        return Err(invalid(format!("cos theta must lie in [-1, 1], got {cos_theta}")));
    }
    if !(tol > 0.0) {
        return Err(invalid(format!("tolerance must be > 0, got {tol}")));
    }
    let h = r * cos_theta;
    let x = r * (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
    let half = a - 0.5 * h.abs();
    let inner_opts = QuadOptions::new(tol * 1e-3 / a, 1e-10).with_max_intervals(400);
    let mut failure: Option<Error> = None;
    let slice = |hp: f64| -> f64 {
        let r1 = a * a - (0.5 * h - hp).powi(2);
        let r2 = a * a - (0.5 * h + hp).powi(2);
        if r1 <= 0.0 || r2 <= 0.0 {
            return 0.0;
        }
        let (r1, r2) = (r1.sqrt(), r2.sqrt());
        let lo = (0.5 * x - r1).max(-0.5 * x - r2);
        let hi = (0.5 * x + r1).min(-0.5 * x + r2);
        if hi <= lo {
            return 0.0;
        }
        let chord = |xp: f64| -> f64 {
            let y1 = (r1 * r1 - (xp - 0.5 * x).powi(2)).max(0.0).sqrt();
            let y2 = (r2 * r2 - (xp + 0.5 * x).powi(2)).max(0.0).sqrt();
            2.0 * y1.min(y2)
        };
        let mut pts = vec![lo];
        if x > 0.0 {
            let kink = -h * hp / x;
            if kink > lo && kink < hi {
                pts.push(kink);
            }
        }
        pts.push(hi);
        match integrate_with_breaks(chord, &pts, inner_opts) {
            Ok(res) => hp * hp * res.value,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    };
    let outer = integrate_with_breaks(slice, &[-half, 0.0, half], QuadOptions::new(tol, 1e-12));
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(outer?.value)
}

/// Effective susceptibility of the dilute sphere medium,
/// `nv0·χ·[1 − χ(1/3 − 22q²/75 − 2iq³/9)]`.
pub fn chi_effective(chi: Complex64, q: f64, nv0: f64) -> Complex64 {
    let corr = Complex64::new(1.0 / 3.0 - 22.0 * q * q / 75.0, -2.0 * q.powi(3) / 9.0);
    nv0 * chi * (1.0 - chi * corr)
}

/// Mean filling `⟨f⟩` at height `h` above the surface of a half-space `z < 0`
/// holding sphere centres of radius `a` with filling factor `nv0`.
///
/// The step function of the filled region is `½` on the surface, so the
/// profile is continuous with `⟨f⟩(0) = nv0/2`.
pub fn mean_filling_profile(h: f64, a: f64, nv0: f64) -> f64 {
    let v0 = sphere_volume(a);
    let n = nv0 / v0;
    let inside = if h < 0.0 {
        1.0
    } else if h == 0.0 {
        0.5
    } else {
        0.0
    };
    let mut out = nv0 * inside;
    if h.abs() < a {
        let sign = if h > 0.0 {
            1.0
        } else if h < 0.0 {
            -1.0
        } else {
            0.0
        };
        out += n * (0.5 * v0 * sign - PI * a * a * h + PI * h * h * h / 3.0);
    }
    out
}
