//! Vacuum dyadic Green function with `k = 1`, its far-field part, and a
//! finite-difference check of the wave equations it satisfies.
//!
//! Only the regular part is returned. The `δ(r − r′)·I/3` contribution at
//! coincidence is never included; callers that integrate through the source
//! point must add it themselves.

use crate::error::{Error, Result};
use crate::tensor::{Dyadic, Position, Vec3};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Default coincidence threshold for [`greens_vacuum`].
pub const COINCIDENCE_EPS: f64 = 1e-9;
/// Default minimum separation accepted by [`greens_farfield`].
pub const FARFIELD_MIN: f64 = 10.0;

/// Coefficients `(A, B)` with `G₀ = A·I + B·ŝŝ` at separation `s`.
#[inline]
pub(crate) fn scalar_parts(s: f64) -> (Complex64, Complex64) {
    let inv = 1.0 / s;
    let pre = Complex64::from_polar(inv / (4.0 * PI), s);
    let a = pre * Complex64::new(-1.0 + inv * inv, -inv);
    let b = pre * Complex64::new(1.0 - 3.0 * inv * inv, 3.0 * inv);
    (a, b)
}

fn separation(r: Position, rp: Position, eps: f64) -> Result<(f64, Vec3)> {
    if !(r.is_finite() && rp.is_finite()) {
        return Err(Error::NonFinite("greens position"));
    }
    let d = r - rp;
    let s = d.norm();
    if s < eps {
        return Err(Error::Coincident {
            separation: s,
            threshold: eps,
        });
    }
    Ok((s, d * (1.0 / s)))
}

/// `G₀(r, r′)` for `|r − r′| ≥ 1e-9`.
///
/// ```
/// use granular_decay::{greens::greens_vacuum, Position};
/// let g = greens_vacuum(Position::new(0.0, 0.0, 3.0), Position::ZERO).unwrap();
/// let h = greens_vacuum(Position::ZERO, Position::new(0.0, 0.0, 3.0)).unwrap();
/// assert_eq!(g, h.transpose());
/// ```
pub fn greens_vacuum(r: Position, rp: Position) -> Result<Dyadic> {
    greens_vacuum_eps(r, rp, COINCIDENCE_EPS)
}

/// [`greens_vacuum`] with an explicit coincidence threshold.
pub fn greens_vacuum_eps(r: Position, rp: Position, eps: f64) -> Result<Dyadic> {
    let (s, u) = separation(r, rp, eps)?;
    let (a, b) = scalar_parts(s);
    Ok(Dyadic::scalar(a) + Dyadic::outer(u, u) * b)
}

/// Far-field part `−(I − ŝŝ)e^{is}/(4πs)`, for `|r − r′| ≥ 10`.
pub fn greens_farfield(r: Position, rp: Position) -> Result<Dyadic> {
    greens_farfield_min(r, rp, FARFIELD_MIN)
}

/// [`greens_farfield`] with an explicit minimum separation.
pub fn greens_farfield_min(r: Position, rp: Position, s_min: f64) -> Result<Dyadic> {
    let (s, u) = separation(r, rp, COINCIDENCE_EPS)?;
    if s < s_min {
        return Err(Error::TooClose {
            separation: s,
            minimum: s_min,
        });
    }
    let pre = -Complex64::from_polar(1.0 / (4.0 * PI * s), s);
    Ok((Dyadic::identity() - Dyadic::outer(u, u)) * pre)
}

/// Relative residuals of the two wave equations, each normalized by `max|G|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveResiduals {
    /// `(IΔ − 3∇∇)·G + G`.
    pub reduced: f64,
    /// `−∇×∇×G + G`.
    pub curl_curl: f64,
}

impl WaveResiduals {
    pub fn max(&self) -> f64 {
        self.reduced.max(self.curl_curl)
    }
}

/// Second derivatives `∂_i∂_j G(r)` in the first argument by central differences.
fn hessian<F>(green: &F, r: Position, h: f64) -> Result<[[Dyadic; 3]; 3]>
where
    F: Fn(Position) -> Result<Dyadic>,
{
    let e = [Vec3::EX, Vec3::EY, Vec3::EZ];
    let g0 = green(r)?;
    let mut out = [[Dyadic::zero(); 3]; 3];
    for i in 0..3 {
        let plus = green(r + e[i] * h)?;
        let minus = green(r - e[i] * h)?;
        out[i][i] = (plus + minus - g0 * 2.0) * (1.0 / (h * h));
        for j in (i + 1)..3 {
            let pp = green(r + e[i] * h + e[j] * h)?;
            let pm = green(r + e[i] * h - e[j] * h)?;
            let mp = green(r - e[i] * h + e[j] * h)?;
            let mm = green(r - e[i] * h - e[j] * h)?;
            let d = (pp - pm - mp + mm) * (1.0 / (4.0 * h * h));
            out[i][j] = d;
            out[j][i] = d;
        }
    }
    Ok(out)
}

/// Wave-equation residuals for any Green-function candidate `green(r)` at
/// fixed source point.
pub fn wave_identity_residuals_with<F>(green: F, r: Position, h: f64) -> Result<WaveResiduals>
where
    F: Fn(Position) -> Result<Dyadic>,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidStep(h));
    }
    let g = green(r)?;
    let hess = hessian(&green, r, h)?;
    let mut lap = Dyadic::zero();
    for (i, row) in hess.iter().enumerate() {
        lap += row[i];
    }
    // (∇∇·G)_ab = Σ_c ∂_a∂_c G_cb
    let mut grad_div = Dyadic::zero();
    for a in 0..3 {
        for b in 0..3 {
            let mut acc = Complex64::new(0.0, 0.0);
            for (c, hc) in hess[a].iter().enumerate() {
                acc += hc.0[c][b];
            }
            grad_div.0[a][b] = acc;
        }
    }
    let scale = g.max_abs();
    let reduced = (lap - grad_div * 3.0 + g).max_abs() / scale;
    let curl_curl = (lap - grad_div + g).max_abs() / scale;
    Ok(WaveResiduals { reduced, curl_curl })
}

/// Largest relative residual of the wave equations for [`greens_vacuum`],
/// using central differences of step `h` in the first argument.
pub fn verify_wave_identity(r: Position, rp: Position, h: f64) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidStep(h));
    }
    let s = (r - rp).norm();
    if s < 10.0 * h {
        return Err(Error::TooClose {
            separation: s,
            minimum: 10.0 * h,
        });
    }
    Ok(wave_identity_residuals_with(|x| greens_vacuum(x, rp), r, h)?.max())
}
