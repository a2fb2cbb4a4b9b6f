//! Special functions: generalized exponential integrals `E_n` for complex
//! argument, spherical Bessel and Hankel functions for complex argument, and
//! the Mie angular functions `π_l`, `τ_l`.
//!
//! All functions are pure; identical inputs give bit-identical outputs.

use crate::error::{Error, Result};
use crate::quad::{integrate_with_breaks, QuadOptions};
use num_complex::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn finite(z: Complex64, what: &'static str) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite(what))
    }
}

fn check_en_domain(x: Complex64) -> Result<()> {
    if !(x.re.is_finite() && x.im.is_finite()) {
        return Err(Error::Domain {
            function: "exp_integral_en",
            reason: "argument is not finite".into(),
        });
    }
    if x.norm() == 0.0 {
        return Err(Error::Domain {
            function: "exp_integral_en",
            reason: "x = 0".into(),
        });
    }
    if x.im == 0.0 && x.re < 0.0 {
        return Err(Error::Domain {
            function: "exp_integral_en",
            reason: format!("x = {} lies on the branch cut", x.re),
        });
    }
    Ok(())
}

/// Generalized exponential integral `E_n(x) = ∫₁^∞ e^{−xt}/tⁿ dt`.
///
/// `E_0(x) = e^{−x}/x` is returned in closed form. For `n ≥ 1` the integral is
/// evaluated along the ray `t = 1 + s·e^{−i arg x}`, on which `e^{−xt}` decays
/// monotonically as `e^{−x}·e^{−|x|s}`; this removes the oscillation for
/// arguments near the imaginary axis such as `u = −2iζ`.
pub fn exp_integral_en(n: u32, x: Complex64) -> Result<Complex64> {
    check_en_domain(x)?;
    let ex = (-x).exp();
    if n == 0 {
        return finite(ex / x, "exp_integral_en");
    }
    if x.arg().sin().abs() < 0.5 && x.re < 0.0 {
        return finite(exp_integral_en_series(n, x), "exp_integral_en");
    }
    finite(exp_integral_en_ray(n, x)?, "exp_integral_en")
}

fn exp_integral_en_ray(n: u32, x: Complex64) -> Result<Complex64> {
    let ex = (-x).exp();
    let modulus = x.norm();
    let rot = Complex64::from_polar(1.0, -x.arg());
    let step = rot / modulus;
    // ∫₀^∞ e^{−w} (1 + w·e^{−iφ}/|x|)^{−n} dw; e^{−60} is below double precision.
    let integrand = |w: f64| -> Complex64 {
        let t = Complex64::new(1.0, 0.0) + step * w;
        t.powi(-(n as i32)) * (-w).exp()
    };
    let res = integrate_with_breaks(
        integrand,
        &[0.0, 0.5, 2.0, 8.0, 20.0, 60.0],
        QuadOptions::new(1e-300, 1e-14).with_max_intervals(4000),
    )?;
    Ok(ex * step * res.value)
}

/// Ascending series for `n ≥ 1`, used next to the negative real axis where the
/// rotated ray would pass close to the pole of `t^{−n}` at the origin. There the
/// result is itself of size `e^{|x|}`, so the alternating terms cancel mildly.
fn exp_integral_en_series(n: u32, x: Complex64) -> Complex64 {
    const EULER: f64 = 0.577_215_664_901_532_9;
    let m = n as i64 - 1;
    let mut psi = -EULER;
    for j in 1..n {
        psi += 1.0 / j as f64;
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut power = Complex64::new(1.0, 0.0); // (−x)^k / k!
    let mut special = Complex64::new(0.0, 0.0);
    let mut k: i64 = 0;
    loop {
        if k == m {
            special = power * (psi - x.ln());
        } else {
            sum -= power / (k - m) as f64;
        }
        k += 1;
        power *= -x / k as f64;
        if k > m + 1 && k as f64 > x.norm() && power.norm() < 1e-18 * (sum + special).norm() {
            break;
        }
    }
    special + sum
}

/// Truncated asymptotic series
/// `(e^{−x}/x)·Σ_{k<terms} (−1)^k n(n+1)…(n+k−1)/x^k`.
///
/// Requires `|x| ≥ 1` and `1 ≤ terms ≤ 6`.
pub fn exp_integral_en_asymptotic(n: u32, x: Complex64, terms: usize) -> Result<Complex64> {
    if !(1..=6).contains(&terms) {
        return Err(crate::error::invalid(format!(
            "asymptotic series supports 1..=6 terms, got {terms}"
        )));
    }
    if !(x.norm() >= 1.0) {
        return Err(Error::Domain {
            function: "exp_integral_en_asymptotic",
            reason: format!("|x| = {} < 1", x.norm()),
        });
    }
    let inv = 1.0 / x;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..terms {
        term *= -(n as f64 + k as f64 - 1.0) * inv;
        sum += term;
    }
    finite((-x).exp() * inv * sum, "exp_integral_en_asymptotic")
}

/// Power series of `j_l(z)`, accurate for |z| ≲ 1.
fn bessel_j_series(l: usize, z: Complex64) -> Complex64 {
    let mut double_fact = 1.0;
    for k in 0..=l {
        double_fact *= (2 * k + 1) as f64;
    }
    let lead = z.powi(l as i32) / double_fact;
    let w = -0.5 * z * z;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..60 {
        term *= w / (k as f64 * (2 * l + 2 * k + 1) as f64);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    lead * sum
}

/// Spherical Bessel functions `j_0(z) … j_lmax(z)`.
///
/// Power series for |z| ≤ 1, Miller's downward recurrence otherwise,
/// normalized against whichever of `j_0`, `j_1` has the larger modulus.
pub fn spherical_bessel_j_all(lmax: usize, z: Complex64) -> Vec<Complex64> {
    if z.norm() <= 1.0 {
        return (0..=lmax).map(|l| bessel_j_series(l, z)).collect();
    }
    let start = lmax + z.norm().ceil() as usize + 40;
    let mut vals = vec![Complex64::new(0.0, 0.0); start + 2];
    vals[start + 1] = Complex64::new(0.0, 0.0);
    vals[start] = Complex64::new(1.0, 0.0);
    for k in (1..=start).rev() {
        let prev = (2 * k + 1) as f64 / z * vals[k] - vals[k + 1];
        vals[k - 1] = prev;
        if prev.norm() > 1e100 {
            let s = 1e-100;
            for v in vals[k - 1..].iter_mut() {
                *v *= s;
            }
        }
    }
    let (s, c) = (z.sin(), z.cos());
    let j0 = s / z;
    let j1 = s / (z * z) - c / z;
    let scale = if j0.norm() >= j1.norm() {
        j0 / vals[0]
    } else {
        j1 / vals[1]
    };
    vals.truncate(lmax + 1);
    vals.iter().map(|v| v * scale).collect()
}

/// Spherical Bessel function of the first kind `j_l(z)`.
///
/// Finite at `z = 0` (`j_l(0) = δ_{l0}`); guaranteed accurate for `l ≤ 10`.
pub fn spherical_bessel_j(l: usize, z: Complex64) -> Complex64 {
    spherical_bessel_j_all(l, z)[l]
}

/// Spherical Hankel functions of the first kind `h_0^{(1)}(z) … h_lmax^{(1)}(z)`
/// by upward recurrence from the closed forms of orders 0 and 1.
pub fn spherical_hankel1_all(lmax: usize, z: Complex64) -> Result<Vec<Complex64>> {
    if z.norm() == 0.0 {
        return Err(Error::Domain {
            function: "spherical_hankel1",
            reason: "z = 0".into(),
        });
    }
    let e = (I * z).exp();
    let mut out = Vec::with_capacity(lmax + 1);
    out.push(-I * e / z);
    if lmax >= 1 {
        out.push(-e * (z + I) / (z * z));
    }
    for l in 1..lmax {
        let next = (2 * l + 1) as f64 / z * out[l] - out[l - 1];
        out.push(next);
    }
    for v in &out {
        finite(*v, "spherical_hankel1")?;
    }
    Ok(out)
}

/// `h_l^{(1)}(z) = j_l(z) + i·y_l(z)`.
pub fn spherical_hankel1(l: usize, z: Complex64) -> Result<Complex64> {
    Ok(spherical_hankel1_all(l, z)?[l])
}

/// Spherical Bessel function of the second kind, `y_l = −i (h_l^{(1)} − j_l)`.
pub fn spherical_bessel_y(l: usize, z: Complex64) -> Result<Complex64> {
    let h = spherical_hankel1(l, z)?;
    Ok(-I * (h - spherical_bessel_j(l, z)))
}

/// Mie angular functions `π_0..π_lmax`, `τ_0..τ_lmax` at `u = cos θ`.
pub fn angular_pi_tau_all(lmax: usize, u: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(-1.0..=1.0).contains(&u) {
        return Err(Error::Domain {
            function: "angular_pi_tau",
            reason: format!("u = {u} outside [-1, 1]"),
        });
    }
    let mut pi = vec![0.0; lmax + 1];
    let mut tau = vec![0.0; lmax + 1];
    if lmax >= 1 {
        pi[1] = 1.0;
        tau[1] = u;
    }
    for l in 2..=lmax {
        let lf = l as f64;
        pi[l] = (2.0 * lf - 1.0) / (lf - 1.0) * u * pi[l - 1] - lf / (lf - 1.0) * pi[l - 2];
        tau[l] = lf * u * pi[l] - (lf + 1.0) * pi[l - 1];
    }
    Ok((pi, tau))
}

/// `(π_l(u), τ_l(u))` with `π_l = P¹_l(cos θ)/sin θ`, `τ_l = dP¹_l(cos θ)/dθ`.
///
/// Convention: `P¹_l` without the Condon–Shortley phase, so `π_1 = 1` and
/// `τ_1 = u`. This is the sign for which the partial-wave sums reproduce a
/// forward-scattered field parallel to the incident polarization.
pub fn angular_pi_tau(l: usize, u: f64) -> Result<(f64, f64)> {
    let (pi, tau) = angular_pi_tau_all(l, u)?;
    Ok((pi[l], tau[l]))
}
