//! First-order Born term of the averaged Green function: explicit
//! configuration sums and the analytic slab integral they are compared with.

use super::estimators::DyadicEstimate;
use super::geometry::{ConfigSource, SlabGeometry, SphereConfiguration};
use crate::error::{invalid, Error, Result};
use crate::greens::{greens_vacuum, scalar_parts};
use crate::quad::{gauss_legendre, integrate_with_breaks, Integrand, QuadOptions};
use crate::tensor::{Dyadic, Position, Vec3};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

/// Minimum height of the observation points above the highest sphere surface.
pub const FAR_ZONE_MIN: f64 = 5.0;

/// Product rule on the unit ball: Gauss–Legendre in `r` (with the `r²`
/// weight folded in) and in `cos θ`, uniform in `φ`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallRule {
    nodes: Vec<Vec3>,
    weights: Vec<f64>,
}

impl BallRule {
    pub fn new(n_r: usize, n_mu: usize, n_phi: usize) -> Result<Self> {
        if n_r == 0 || n_mu == 0 || n_phi == 0 {
            return Err(invalid("ball rule orders must be positive"));
        }
        let (xr, wr) = gauss_legendre(n_r);
        let (xm, wm) = gauss_legendre(n_mu);
        let mut nodes = Vec::with_capacity(n_r * n_mu * n_phi);
        let mut weights = Vec::with_capacity(n_r * n_mu * n_phi);
        for (&x, &w) in xr.iter().zip(&wr) {
            let r = 0.5 * (x + 1.0);
            let wr = 0.5 * w * r * r;
            for (&mu, &wmu) in xm.iter().zip(&wm) {
                let sin = (1.0 - mu * mu).max(0.0).sqrt();
                for k in 0..n_phi {
                    let phi = 2.0 * PI * (k as f64 + 0.5) / n_phi as f64;
                    nodes.push(Vec3::new(r * sin * phi.cos(), r * sin * phi.sin(), r * mu));
                    weights.push(wr * wmu * 2.0 * PI / n_phi as f64);
                }
            }
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫_{|x − c| < a} f(x) d³x`.
    pub fn integrate<T: Integrand>(&self, center: Position, a: f64, mut f: impl FnMut(Position) -> T) -> T {
        let scale = a * a * a;
        let mut acc = T::zero();
        for (n, &w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(center + *n * a) * (w * scale);
        }
        acc
    }
}

impl Default for BallRule {
    /// 5 × 5 × 5 nodes.
    fn default() -> Self {
        Self::new(5, 5, 5).expect("positive orders")
    }
}

/// `G₀(r, x)·G₀(x, r′)` accumulated with weight `w` into `acc`.
#[inline]
fn accumulate_product(acc: &mut [[Complex64; 3]; 3], r: Position, x: Position, rp: Position, w: f64) {
    let d1 = r - x;
    let d2 = x - rp;
    let s1 = d1.norm();
    let s2 = d2.norm();
    let u1 = (d1 * (1.0 / s1)).to_array();
    let u2 = (d2 * (1.0 / s2)).to_array();
    let (a1, b1) = scalar_parts(s1);
    let (a2, b2) = scalar_parts(s2);
    let dot = u1[0] * u2[0] + u1[1] * u2[1] + u1[2] * u2[2];
    let c0 = a1 * a2 * w;
    let c1 = a1 * b2 * w;
    let c2 = b1 * a2 * w;
    let c3 = b1 * b2 * (dot * w);
    for i in 0..3 {
        for j in 0..3 {
            acc[i][j] += c1 * (u2[i] * u2[j]) + c2 * (u1[i] * u1[j]) + c3 * (u1[i] * u2[j]);
        }
        acc[i][i] += c0;
    }
}

fn check_far_zone(geometry: &SlabGeometry, p: Position) -> Result<()> {
    let clearance = p.z - geometry.radius_a;
    if !(clearance >= FAR_ZONE_MIN) {
        return Err(Error::FarZone(format!(
            "observation point at height {} is within {FAR_ZONE_MIN} of the sphere layer",
            p.z
        )));
    }
    Ok(())
}

/// Per-configuration sums without the `−χ` prefactor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BornSample {
    /// `Σ_i ∫_{ball i} G₀(r, x)·G₀(x, r′) d³x`.
    pub spheres: Dyadic,
    /// `Σ_i v₀·G₀(r, c_i)·G₀(c_i, r′)`: every sphere shrunk to its centre.
    pub points: Dyadic,
}

/// Evaluates both sums for one configuration.
pub fn born_sample(config: &SphereConfiguration, r: Position, rp: Position, rule: &BallRule) -> Result<BornSample> {
    let g = &config.geometry;
    check_far_zone(g, r)?;
    check_far_zone(g, rp)?;
    let a = g.radius_a;
    let v0 = 4.0 * PI * a * a * a / 3.0;
    let scale = a * a * a;
    let zero = Complex64::new(0.0, 0.0);
    let mut spheres = [[zero; 3]; 3];
    let mut points = [[zero; 3]; 3];
    for &c in &config.centers {
        for (n, &w) in rule.nodes.iter().zip(&rule.weights) {
            accumulate_product(&mut spheres, r, c + *n * a, rp, w * scale);
        }
        accumulate_product(&mut points, r, c, rp, v0);
    }
    let out = BornSample {
        spheres: Dyadic(spheres),
        points: Dyadic(points),
    };
    if !(out.spheres.is_finite() && out.points.is_finite()) {
        return Err(Error::NonFinite("born_sample"));
    }
    Ok(out)
}

/// Estimates over an ensemble of the first-order Born term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BornEstimates {
    /// `−χ·Σ_i ∫_{ball i} G₀G₀`, the configuration-averaged first-order term.
    pub full: DyadicEstimate,
    /// The same with every sphere shrunk to a point of volume `v₀`.
    pub points: DyadicEstimate,
    /// `full − points` per configuration: the finite-size part, estimated
    /// from paired samples so the large configuration-to-configuration
    /// fluctuations of the sphere positions cancel.
    pub finite_size: DyadicEstimate,
}

/// Runs [`born_sample`] over `configs` and forms the three paired estimates.
pub fn born_first_order_study<S: ConfigSource + ?Sized>(
    configs: &S,
    r: Position,
    rp: Position,
    chi: Complex64,
    rule: &BallRule,
) -> Result<BornEstimates> {
    let samples = configs.map_configs(|c| born_sample(c, r, rp, rule))?;
    let scale = -chi;
    let full: Vec<Dyadic> = samples.iter().map(|s| s.spheres * scale).collect();
    let points: Vec<Dyadic> = samples.iter().map(|s| s.points * scale).collect();
    let finite: Vec<Dyadic> = samples.iter().map(|s| (s.spheres - s.points) * scale).collect();
    Ok(BornEstimates {
        full: DyadicEstimate::from_samples(&full)?,
        points: DyadicEstimate::from_samples(&points)?,
        finite_size: DyadicEstimate::from_samples(&finite)?,
    })
}

/// Configuration average of `−χ·Σ_i ∫_{ball i} G₀(r, x)·G₀(x, r′) d³x`.
pub fn born_first_order_average<S: ConfigSource + ?Sized>(
    configs: &S,
    r: Position,
    rp: Position,
    chi: Complex64,
    rule: &BallRule,
) -> Result<DyadicEstimate> {
    if chi == Complex64::new(0.0, 0.0) {
        // Skip the work; still validate the sample count.
        let n = configs.config_count();
        if n < 2 {
            return Err(Error::InsufficientSamples(n));
        }
        return Ok(DyadicEstimate {
            mean: Dyadic::zero(),
            std_error_re: [[0.0; 3]; 3],
            std_error_im: [[0.0; 3]; 3],
            n_samples: n,
        });
    }
    Ok(born_first_order_study(configs, r, rp, chi, rule)?.full)
}

/// Analytic first-order term over the slab, split into the part a bulk
/// effective medium predicts and the finite-size surface correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticFirstOrder {
    /// `−nv0·χ·∫_V G₀(r, c)·G₀(c, r′) d³c`.
    pub bulk: Dyadic,
    /// `+nv0·χ·(q²/5)·∫_V (1 + ê·ê′)·G₀·G₀ d³c`, with `ê` pointing from `c`
    /// to `r` and `ê′` from `c` to `r′`.
    pub surface: Dyadic,
    /// Quadrature error estimate of the outermost integration.
    pub quad_error: f64,
    /// Rough size of the contribution from beyond the truncated slab,
    /// `nv0·|χ|/(32π)·(1/s_side + 1/s_bottom)`.
    pub tail_estimate: f64,
}

impl AnalyticFirstOrder {
    pub fn total(&self) -> Dyadic {
        self.bulk + self.surface
    }
}

#[derive(Clone, Copy)]
struct Pair(Dyadic, Dyadic);

impl Add for Pair {
    type Output = Pair;
    fn add(self, o: Pair) -> Pair {
        Pair(self.0 + o.0, self.1 + o.1)
    }
}

impl Sub for Pair {
    type Output = Pair;
    fn sub(self, o: Pair) -> Pair {
        Pair(self.0 - o.0, self.1 - o.1)
    }
}

impl Mul<f64> for Pair {
    type Output = Pair;
    fn mul(self, s: f64) -> Pair {
        Pair(self.0 * s, self.1 * s)
    }
}

impl Integrand for Pair {
    fn zero() -> Self {
        Pair(Dyadic::zero(), Dyadic::zero())
    }
    fn magnitude(&self) -> f64 {
        self.0.max_abs().max(self.1.max_abs())
    }
}

fn breaks(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).ceil().max(1.0) as usize;
    (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect()
}

/// [`analytic_first_order_with`] at relative tolerance `1e-7`.
pub fn analytic_first_order(
    r: Position,
    rp: Position,
    chi: Complex64,
    geometry: &SlabGeometry,
    nv0: f64,
    q: f64,
) -> Result<AnalyticFirstOrder> {
    analytic_first_order_with(r, rp, chi, geometry, nv0, q, 1e-7)
}

/// First-order term for sphere centres uniformly filling the slab, by nested
/// adaptive quadrature over `z`, `x`, `y`.
pub fn analytic_first_order_with(
    r: Position,
    rp: Position,
    chi: Complex64,
    geometry: &SlabGeometry,
    nv0: f64,
    q: f64,
    rel_tol: f64,
) -> Result<AnalyticFirstOrder> {
    check_far_zone(geometry, r)?;
    check_far_zone(geometry, rp)?;
    if !(nv0 >= 0.0 && q >= 0.0) {
        return Err(invalid("filling factor and q must be non-negative"));
    }
    let hw = 0.5 * geometry.width_w;
    let lat = breaks(-hw, hw, 2.0);
    let dep = breaks(-geometry.depth_l, 0.0, 2.0);
    let inner = QuadOptions::new(1e-300, rel_tol * 1e-2).with_max_intervals(4000);
    let mut failure: Option<Error> = None;
    let mut record = |e: Error| {
        failure.get_or_insert(e);
    };
    let point = |c: Position| -> Result<Pair> {
        let g = greens_vacuum(r, c)?.dot(&greens_vacuum(c, rp)?);
        let e = (r - c).normalized().ok_or(Error::NonFinite("direction"))?;
        let ep = (rp - c).normalized().ok_or(Error::NonFinite("direction"))?;
        Ok(Pair(g, g * (1.0 + e.dot(ep))))
    };
    let outer_result = {
        let mut plane = |z: f64| -> Pair {
            let row = |x: f64| -> Result<Pair> {
                let mut inner_fail = None;
                let res = integrate_with_breaks(
                    |y: f64| match point(Position::new(x, y, z)) {
                        Ok(v) => v,
                        Err(e) => {
                            inner_fail.get_or_insert(e);
                            Pair::zero()
                        }
                    },
                    &lat,
                    inner,
                );
                match (res, inner_fail) {
                    (_, Some(e)) | (Err(e), None) => Err(e),
                    (Ok(v), None) => Ok(v.value),
                }
            };
            let mut row_fail = None;
            let res = integrate_with_breaks(
                |x: f64| match row(x) {
                    Ok(v) => v,
                    Err(e) => {
                        row_fail.get_or_insert(e);
                        Pair::zero()
                    }
                },
                &lat,
                QuadOptions::new(1e-300, rel_tol * 1e-1).with_max_intervals(4000),
            );
            match (res, row_fail) {
                (_, Some(e)) | (Err(e), None) => {
                    record(e);
                    Pair::zero()
                }
                (Ok(v), None) => v.value,
            }
        };
        integrate_with_breaks(&mut plane, &dep, QuadOptions::new(1e-300, rel_tol).with_max_intervals(4000))
    };
    if let Some(e) = failure {
        return Err(e);
    }
    let res = outer_result?;
    let Pair(plain, weighted) = res.value;
    let pre = nv0 * chi;
    let bulk = plain * (-pre);
    let surface = weighted * (pre * (q * q / 5.0));
    let height = 0.5 * (r.z + rp.z);
    let s_side = (height * height + hw * hw).sqrt();
    let s_bottom = height + geometry.depth_l;
    let tail_estimate = nv0 * chi.norm() / (32.0 * PI) * (1.0 / s_side + 1.0 / s_bottom);
    Ok(AnalyticFirstOrder {
        bulk,
        surface,
        quad_error: res.error * nv0 * chi.norm(),
        tail_estimate,
    })
}
