//! Sample means with standard errors, and the geometric estimators of the
//! filling statistics.

use super::geometry::{ConfigSource, SphereConfiguration};
use crate::error::{invalid, Error, Result};
use crate::medium::sphere_volume;
use crate::tensor::{Dyadic, Position};
use num_complex::Complex64;

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateWithError<T> {
    pub mean: T,
    pub std_error: f64,
    pub n_samples: usize,
}

fn mean_and_error(samples: &[f64]) -> Result<(f64, f64)> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::InsufficientSamples(n));
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    Ok((mean, (var / n as f64).sqrt()))
}

impl EstimateWithError<f64> {
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        let (mean, std_error) = mean_and_error(samples)?;
        Ok(Self {
            mean,
            std_error,
            n_samples: samples.len(),
        })
    }

    /// `(mean − target)/σ`; zero when both the deviation and `σ` vanish.
    pub fn z_score(&self, target: f64) -> f64 {
        z(self.mean - target, self.std_error)
    }

    /// `|mean − target| ≤ k·σ`, with a round-off allowance for exact estimators.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error + 1e-14 * (1.0 + target.abs())
    }
}

fn z(dev: f64, sigma: f64) -> f64 {
    if sigma > 0.0 {
        dev / sigma
    } else if dev.abs() <= 1e-14 {
        0.0
    } else {
        dev.signum() * f64::INFINITY
    }
}

/// Entrywise estimate of a complex 3×3 tensor, with separate standard errors
/// for the real and imaginary parts of each entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicEstimate {
    pub mean: Dyadic,
    pub std_error_re: [[f64; 3]; 3],
    pub std_error_im: [[f64; 3]; 3],
    pub n_samples: usize,
}

impl DyadicEstimate {
    pub fn from_samples(samples: &[Dyadic]) -> Result<Self> {
        let n = samples.len();
        if n < 2 {
            return Err(Error::InsufficientSamples(n));
        }
        let mut mean = Dyadic::zero();
        let mut std_error_re = [[0.0; 3]; 3];
        let mut std_error_im = [[0.0; 3]; 3];
        let mut column = vec![0.0; n];
        for i in 0..3 {
            for j in 0..3 {
                for (slot, s) in column.iter_mut().zip(samples) {
                    *slot = s.0[i][j].re;
                }
                let (re, se_re) = mean_and_error(&column)?;
                for (slot, s) in column.iter_mut().zip(samples) {
                    *slot = s.0[i][j].im;
                }
                let (im, se_im) = mean_and_error(&column)?;
                mean.0[i][j] = Complex64::new(re, im);
                std_error_re[i][j] = se_re;
                std_error_im[i][j] = se_im;
            }
        }
        Ok(Self {
            mean,
            std_error_re,
            std_error_im,
            n_samples: n,
        })
    }

    /// Real and imaginary z-scores of entry `(i, j)` against `target`.
    pub fn z_scores(&self, target: &Dyadic, i: usize, j: usize) -> (f64, f64) {
        let d = self.mean.0[i][j] - target.0[i][j];
        (z(d.re, self.std_error_re[i][j]), z(d.im, self.std_error_im[i][j]))
    }

    /// Largest `|z|` over all entries and both parts.
    pub fn max_abs_z(&self, target: &Dyadic) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let (a, b) = self.z_scores(target, i, j);
                worst = worst.max(a.abs()).max(b.abs());
            }
        }
        worst
    }
}

fn probe_margin_ok(config: &SphereConfiguration, p: Position) -> bool {
    let g = &config.geometry;
    let margin = 2.0 * g.radius_a;
    g.periodic_lateral || (p.x.abs() + margin <= 0.5 * g.width_w && p.y.abs() + margin <= 0.5 * g.width_w)
}

/// Mean filling `⟨f⟩` on the axis `(0, 0, h)` for each probe height.
pub fn estimate_filling<S: ConfigSource + ?Sized>(
    configs: &S,
    probe_heights: &[f64],
) -> Result<Vec<EstimateWithError<f64>>> {
    let n = configs.config_count();
    if n < 2 {
        return Err(Error::InsufficientSamples(n));
    }
    let rows = configs.map_configs(|c| {
        Ok(probe_heights
            .iter()
            .map(|&h| c.filling_at(Position::new(0.0, 0.0, h)) as f64)
            .collect::<Vec<_>>())
    })?;
    (0..probe_heights.len())
        .map(|k| EstimateWithError::from_samples(&rows.iter().map(|r| r[k]).collect::<Vec<_>>()))
        .collect()
}

fn check_bulk(config: &SphereConfiguration, p: Position) -> Result<()> {
    let g = &config.geometry;
    let margin = 2.0 * g.radius_a;
    let deep = p.z <= -margin && p.z >= -g.depth_l + margin;
    if !(deep && probe_margin_ok(config, p)) {
        return Err(invalid(format!(
            "probe point ({}, {}, {}) must lie at least one diameter inside the slab",
            p.x, p.y, p.z
        )));
    }
    Ok(())
}

/// Two-point filling correlation `⟨f(r₁)f(r₂)⟩`.
pub fn estimate_pair_overlap<S: ConfigSource + ?Sized>(
    configs: &S,
    r1: Position,
    r2: Position,
) -> Result<EstimateWithError<f64>> {
    let samples = configs.map_configs(|c| {
        check_bulk(c, r1)?;
        check_bulk(c, r2)?;
        Ok((c.filling_at(r1) * c.filling_at(r2)) as f64)
    })?;
    EstimateWithError::from_samples(&samples)
}

/// Second height moment of the region of sphere centres that cover both
/// points, `∫ (z_c − z_m)² 1[|r₁ − c| < a]·1[|r₂ − c| < a] d³c`, with `z_m`
/// the height of the midpoint. Each configuration contributes
/// `Σ_i (z_i − z_m)²/n` over the spheres covering both points, so the
/// estimate is unbiased wherever the centre density is uniform; the pair is
/// therefore placed in the bulk and the result depends only on its relative
/// position.
pub fn estimate_surface_moment_i2<S: ConfigSource + ?Sized>(
    configs: &S,
    pair: (Position, Position),
    nv0: f64,
) -> Result<EstimateWithError<f64>> {
    if !(nv0 > 0.0) {
        return Err(invalid(format!("filling factor must be > 0, got {nv0}")));
    }
    let (r1, r2) = pair;
    let mid_z = 0.5 * (r1.z + r2.z);
    let samples = configs.map_configs(|c| {
        check_bulk(c, r1)?;
        check_bulk(c, r2)?;
        let g = &c.geometry;
        let a2 = g.radius_a * g.radius_a;
        let n = nv0 / sphere_volume(g.radius_a);
        let sum: f64 = c
            .centers
            .iter()
            .filter(|&&p| g.displacement(r1, p).norm_sqr() < a2 && g.displacement(r2, p).norm_sqr() < a2)
            .map(|p| (p.z - mid_z).powi(2))
            .sum();
        Ok(sum / n)
    })?;
    EstimateWithError::from_samples(&samples)
}
