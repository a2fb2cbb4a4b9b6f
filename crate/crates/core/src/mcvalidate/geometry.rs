//! Slab geometry, random sequential addition of hard spheres, configuration
//! snapshots, and seeded ensembles.

use crate::error::{invalid, Error, Result};
use crate::medium::sphere_volume;
use crate::tensor::{Position, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::io::{BufRead, Write};

/// Largest filling factor accepted by the sampler.
pub const MAX_PACKING: f64 = 0.2;
/// Insertion attempts allowed per sphere before giving up.
pub const MAX_ATTEMPTS_PER_SPHERE: u64 = 100_000;

/// How sphere centres are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Sampling {
    /// Random sequential addition of `round(n·L·W²)` spheres directly in the slab.
    #[default]
    Direct,
    /// Random sequential addition in a fully periodic box of height `L + buffer`,
    /// keeping only centres with `z ∈ [−L, 0]`. The kept centres are a planar cut
    /// through a homogeneous packing, so their one-body density is exactly
    /// uniform up to the surface. Requires periodic lateral boundaries.
    BulkCut { buffer: f64 },
}

/// Sphere centres live in `z ∈ [−L, 0]`, `x, y ∈ [−W/2, W/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabGeometry {
    pub depth_l: f64,
    pub width_w: f64,
    pub radius_a: f64,
    pub periodic_lateral: bool,
    pub sampling: Sampling,
}

impl SlabGeometry {
    pub fn new(depth_l: f64, width_w: f64, radius_a: f64, periodic_lateral: bool) -> Result<Self> {
        if !(radius_a > 0.0 && radius_a.is_finite()) {
            return Err(invalid(format!("sphere radius must be finite and > 0, got {radius_a}")));
        }
        if !(depth_l >= 10.0 * radius_a && depth_l.is_finite()) {
            return Err(invalid(format!("slab depth {depth_l} must be at least 10 radii")));
        }
        if !(width_w >= 10.0 * radius_a && width_w.is_finite()) {
            return Err(invalid(format!("slab width {width_w} must be at least 10 radii")));
        }
        Ok(Self {
            depth_l,
            width_w,
            radius_a,
            periodic_lateral,
            sampling: Sampling::Direct,
        })
    }

    pub fn with_sampling(mut self, sampling: Sampling) -> Result<Self> {
        if let Sampling::BulkCut { buffer } = sampling {
            if !self.periodic_lateral {
                return Err(invalid("bulk-cut sampling needs periodic lateral boundaries"));
            }
            if !(buffer >= 2.0 * self.radius_a && buffer.is_finite()) {
                return Err(invalid(format!("bulk-cut buffer {buffer} must be at least one diameter")));
            }
        }
        self.sampling = sampling;
        Ok(self)
    }

    pub fn volume(&self) -> f64 {
        self.depth_l * self.width_w * self.width_w
    }

    pub fn contains(&self, p: Position) -> bool {
        let h = 0.5 * self.width_w;
        p.z >= -self.depth_l && p.z <= 0.0 && p.x.abs() <= h && p.y.abs() <= h
    }

    /// Displacement `p − c`, using the nearest lateral image when periodic.
    #[inline]
    pub fn displacement(&self, p: Position, c: Position) -> Vec3 {
        let mut d = p - c;
        if self.periodic_lateral {
            let w = self.width_w;
            d.x -= w * (d.x / w).round();
            d.y -= w * (d.y / w).round();
        }
        d
    }
}

/// One sampled set of non-overlapping sphere centres.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereConfiguration {
    pub centers: Vec<Position>,
    pub geometry: SlabGeometry,
    pub seed: u64,
}

impl SphereConfiguration {
    /// Smallest centre distance, with lateral images when periodic; `None`
    /// for fewer than two spheres. Quadratic in the sphere count.
    pub fn min_pair_distance(&self) -> Option<f64> {
        let mut best: Option<f64> = None;
        for (i, &a) in self.centers.iter().enumerate() {
            for &b in &self.centers[i + 1..] {
                let d = self.geometry.displacement(a, b).norm();
                best = Some(best.map_or(d, |m| m.min(d)));
            }
        }
        best
    }

    /// Number of spheres whose interior contains `p`.
    pub fn filling_at(&self, p: Position) -> usize {
        let a2 = self.geometry.radius_a * self.geometry.radius_a;
        self.centers
            .iter()
            .filter(|&&c| self.geometry.displacement(p, c).norm_sqr() < a2)
            .count()
    }
}

/// Uniform grid of cells no smaller than one sphere diameter.
struct CellGrid {
    lo: [f64; 3],
    extent: [f64; 3],
    n: [usize; 3],
    periodic: [bool; 3],
    cells: Vec<Vec<usize>>,
}

impl CellGrid {
    fn new(lo: [f64; 3], extent: [f64; 3], diameter: f64, periodic: [bool; 3]) -> Self {
        let n = [0, 1, 2].map(|i| ((extent[i] / diameter).floor() as usize).max(1));
        Self {
            lo,
            extent,
            n,
            periodic,
            cells: vec![Vec::new(); n[0] * n[1] * n[2]],
        }
    }

    fn cell_of(&self, p: [f64; 3]) -> [usize; 3] {
        [0, 1, 2].map(|i| {
            let f = (p[i] - self.lo[i]) / self.extent[i];
            ((f * self.n[i] as f64) as usize).min(self.n[i] - 1)
        })
    }

    fn index(&self, c: [usize; 3]) -> usize {
        (c[2] * self.n[1] + c[1]) * self.n[0] + c[0]
    }

    fn displacement(&self, p: [f64; 3], q: [f64; 3]) -> [f64; 3] {
        [0, 1, 2].map(|i| {
            let mut d = p[i] - q[i];
            if self.periodic[i] {
                d -= self.extent[i] * (d / self.extent[i]).round();
            }
            d
        })
    }

    fn overlaps(&self, p: [f64; 3], points: &[[f64; 3]], min_sq: f64) -> bool {
        let c = self.cell_of(p);
        let mut ranges: [Vec<usize>; 3] = Default::default();
        for i in 0..3 {
            let n = self.n[i] as isize;
            for off in -1isize..=1 {
                let k = c[i] as isize + off;
                let k = if self.periodic[i] {
                    k.rem_euclid(n)
                } else if k < 0 || k >= n {
                    continue;
                } else {
                    k
                };
                if !ranges[i].contains(&(k as usize)) {
                    ranges[i].push(k as usize);
                }
            }
        }
        for &kz in &ranges[2] {
            for &ky in &ranges[1] {
                for &kx in &ranges[0] {
                    for &j in &self.cells[self.index([kx, ky, kz])] {
                        let d = self.displacement(p, points[j]);
                        if d[0] * d[0] + d[1] * d[1] + d[2] * d[2] < min_sq {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    fn insert(&mut self, p: [f64; 3], id: usize) {
        let k = self.index(self.cell_of(p));
        self.cells[k].push(id);
    }
}

fn rsa(
    lo: [f64; 3],
    extent: [f64; 3],
    periodic: [bool; 3],
    count: usize,
    radius: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<[f64; 3]>> {
    let diameter = 2.0 * radius;
    let mut grid = CellGrid::new(lo, extent, diameter, periodic);
    let mut points: Vec<[f64; 3]> = Vec::with_capacity(count);
    let mut attempts: u64 = 0;
    while points.len() < count {
        let mut tries = 0;
        loop {
            attempts += 1;
            tries += 1;
            let p = [0, 1, 2].map(|i| lo[i] + extent[i] * rng.random::<f64>());
            if !grid.overlaps(p, &points, diameter * diameter) {
                grid.insert(p, points.len());
                points.push(p);
                break;
            }
            if tries >= MAX_ATTEMPTS_PER_SPHERE {
                return Err(Error::PackingFailure {
                    placed: points.len(),
                    target: count,
                    attempts,
                });
            }
        }
    }
    Ok(points)
}

/// Random sequential addition of non-overlapping spheres with filling factor
/// `target_nv0`, deterministic in `seed`.
pub fn sample_configuration(geometry: SlabGeometry, target_nv0: f64, seed: u64) -> Result<SphereConfiguration> {
    if !(0.0..=MAX_PACKING).contains(&target_nv0) {
        if target_nv0 > MAX_PACKING {
            return Err(Error::TooDense(target_nv0));
        }
        return Err(invalid(format!("filling factor must be >= 0, got {target_nv0}")));
    }
    let a = geometry.radius_a;
    let n = target_nv0 / sphere_volume(a);
    let w = geometry.width_w;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lateral = geometry.periodic_lateral;
    let centers = match geometry.sampling {
        Sampling::Direct => {
            let count = (n * geometry.volume()).round() as usize;
            let lo = [-0.5 * w, -0.5 * w, -geometry.depth_l];
            let ext = [w, w, geometry.depth_l];
            rsa(lo, ext, [lateral, lateral, false], count, a, &mut rng)?
                .into_iter()
                .map(Position::from_array)
                .collect()
        }
        Sampling::BulkCut { buffer } => {
            let height = geometry.depth_l + buffer;
            let count = (n * height * w * w).round() as usize;
            let lo = [-0.5 * w, -0.5 * w, -height];
            let ext = [w, w, height];
            rsa(lo, ext, [true, true, true], count, a, &mut rng)?
                .into_iter()
                .filter(|p| p[2] >= -geometry.depth_l)
                .map(Position::from_array)
                .collect()
        }
    };
    Ok(SphereConfiguration {
        centers,
        geometry,
        seed,
    })
}

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of configuration `index` in an ensemble with `master` seed.
pub fn config_seed(master: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master) ^ index)
}

/// A reproducible family of configurations, generated on demand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ensemble {
    pub geometry: SlabGeometry,
    pub nv0: f64,
    pub master_seed: u64,
    pub count: usize,
}

impl Ensemble {
    pub fn new(geometry: SlabGeometry, nv0: f64, master_seed: u64, count: usize) -> Result<Self> {
        if nv0 > MAX_PACKING {
            return Err(Error::TooDense(nv0));
        }
        if count < 2 {
            return Err(Error::InsufficientSamples(count));
        }
        Ok(Self {
            geometry,
            nv0,
            master_seed,
            count,
        })
    }

    pub fn configuration(&self, index: usize) -> Result<SphereConfiguration> {
        sample_configuration(self.geometry, self.nv0, config_seed(self.master_seed, index as u64))
    }
}

/// Anything that can hand out configurations to a per-configuration observable.
///
/// Results come back in configuration order regardless of how the work is
/// scheduled, so reductions over them are deterministic.
pub trait ConfigSource: Sync {
    fn config_count(&self) -> usize;
    fn map_configs<T, F>(&self, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(&SphereConfiguration) -> Result<T> + Sync + Send;
}

impl ConfigSource for Ensemble {
    fn config_count(&self) -> usize {
        self.count
    }

    fn map_configs<T, F>(&self, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(&SphereConfiguration) -> Result<T> + Sync + Send,
    {
        (0..self.count)
            .into_par_iter()
            .map(|i| f(&self.configuration(i)?))
            .collect()
    }
}

impl ConfigSource for [SphereConfiguration] {
    fn config_count(&self) -> usize {
        self.len()
    }

    fn map_configs<T, F>(&self, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(&SphereConfiguration) -> Result<T> + Sync + Send,
    {
        self.par_iter().map(f).collect()
    }
}

/// Writes `# key=value` header lines followed by one `x y z` line per centre.
pub fn write_snapshot<W: Write>(config: &SphereConfiguration, mut out: W) -> Result<()> {
    let g = &config.geometry;
    writeln!(out, "# seed={}", config.seed)?;
    writeln!(
        out,
        "# depth={} width={} radius={} periodic={}",
        g.depth_l, g.width_w, g.radius_a, g.periodic_lateral
    )?;
    if let Sampling::BulkCut { buffer } = g.sampling {
        writeln!(out, "# bulk_cut_buffer={buffer}")?;
    }
    for c in &config.centers {
        writeln!(out, "{} {} {}", c.x, c.y, c.z)?;
    }
    Ok(())
}

/// Inverse of [`write_snapshot`].
pub fn read_snapshot<R: BufRead>(input: R) -> Result<SphereConfiguration> {
    let mut seed = None;
    let (mut depth, mut width, mut radius, mut periodic, mut buffer) = (None, None, None, None, None);
    let mut centers = Vec::new();
    for (k, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = k + 1;
        let bad = |message: String| Error::Snapshot { line: lineno, message };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(header) = trimmed.strip_prefix('#') {
            for item in header.split_whitespace() {
                let Some((key, value)) = item.split_once('=') else {
                    continue;
                };
                let num = || value.parse::<f64>().map_err(|e| bad(format!("{key}: {e}")));
                match key {
                    "seed" => seed = Some(value.parse::<u64>().map_err(|e| bad(format!("seed: {e}")))?),
                    "depth" => depth = Some(num()?),
                    "width" => width = Some(num()?),
                    "radius" => radius = Some(num()?),
                    "periodic" => {
                        periodic = Some(value.parse::<bool>().map_err(|e| bad(format!("periodic: {e}")))?)
                    }
                    "bulk_cut_buffer" => buffer = Some(num()?),
                    _ => {}
                }
            }
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(bad(format!("expected 3 coordinates, found {}", fields.len())));
        }
        let mut xyz = [0.0; 3];
        for (slot, f) in xyz.iter_mut().zip(&fields) {
            *slot = f.parse::<f64>().map_err(|e| bad(format!("{f:?}: {e}")))?;
        }
        centers.push(Position::from_array(xyz));
    }
    let missing = |what: &str| Error::Snapshot {
        line: 0,
        message: format!("missing header field {what}"),
    };
    let mut geometry = SlabGeometry::new(
        depth.ok_or_else(|| missing("depth"))?,
        width.ok_or_else(|| missing("width"))?,
        radius.ok_or_else(|| missing("radius"))?,
        periodic.ok_or_else(|| missing("periodic"))?,
    )?;
    if let Some(buffer) = buffer {
        geometry = geometry.with_sampling(Sampling::BulkCut { buffer })?;
    }
    Ok(SphereConfiguration {
        centers,
        geometry,
        seed: seed.ok_or_else(|| missing("seed"))?,
    })
}
