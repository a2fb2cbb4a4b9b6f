//! Real 3-vectors and complex 3×3 dyadics.

use num_complex::Complex64;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

/// A point or direction in space, lengths in units of c/ω (so k = 1).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Positions and unit vectors share one representation.
pub type Position = Vec3;

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const EX: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const EY: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const EZ: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm_sqr(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Unit vector along `self`; `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self * (1.0 / n))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Unit vector from polar angle `theta` and azimuth `phi`.
    pub fn from_spherical(theta: f64, phi: f64) -> Vec3 {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Vec3::new(st * cp, st * sp, ct)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

/// Complex 3×3 tensor. Carries Green functions and scattering kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dyadic(pub [[Complex64; 3]; 3]);

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic([[Complex64::new(0.0, 0.0); 3]; 3])
    }

    pub fn identity() -> Self {
        Dyadic::scalar(Complex64::new(1.0, 0.0))
    }

    /// `s·I`.
    pub fn scalar(s: Complex64) -> Self {
        let mut d = Dyadic::zero();
        for i in 0..3 {
            d.0[i][i] = s;
        }
        d
    }

    /// The dyad `u v` with entries `u_i v_j`.
    pub fn outer(u: Vec3, v: Vec3) -> Self {
        let mut d = Dyadic::zero();
        for i in 0..3 {
            for j in 0..3 {
                d.0[i][j] = Complex64::new(u[i] * v[j], 0.0);
            }
        }
        d
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[i][j]
    }

    pub fn transpose(&self) -> Self {
        let mut d = Dyadic::zero();
        for i in 0..3 {
            for j in 0..3 {
                d.0[i][j] = self.0[j][i];
            }
        }
        d
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut d = *self;
        d.0.iter_mut().flatten().for_each(|e| *e *= s);
        d
    }

    /// Matrix product `self · other`.
    pub fn dot(&self, other: &Dyadic) -> Self {
        let mut d = Dyadic::zero();
        for i in 0..3 {
            for j in 0..3 {
                d.0[i][j] = (0..3).map(|k| self.0[i][k] * other.0[k][j]).sum();
            }
        }
        d
    }

    /// Right contraction `self · v` with a real vector.
    pub fn apply(&self, v: Vec3) -> [Complex64; 3] {
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..3).map(|k| self.0[i][k] * v[k]).sum();
        }
        out
    }

    /// Right contraction with a complex vector.
    pub fn apply_complex(&self, v: [Complex64; 3]) -> [Complex64; 3] {
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..3).map(|k| self.0[i][k] * v[k]).sum();
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|e| e.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Dyadic) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|e| e.re.is_finite() && e.im.is_finite())
    }

    /// Real rotation applied as `R · self · Rᵀ`.
    pub fn rotate(&self, rot: &[[f64; 3]; 3]) -> Self {
        let mut d = Dyadic::zero();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..3 {
                    for l in 0..3 {
                        acc += self.0[k][l] * (rot[i][k] * rot[j][l]);
                    }
                }
                d.0[i][j] = acc;
            }
        }
        d
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(mut self, o: Dyadic) -> Dyadic {
        self += o;
        self
    }
}

impl AddAssign for Dyadic {
    fn add_assign(&mut self, o: Dyadic) {
        for i in 0..3 {
            for j in 0..3 {
                self.0[i][j] += o.0[i][j];
            }
        }
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(mut self, o: Dyadic) -> Dyadic {
        for i in 0..3 {
            for j in 0..3 {
                self.0[i][j] -= o.0[i][j];
            }
        }
        self
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul<f64> for Dyadic {
    type Output = Dyadic;
    fn mul(self, s: f64) -> Dyadic {
        self.scale(Complex64::new(s, 0.0))
    }
}

impl Mul<Complex64> for Dyadic {
    type Output = Dyadic;
    fn mul(self, s: Complex64) -> Dyadic {
        self.scale(s)
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, o: Dyadic) -> Dyadic {
        self.dot(&o)
    }
}
