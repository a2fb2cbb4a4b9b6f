//! Spontaneous decay of an atom above a half-space of randomly placed
//! dielectric spheres.
//!
//! Lengths are in units of `c/ω_a`. The atom sits at height `ζ_a` above the
//! medium; the spheres have size parameter `q` and fill a fraction `nv₀` of
//! the half-space.
//!
//! ```
//! use granular_decay::decay::decay_correction_f;
//! use num_complex::Complex64;
//!
//! let f = decay_correction_f(10.0, 0.5, Complex64::new(0.5, 0.0));
//! assert!(f.abs() < 0.1);
//! ```
//!
//! The modules, bottom up: [`specfun`], [`greens`], [`medium`], [`mie`],
//! [`decay`], and the Monte Carlo oracle [`mcvalidate`].

pub mod decay;
pub mod error;
pub mod greens;
pub mod mcvalidate;
pub mod medium;
pub mod mie;
pub mod quad;
pub mod specfun;
pub mod tensor;

pub use error::{Error, Result};
pub use tensor::{Dyadic, Position, Vec3};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/special-functions.md")]
    mod special_functions {}
    #[doc = include_str!("../../../book/src/green-tensor.md")]
    mod green_tensor {}
    #[doc = include_str!("../../../book/src/medium.md")]
    mod medium {}
    #[doc = include_str!("../../../book/src/mie.md")]
    mod mie {}
    #[doc = include_str!("../../../book/src/decay.md")]
    mod decay {}
    #[doc = include_str!("../../../book/src/monte-carlo.md")]
    mod monte_carlo {}
}
