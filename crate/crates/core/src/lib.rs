//! Algebraic machinery for Einstein curvature tensors viewed through the
//! curvature operator of the second kind `R̊`.
//!
//! - [`curvature`]: symmetric 2-tensors, algebraic curvature tensors, the
//!   Kulkarni–Nomizu product and the Weyl decomposition.
//! - [`second_kind`]: the matrix of `R̊` on traceless symmetric 2-tensors, its
//!   spectrum, and the `S`-action norms `|SʲW|²`.
//! - [`identity`]: pointwise identities of Einstein tensors and the cubic `f(λ)`.
//! - [`extremum`]: the threshold `θ(n)`, exact candidate enumeration for
//!   `min f`, a sampling oracle, and sharpness witnesses.
//! - [`models`]: spheres, products of spheres, complex projective space and
//!   seeded random Einstein tensors.

pub mod curvature;
pub mod eigen;
pub mod error;
pub mod extremum;
pub mod identity;
pub mod models;
pub mod rational;
pub mod rng;
pub mod second_kind;

pub use error::{Error, Result};
