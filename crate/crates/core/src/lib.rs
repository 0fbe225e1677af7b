//! Exact constructions of self-affine iterated function systems on moment
//! curves and algebraic surfaces.
//!
//! Everything that encodes an identity is computed over exact rationals
//! ([`Rational`]); floating point only appears in spectral norms, attractor
//! sampling and distance diagnostics. The crate is `no_std` and needs only
//! `alloc`. File formats, reports and the command-line front end live in the
//! companion `selfaffine` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod affine;
pub mod attractor;
pub mod classify;
pub mod compactness;
mod error;
pub mod linalg;
pub mod moment;
pub mod paraboloid;
pub mod poly;
pub mod rational;
pub mod scaling;
pub mod series;

pub use affine::{AffineMap, ContractionCertificate, ContractionRoute, IteratedFunctionSystem};
pub use attractor::PointCloud;
pub use error::{Error, Result};
pub use linalg::Matrix;
pub use poly::MultiPoly;
pub use rational::Rational;
pub use series::{Series, SeriesVec};

