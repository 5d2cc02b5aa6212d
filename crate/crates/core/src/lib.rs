//! Minimal surfaces in the 4-sphere on periodic parameter grids.
//!
//! The crate computes the local invariants of a sampled minimal immersion
//! `f: M -> S^4 ⊂ R^5` (second fundamental form, curvature ellipse, normal
//! curvature, Hopf differential, adapted frames), builds members `f_θ` of its
//! associated family by integrating the moving-frame equations, measures the
//! monodromy of `f_θ` around the deck generators of a periodic chart, and
//! evaluates the global integral identities (Gauss–Bonnet, normal Euler
//! number, zero counts of `a±`).
//!
//! Everything here is pure computation over immutable fields and only needs
//! `alloc`. File formats and the command line live in the `minsurf` crate.
//!
//! Module map:
//!
//! - [`grid`]: parameter patches, fields, finite differences, Hodge star,
//!   Laplace–Beltrami, quadrature, loops.
//! - [`surface`]: immersions, tangent and normal frames, [`surface::ShapeReport`].
//! - [`adapted`]: ellipse-aligned frames, connection forms, Hopf differential,
//!   winding orders, superminimality.
//! - [`family`]: Maurer–Cartan assembly, frame integration, congruence fits.
//! - [`monodromy`]: deck-generator holonomy, `d(θ)` scans, closing set.
//! - [`topology`]: Euler numbers, zero counts, the `a±` Laplacian identities.
//! - [`catalog`]: closed-form test surfaces and seeded perturbations.

#![no_std]
#![allow(clippy::many_single_char_names, clippy::too_many_arguments)]

extern crate alloc;
#[cfg(any(test, feature = "parallel"))]
extern crate std;

pub mod adapted;
pub mod catalog;
mod error;
pub mod family;
pub mod grid;
pub mod linalg;
pub mod monodromy;
pub mod surface;
pub mod topology;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Tolerance on `|f| = 1` for in-memory immersions.
pub const UNIT_NORM_TOL: f64 = 1e-12;
