#![allow(dead_code)]

use std::f64::consts::PI;

use minsurf_core::grid::{Field, GridPatch};
use minsurf_core::linalg::{polar_orthonormalize, Mat5, Vec5};
use minsurf_core::surface::Immersion;

/// Lawson's torus `(cos mx cos y, sin mx cos y, cos kx sin y, sin kx sin y, 0)`,
/// a minimal surface of a great S³ with non-constant curvature ellipse.
pub fn lawson(m: f64, k: f64, n: usize) -> Immersion {
    let patch = GridPatch::torus(n, n, 2.0 * PI, 2.0 * PI).unwrap();
    let pos = Field::from_fn(patch, |i, j| {
        let (x, y) = patch.coords(i, j);
        Vec5::new((m * x).cos() * y.cos(), (m * x).sin() * y.cos(), (k * x).cos() * y.sin(), (k * x).sin() * y.sin(), 0.0)
    });
    Immersion::new(pos, None).unwrap()
}

/// Rotation `exp(A)` for the antisymmetric part `A` of the 5×5 matrix filled
/// column-major from `entries`.
pub fn random_rotation(entries: &[f64]) -> Mat5 {
    let x = Mat5::from_iterator(entries.iter().copied());
    let a = (x - x.transpose()) * 0.5;
    // Scaling and squaring.
    let mut e = Mat5::identity() + a / 1024.0;
    for _ in 0..10 {
        e = e * e;
    }
    polar_orthonormalize(&e)
}
