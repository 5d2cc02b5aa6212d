//! Closed-form minimal surfaces with exact jets, and seeded perturbations.
//!
//! | name | chart | K | K_N | κ, μ |
//! |------|-------|---|-----|------|
//! | `clifford` | `[0, √2π)²`, both periodic | 0 | 0 | 1, 0 |
//! | `veronese` | `λ ∈ [0, 2π)` periodic × `φ ∈ (0, π)` capped | 1/3 | 2/3 | 1/√3, 1/√3 |
//! | `geodesic` | same chart as `veronese` | 1 | 0 | 0, 0 |

use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::{Axis, Field, GridPatch};
use crate::linalg::Vec5;
use crate::surface::{analyze, Immersion, JetSource, Jets};
use crate::{Error, Result};

/// Names accepted by [`CatalogSurface::from_name`].
pub const NAMES: [&str; 3] = ["clifford", "veronese", "geodesic"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogSurface {
    Clifford,
    Veronese,
    GeodesicSphere,
}

/// Reference values of the pointwise invariants and a few integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundTruth {
    pub k: f64,
    pub kn: f64,
    pub norm_b2: f64,
    pub kappa: f64,
    pub mu: f64,
    pub area: f64,
    pub chi_m: i64,
    pub superminimal: bool,
}

impl CatalogSurface {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "clifford" => Some(Self::Clifford),
            "veronese" => Some(Self::Veronese),
            "geodesic" | "geodesic-sphere" => Some(Self::GeodesicSphere),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Clifford => "clifford",
            Self::Veronese => "veronese",
            Self::GeodesicSphere => "geodesic",
        }
    }

    /// Samples the surface with `n` nodes per axis.
    pub fn build(self, n: usize) -> Result<Immersion> {
        match self {
            Self::Clifford => clifford_torus(n, n),
            Self::Veronese => veronese_sphere(n, n),
            Self::GeodesicSphere => geodesic_sphere(n, n),
        }
    }

    pub fn ground_truth(self) -> GroundTruth {
        match self {
            Self::Clifford => GroundTruth {
                k: 0.0,
                kn: 0.0,
                norm_b2: 2.0,
                kappa: 1.0,
                mu: 0.0,
                area: 2.0 * PI * PI,
                chi_m: 0,
                superminimal: false,
            },
            Self::Veronese => GroundTruth {
                k: 1.0 / 3.0,
                kn: 2.0 / 3.0,
                norm_b2: 4.0 / 3.0,
                kappa: 1.0 / 3.0f64.sqrt(),
                mu: 1.0 / 3.0f64.sqrt(),
                area: 12.0 * PI,
                chi_m: 2,
                superminimal: true,
            },
            Self::GeodesicSphere => GroundTruth {
                k: 1.0,
                kn: 0.0,
                norm_b2: 0.0,
                kappa: 0.0,
                mu: 0.0,
                area: 4.0 * PI,
                chi_m: 2,
                superminimal: true,
            },
        }
    }
}

fn sampled(patch: GridPatch, eval: impl Fn(f64, f64) -> [Vec5; 6]) -> Result<Immersion> {
    let n = patch.len();
    let mut cols: [Vec<Vec5>; 6] = Default::default();
    for c in cols.iter_mut() {
        c.reserve(n);
    }
    for i in 0..patch.nu() {
        for j in 0..patch.nv() {
            let (u, v) = patch.coords(i, j);
            for (c, x) in cols.iter_mut().zip(eval(u, v)) {
                c.push(x);
            }
        }
    }
    let [p, fu, fv, fuu, fuv, fvv] = cols;
    let f = |v| Field::new(patch, v);
    let jets = Jets { fu: f(fu)?, fv: f(fv)?, fuu: f(fuu)?, fuv: f(fuv)?, fvv: f(fvv)?, source: JetSource::Analytic };
    Immersion::new(f(p)?, Some(jets))
}

/// `f(u, v) = (cos √2u, sin √2u, cos √2v, sin √2v, 0)/√2` on the square
/// lattice of side `√2π`. Coordinates are orthonormal; the surface lies in
/// the hyperplane `x₅ = 0`.
pub fn clifford_torus(nu: usize, nv: usize) -> Result<Immersion> {
    let l = SQRT_2 * PI;
    let patch = GridPatch::torus(nu, nv, l, l)?;
    let r = 1.0 / SQRT_2;
    sampled(patch, |u, v| {
        let (su, cu) = (SQRT_2 * u).sin_cos();
        let (sv, cv) = (SQRT_2 * v).sin_cos();
        let z = Vec5::zeros();
        [
            Vec5::new(cu, su, cv, sv, 0.0) * r,
            Vec5::new(-su, cu, 0.0, 0.0, 0.0),
            Vec5::new(0.0, 0.0, -sv, cv, 0.0),
            Vec5::new(-cu, -su, 0.0, 0.0, 0.0) * SQRT_2,
            z,
            Vec5::new(0.0, 0.0, -cv, -sv, 0.0) * SQRT_2,
        ]
    })
}

/// Longitude `λ ∈ [0, 2π)` (periodic, `u`) and colatitude `φ ∈ (0, π)`
/// (pole-capped, `v`) chart of the unit sphere, with first and second
/// derivatives of `(x, y, z) = (sin φ cos λ, sin φ sin λ, cos φ)`.
fn sphere_chart(n_lat: usize, n_lon: usize) -> Result<GridPatch> {
    GridPatch::new(Axis::periodic(n_lon, 0.0, 2.0 * PI), Axis::capped(n_lat, 0.0, PI))
}

fn sphere_jets(l: f64, p: f64) -> [[f64; 3]; 6] {
    let (sl, cl) = l.sin_cos();
    let (sp, cp) = p.sin_cos();
    [
        [sp * cl, sp * sl, cp],
        [-sp * sl, sp * cl, 0.0],
        [cp * cl, cp * sl, -sp],
        [-sp * cl, -sp * sl, 0.0],
        [-cp * sl, cp * cl, 0.0],
        [-sp * cl, -sp * sl, -cp],
    ]
}

/// The totally geodesic great sphere `(x, y, z, 0, 0)`.
pub fn geodesic_sphere(n_lat: usize, n_lon: usize) -> Result<Immersion> {
    sampled(sphere_chart(n_lat, n_lon)?, |l, p| sphere_jets(l, p).map(|[x, y, z]| Vec5::new(x, y, z, 0.0, 0.0)))
}

/// The Veronese surface: the degree-2 harmonic map of the unit sphere
/// `(√3yz, √3xz, √3xy, (√3/2)(x² − y²), −(x² + y² − 2z²)/2)`, an isometric
/// immersion of the sphere of radius `√3`. The sign of the last component
/// makes `K_N = +2/3` in the positively oriented chart.
pub fn veronese_sphere(n_lat: usize, n_lon: usize) -> Result<Immersion> {
    let s3 = 3.0f64.sqrt();
    // V_k(p) = pᵀ Q_k p.
    let q: [[[f64; 3]; 3]; 5] = [
        [[0.0, 0.0, 0.0], [0.0, 0.0, s3 / 2.0], [0.0, s3 / 2.0, 0.0]],
        [[0.0, 0.0, s3 / 2.0], [0.0, 0.0, 0.0], [s3 / 2.0, 0.0, 0.0]],
        [[0.0, s3 / 2.0, 0.0], [s3 / 2.0, 0.0, 0.0], [0.0, 0.0, 0.0]],
        [[s3 / 2.0, 0.0, 0.0], [0.0, -s3 / 2.0, 0.0], [0.0, 0.0, 0.0]],
        [[-0.5, 0.0, 0.0], [0.0, -0.5, 0.0], [0.0, 0.0, 1.0]],
    ];
    let bil = |a: &[f64; 3], b: &[f64; 3]| -> Vec5 {
        Vec5::from_fn(|k, _| {
            let mut s = 0.0;
            for r in 0..3 {
                for c in 0..3 {
                    s += a[r] * q[k][r][c] * b[c];
                }
            }
            s
        })
    };
    sampled(sphere_chart(n_lat, n_lon)?, |l, p| {
        let [x, xl, xp, xll, xlp, xpp] = sphere_jets(l, p);
        [
            bil(&x, &x),
            bil(&x, &xl) * 2.0,
            bil(&x, &xp) * 2.0,
            (bil(&xl, &xl) + bil(&x, &xll)) * 2.0,
            (bil(&xl, &xp) + bil(&x, &xlp)) * 2.0,
            (bil(&xp, &xp) + bil(&x, &xpp)) * 2.0,
        ]
    })
}

/// `f + ε g e₃`, renormalized onto the sphere, where `g` is a sum of three
/// trigonometric modes with seeded random wave numbers, phases and weights
/// (periodic in every periodic axis) and `e₃` is the first normal field.
/// The result carries no analytic jets.
pub fn perturbed(imm: &Immersion, amplitude: f64, seed: u64) -> Result<Immersion> {
    if !amplitude.is_finite() {
        return Err(Error::InvalidArgument("perturbation amplitude must be finite".into()));
    }
    let patch = *imm.patch();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes: Vec<(f64, f64, f64, f64)> = (0..3)
        .map(|_| {
            let m = rng.gen_range(1..=3) as f64;
            let n = rng.gen_range(1..=3) as f64;
            let phase = rng.gen_range(0.0..2.0 * PI);
            let weight = rng.gen_range(0.5..1.0);
            (m, n, phase, weight)
        })
        .collect();
    let total: f64 = modes.iter().map(|m| m.3).sum();
    let analysis = analyze(imm)?;
    let scale = |axis: &Axis| if axis.is_periodic() { 2.0 * PI / axis.period() } else { PI / axis.period() };
    let (ku, kv) = (scale(patch.u()), scale(patch.v()));
    let position = Field::from_fn(patch, |i, j| {
        let (u, v) = patch.coords(i, j);
        let (x, y) = ((u - patch.u().min) * ku, (v - patch.v().min) * kv);
        let g: f64 = modes.iter().map(|&(m, n, ph, w)| w * (m * x + n * y + ph).cos()).sum::<f64>() / total;
        let p = imm.position().at(i, j) + analysis.normal.e3.at(i, j) * (amplitude * g);
        p / p.norm()
    });
    Immersion::new(position, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{partial_derivatives, Order};

    fn jets_match_fd(imm: &Immersion) -> f64 {
        let exact = imm.analytic_jets().unwrap();
        let d = partial_derivatives(imm.position(), Order::Second).unwrap();
        let s = d.second.unwrap();
        let patch = imm.patch();
        let mut err: f64 = 0.0;
        for (a, b) in [(&exact.fu, &d.du), (&exact.fv, &d.dv), (&exact.fuu, &s.duu), (&exact.fuv, &s.duv), (&exact.fvv, &s.dvv)] {
            for i in 0..patch.nu() {
                // Skip the low-order end rows of capped axes.
                for j in 4..patch.nv() - 4 {
                    err = err.max((a.at(i, j) - b.at(i, j)).norm());
                }
            }
        }
        err
    }

    #[test]
    fn analytic_jets_agree_with_differences() {
        assert!(jets_match_fd(&clifford_torus(128, 128).unwrap()) < 1e-6);
        assert!(jets_match_fd(&veronese_sphere(256, 256).unwrap()) < 1e-6);
        assert!(jets_match_fd(&geodesic_sphere(256, 256).unwrap()) < 1e-6);
    }

    #[test]
    fn clifford_lies_in_hyperplane() {
        let c = clifford_torus(32, 32).unwrap();
        assert!(c.position().values().iter().all(|p| p[4] == 0.0));
    }

    #[test]
    fn perturbation_is_seeded() {
        let c = clifford_torus(32, 32).unwrap();
        let a = perturbed(&c, 1e-3, 7).unwrap();
        let b = perturbed(&c, 1e-3, 7).unwrap();
        let d = perturbed(&c, 1e-3, 8).unwrap();
        assert_eq!(a.position(), b.position());
        assert_ne!(a.position(), d.position());
        assert!(a.analytic_jets().is_none());
    }
}
