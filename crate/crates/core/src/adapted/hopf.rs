use alloc::collections::VecDeque;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use super::{AdaptedFrameField, CIRCLE_EPS};
use crate::grid::diff::{derivative_unchecked, Direction};
use crate::grid::{interpolate, Field, GridPatch, ScalarField};
use crate::surface::{ShapeReport, TangentFrame};
use crate::{Complex64, Error, Result};

/// `max ¼a₊a₋ < ε · max ‖B‖²` counts as superminimal.
pub const SUPERMINIMAL_EPS: f64 = 1e-3;

/// Relative conformality tolerance for treating the grid chart as isothermal.
const CONFORMAL_TOL: f64 = 1e-6;

/// A local complex coordinate `z` on the patch, given by its Jacobian.
#[derive(Debug, Clone)]
pub enum IsothermalChart {
    /// `z = u + iv`; valid when `E = G` and `F = 0`.
    GridConformal,
    /// `(∂z/∂u, ∂z/∂v)` at every node.
    Jacobian(Field<[Complex64; 2]>),
}

impl IsothermalChart {
    /// The grid chart itself, if its metric is conformal.
    pub fn grid(tf: &TangentFrame) -> Option<Self> {
        let m = &tf.metric;
        let ok = (0..m.e.values().len()).all(|k| {
            let (e, f, g) = (m.e.values()[k], m.f.values()[k], m.g.values()[k]);
            (e - g).abs() <= CONFORMAL_TOL * e && f.abs() <= CONFORMAL_TOL * e
        });
        ok.then_some(Self::GridConformal)
    }

    /// Mercator coordinate `z = λ + i log tan(φ/2)` of a longitude/colatitude
    /// sphere chart (`u = λ`, `v = φ`). Conformal for any rotationally
    /// symmetric metric in that chart.
    pub fn mercator(patch: &GridPatch) -> Self {
        Self::Jacobian(Field::from_fn(*patch, |_, j| {
            let phi = patch.v().coord(j as isize);
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0 / phi.sin())]
        }))
    }

    /// The coordinate of the ellipse-aligned frame, `dx = r₁(κ₁² − μ₁²)^{1/4} du`,
    /// `dy = r₂(κ₁² − μ₁²)^{1/4} dv`. Requires an orthogonal grid whose `∂u`
    /// is the adapted `e₁` direction (up to sign) and no circle points.
    pub fn adapted(aff: &AdaptedFrameField) -> Result<Self> {
        let tf = &aff.tangent;
        let patch = *tf.e1.patch();
        if aff.circle_mask.values().iter().any(|&m| m) {
            return Err(Error::NoIsothermalChart);
        }
        let mut jac = Vec::with_capacity(patch.len());
        for k in 0..patch.len() {
            let (i, j) = patch.ij(k);
            let m = &tf.metric;
            let (e, f, g) = (m.e.values()[k], m.f.values()[k], m.g.values()[k]);
            let map = tf.vector_map(i, j);
            // e₁ ∥ ∂u means e₁ has no ∂v component.
            if f.abs() > CONFORMAL_TOL * e.max(g) || map[0][1].abs() > CONFORMAL_TOL * map[0][0].abs() {
                return Err(Error::NoIsothermalChart);
            }
            let d = aff.kappa1.values()[k].powi(2) - aff.mu1.values()[k].powi(2);
            let s = d.sqrt().sqrt();
            jac.push([Complex64::new(e.sqrt() * s, 0.0), Complex64::new(0.0, g.sqrt() * s)]);
        }
        Ok(Self::Jacobian(Field::new(patch, jac)?))
    }

    fn jacobian(&self, i: usize, j: usize) -> [Complex64; 2] {
        match self {
            Self::GridConformal => [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)],
            Self::Jacobian(f) => f.at(i, j),
        }
    }

    /// `(∂u/∂z, ∂v/∂z)` and `(∂u/∂z̄, ∂v/∂z̄)` at a node.
    fn inverse(&self, i: usize, j: usize) -> ([Complex64; 2], [Complex64; 2]) {
        let [zu, zv] = self.jacobian(i, j);
        // [dz, dz̄]ᵀ = A [du, dv]ᵀ with A = [[z_u, z_v], [z̄_u, z̄_v]].
        let det = zu * zv.conj() - zv * zu.conj();
        let inv = [[zv.conj() / det, -zv / det], [-zu.conj() / det, zu / det]];
        ([inv[0][0], inv[1][0]], [inv[0][1], inv[1][1]])
    }
}

/// Winding order of a complex field around one candidate zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroOrder {
    /// Parameter coordinates `(u, v)` of the candidate.
    pub location: (f64, f64),
    /// `(1/2π) ∮ d arg` on the sampling circle.
    pub winding: f64,
    /// Rounded winding when the rounding gap is at most 0.2.
    pub order: Option<i64>,
    pub gap: f64,
    /// Winding rounds to zero: the candidate is not a zero of holomorphic type.
    pub non_holomorphic: bool,
}

/// The Hopf differential `Φ = ¼(H̄₃² + H̄₄²) φ⁴`.
#[derive(Debug, Clone)]
pub struct HopfField {
    /// `¼(H̄₃² + H̄₄²)` in the report's frame; its modulus `¼a₊a₋` is gauge invariant.
    pub phi_coeff: Field<Complex64>,
    /// Coefficient of `dz⁴` in the isothermal chart.
    pub chart_coeff: Field<Complex64>,
    /// `|∂(chart_coeff)/∂z̄|`.
    pub holo_residual: ScalarField,
    pub zero_list: Vec<ZeroOrder>,
}

impl HopfField {
    pub fn abs(&self) -> ScalarField {
        self.phi_coeff.map(|c| c.norm())
    }
}

/// Evaluates `Φ` in `chart` and checks the Cauchy–Riemann equation for its
/// coefficient. Candidate zeros are the clusters of the circle locus (none
/// when the whole patch is on it).
pub fn hopf_differential(report: &ShapeReport, tf: &TangentFrame, chart: &IsothermalChart) -> Result<HopfField> {
    let patch = *report.h3.patch();
    let phi_coeff = report.h3.zip_map(&report.h4, |a, b| (a.conj() * a.conj() + b.conj() * b.conj()) * 0.25);
    let chart_coeff = Field::from_fn(patch, |i, j| {
        let (dz, _) = chart.inverse(i, j);
        let [a, b, c, d] = tf.coframe.at(i, j);
        // φ(∂u) = ω₁(∂u) + iω₂(∂u), φ(∂v) = ω₁(∂v) + iω₂(∂v).
        let phi_z = dz[0] * Complex64::new(a, c) + dz[1] * Complex64::new(b, d);
        phi_coeff.at(i, j) * phi_z.powi(4)
    });
    chart_coeff.check_finite()?;
    let cu = derivative_unchecked(&chart_coeff, Direction::U, 1);
    let cv = derivative_unchecked(&chart_coeff, Direction::V, 1);
    let holo_residual = Field::from_fn(patch, |i, j| {
        let (_, dzb) = chart.inverse(i, j);
        (dzb[0] * cu.at(i, j) + dzb[1] * cv.at(i, j)).norm()
    });
    let kmax = report.kappa.max();
    let mask = report.kappa.zip_map(&report.mu, |k, m| k - m <= CIRCLE_EPS * kmax);
    let zero_list = if mask.values().iter().all(|&m| m) {
        Vec::new()
    } else {
        let cands = find_zero_candidates(&mask);
        zero_orders(&chart_coeff, &cands, 4.0 * patch.h_max())?
    };
    Ok(HopfField { phi_coeff, chart_coeff, holo_residual, zero_list })
}

/// Centroids (fractional node coordinates) of the 4-connected clusters of
/// `mask`, in index order of their first node.
pub fn find_zero_candidates(mask: &Field<bool>) -> Vec<(f64, f64)> {
    let p = *mask.patch();
    let mut seen = alloc::vec![false; p.len()];
    let mut out = Vec::new();
    for start in 0..p.len() {
        if seen[start] || !mask.values()[start] {
            continue;
        }
        seen[start] = true;
        let (i0, j0) = p.ij(start);
        // Track unwrapped offsets so clusters straddling a seam average correctly.
        let mut queue = VecDeque::from([(i0 as isize, j0 as isize)]);
        let (mut su, mut sv, mut count) = (0.0, 0.0, 0usize);
        while let Some((i, j)) = queue.pop_front() {
            su += i as f64;
            sv += j as f64;
            count += 1;
            for (di, dj) in [(1isize, 0isize), (-1, 0), (0, 1), (0, -1)] {
                let (ni, nj) = (i + di, j + dj);
                let Some((a, b)) = p.wrap(ni, nj) else { continue };
                let k = p.idx(a, b);
                if mask.values()[k] && !seen[k] {
                    seen[k] = true;
                    queue.push_back((ni, nj));
                }
            }
        }
        let (cu, cv) = (su / count as f64, sv / count as f64);
        let wrapc = |x: f64, n: usize, periodic: bool| if periodic { x - n as f64 * (x / n as f64).floor() } else { x };
        out.push((wrapc(cu, p.nu(), p.periodic_u()), wrapc(cv, p.nv(), p.periodic_v())));
    }
    out
}

/// Winding numbers of `field` on circles of parameter radius `radius`
/// around each candidate (given in fractional node coordinates).
pub fn zero_orders(field: &Field<Complex64>, candidates: &[(f64, f64)], radius: f64) -> Result<Vec<ZeroOrder>> {
    const SAMPLES: usize = 128;
    let p = field.patch();
    let (ru, rv) = (radius / p.hu(), radius / p.hv());
    let mut out = Vec::with_capacity(candidates.len());
    for &(ci, cj) in candidates {
        let sample = |s: usize| {
            let t = 2.0 * PI * s as f64 / SAMPLES as f64;
            interpolate(field, ci + ru * t.cos(), cj + rv * t.sin())
                .ok_or_else(|| Error::InvalidArgument("winding circle leaves the patch".into()))
        };
        let first = sample(0)?;
        let mut prev = first;
        let mut total = 0.0;
        for s in 1..=SAMPLES {
            let cur = if s == SAMPLES { first } else { sample(s)? };
            if cur.norm() == 0.0 || prev.norm() == 0.0 {
                return Err(Error::InvalidArgument("field vanishes on the winding circle".into()));
            }
            total += (cur / prev).arg();
            prev = cur;
        }
        let winding = total / (2.0 * PI);
        let rounded = winding.round();
        let gap = (winding - rounded).abs();
        let order = (gap <= 0.2).then_some(rounded as i64);
        out.push(ZeroOrder {
            location: (p.u().min + ci * p.hu(), p.v().coord(0) + cj * p.hv()),
            winding,
            order,
            gap,
            non_holomorphic: order == Some(0),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SuperminimalityVerdict {
    Superminimal,
    IsolatedCirclePoints { clusters: usize },
    Generic,
}

impl SuperminimalityVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Superminimal => "superminimal",
            Self::IsolatedCirclePoints { .. } => "isolated-circle-points",
            Self::Generic => "generic",
        }
    }

    pub fn is_superminimal(&self) -> bool {
        matches!(self, Self::Superminimal)
    }
}

/// Superminimal when `max ¼a₊a₋ ≤ 1e-3 · max ‖B‖²`; otherwise the circle
/// locus is either empty or a finite set of clusters.
pub fn superminimality_test(report: &ShapeReport) -> SuperminimalityVerdict {
    let quarter = report.a_plus.zip_map(&report.a_minus, |a, b| 0.25 * a * b);
    if quarter.max() <= SUPERMINIMAL_EPS * report.norm_b2.max() {
        return SuperminimalityVerdict::Superminimal;
    }
    let kmax = report.kappa.max();
    let mask = report.kappa.zip_map(&report.mu, |k, m| k - m <= CIRCLE_EPS * kmax);
    let clusters = find_zero_candidates(&mask).len();
    if clusters > 0 {
        SuperminimalityVerdict::IsolatedCirclePoints { clusters }
    } else {
        SuperminimalityVerdict::Generic
    }
}
