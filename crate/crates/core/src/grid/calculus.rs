//! Metric-dependent calculus on a patch: Hodge star on 1-forms,
//! Laplace–Beltrami, quadrature.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::diff::{derivative_unchecked, Direction};
use super::{AxisKind, Axis, Field, ScalarField};
use crate::linalg::pairwise_sum;
use crate::{Error, Result};

/// First fundamental form in parameter coordinates, with the area element
/// and inverse metric precomputed.
#[derive(Debug, Clone)]
pub struct MetricField {
    pub e: ScalarField,
    pub f: ScalarField,
    pub g: ScalarField,
    /// `√(EG − F²)`.
    pub area: ScalarField,
    pub inv_uu: ScalarField,
    pub inv_uv: ScalarField,
    pub inv_vv: ScalarField,
}

impl MetricField {
    pub fn new(e: ScalarField, f: ScalarField, g: ScalarField) -> Result<Self> {
        let patch = *e.patch();
        e.check_finite()?;
        f.check_finite()?;
        g.check_finite()?;
        let n = patch.len();
        let (mut area, mut iuu, mut iuv, mut ivv) =
            (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
        for k in 0..n {
            let (ee, ff, gg) = (e.values()[k], f.values()[k], g.values()[k]);
            let det = ee * gg - ff * ff;
            if !(ee > 0.0 && gg > 0.0 && det > 1e-14 * ee * gg) {
                return Err(Error::DegenerateMetric { index: patch.ij(k), det });
            }
            area.push(det.sqrt());
            iuu.push(gg / det);
            iuv.push(-ff / det);
            ivv.push(ee / det);
        }
        Ok(Self {
            area: Field::new(patch, area)?,
            inv_uu: Field::new(patch, iuu)?,
            inv_uv: Field::new(patch, iuv)?,
            inv_vv: Field::new(patch, ivv)?,
            e,
            f,
            g,
        })
    }

    /// Euclidean metric `du² + dv²`.
    pub fn flat(patch: super::GridPatch) -> Self {
        Self::new(Field::constant(patch, 1.0), Field::constant(patch, 0.0), Field::constant(patch, 1.0))
            .expect("flat metric is valid")
    }

    pub fn patch(&self) -> &super::GridPatch {
        self.e.patch()
    }
}

/// Hodge star of a 1-form given by its components in an oriented
/// orthonormal coframe: `*ω₁ = ω₂`, `*ω₂ = −ω₁`.
#[inline]
pub fn hodge_star_oneform(alpha_1: f64, alpha_2: f64) -> (f64, f64) {
    (-alpha_2, alpha_1)
}

/// Field version of [`hodge_star_oneform`].
pub fn hodge_star_fields(alpha_1: &ScalarField, alpha_2: &ScalarField) -> Result<(ScalarField, ScalarField)> {
    if alpha_1.patch() != alpha_2.patch() {
        return Err(Error::ShapeMismatch { expected: alpha_1.patch().len(), got: alpha_2.values().len() });
    }
    Ok((alpha_2.map(|b| -b), alpha_1.clone()))
}

/// `Δf = (1/√g) ∂_i(√g g^{ij} ∂_j f)` with the grid's high-order stencils,
/// applied in flux (divergence) form.
pub fn laplace_beltrami(f: &ScalarField, metric: &MetricField) -> Result<ScalarField> {
    f.check_finite()?;
    let fu = derivative_unchecked(f, Direction::U, 1);
    let fv = derivative_unchecked(f, Direction::V, 1);
    let n = f.patch().len();
    let mut flux_u = Vec::with_capacity(n);
    let mut flux_v = Vec::with_capacity(n);
    for k in 0..n {
        let a = metric.area.values()[k];
        let (gu, gv) = (fu.values()[k], fv.values()[k]);
        flux_u.push(a * (metric.inv_uu.values()[k] * gu + metric.inv_uv.values()[k] * gv));
        flux_v.push(a * (metric.inv_uv.values()[k] * gu + metric.inv_vv.values()[k] * gv));
    }
    let patch = *f.patch();
    let div_u = derivative_unchecked(&Field::new(patch, flux_u)?, Direction::U, 1);
    let div_v = derivative_unchecked(&Field::new(patch, flux_v)?, Direction::V, 1);
    Ok(Field::from_fn(patch, |i, j| (div_u.at(i, j) + div_v.at(i, j)) / metric.area.at(i, j)))
}

/// Compact conservative Laplace–Beltrami (second order, nearest-neighbour
/// faces). Its area-weighted sum over any set of nodes equals the discrete
/// flux through that set's boundary, which is what zero counting relies on.
/// Faces leaving an open axis carry no flux.
pub fn laplace_beltrami_conservative(f: &ScalarField, metric: &MetricField) -> Result<ScalarField> {
    f.check_finite()?;
    let patch = *f.patch();
    let (hu, hv) = (patch.hu(), patch.hv());
    let wrap = |i: isize, j: isize| patch.wrap(i, j);
    let cu = |k: usize| metric.area.values()[k] * metric.inv_uu.values()[k];
    let cx = |k: usize| metric.area.values()[k] * metric.inv_uv.values()[k];
    let cv = |k: usize| metric.area.values()[k] * metric.inv_vv.values()[k];
    // Central derivative at a node, one-sided on open ends.
    let dv_node = |i: usize, j: isize| -> f64 {
        match (wrap(i as isize, j + 1), wrap(i as isize, j - 1)) {
            (Some(p), Some(m)) => (f.at(p.0, p.1) - f.at(m.0, m.1)) / (2.0 * hv),
            (Some(p), None) => (f.at(p.0, p.1) - f.at(i, j as usize)) / hv,
            (None, Some(m)) => (f.at(i, j as usize) - f.at(m.0, m.1)) / hv,
            (None, None) => 0.0,
        }
    };
    let du_node = |i: isize, j: usize| -> f64 {
        match (wrap(i + 1, j as isize), wrap(i - 1, j as isize)) {
            (Some(p), Some(m)) => (f.at(p.0, p.1) - f.at(m.0, m.1)) / (2.0 * hu),
            (Some(p), None) => (f.at(p.0, p.1) - f.at(i as usize, j)) / hu,
            (None, Some(m)) => (f.at(i as usize, j) - f.at(m.0, m.1)) / hu,
            (None, None) => 0.0,
        }
    };
    // Flux through the face between node (i,j) and its +u neighbour.
    let face_u = |i: isize, j: usize| -> f64 {
        let (Some(a), Some(b)) = (wrap(i, j as isize), wrap(i + 1, j as isize)) else {
            return 0.0;
        };
        let (ka, kb) = (patch.idx(a.0, a.1), patch.idx(b.0, b.1));
        let grad_u = (f.values()[kb] - f.values()[ka]) / hu;
        let grad_v = 0.5 * (dv_node(a.0, a.1 as isize) + dv_node(b.0, b.1 as isize));
        0.5 * (cu(ka) + cu(kb)) * grad_u + 0.5 * (cx(ka) + cx(kb)) * grad_v
    };
    let face_v = |i: usize, j: isize| -> f64 {
        let (Some(a), Some(b)) = (wrap(i as isize, j), wrap(i as isize, j + 1)) else {
            return 0.0;
        };
        let (ka, kb) = (patch.idx(a.0, a.1), patch.idx(b.0, b.1));
        let grad_v = (f.values()[kb] - f.values()[ka]) / hv;
        let grad_u = 0.5 * (du_node(a.0 as isize, a.1) + du_node(b.0 as isize, b.1));
        0.5 * (cv(ka) + cv(kb)) * grad_v + 0.5 * (cx(ka) + cx(kb)) * grad_u
    };
    Ok(Field::from_fn(patch, |i, j| {
        let (ii, jj) = (i as isize, j as isize);
        let div = (face_u(ii, j) - face_u(ii - 1, j)) / hu + (face_v(i, jj) - face_v(i, jj - 1)) / hv;
        div / metric.area.at(i, j)
    }))
}

/// `dα(∂u, ∂v) = ∂u α(∂v) − ∂v α(∂u)` for a 1-form given on coordinate vectors.
pub fn exterior_derivative(alpha_u: &ScalarField, alpha_v: &ScalarField) -> Result<ScalarField> {
    alpha_u.check_finite()?;
    alpha_v.check_finite()?;
    let a = derivative_unchecked(alpha_v, Direction::U, 1);
    let b = derivative_unchecked(alpha_u, Direction::V, 1);
    Ok(a.zip_map(&b, |x, y| x - y))
}

/// Quadrature weights (including the spacing) along one axis: trapezoid on
/// periodic axes, midpoint on pole-capped axes, composite Simpson on open
/// axes (with a 3/8 panel at the end when the interval count is odd).
pub fn axis_weights(axis: &Axis) -> Vec<f64> {
    let h = axis.spacing();
    let n = axis.n;
    match axis.kind {
        AxisKind::Periodic | AxisKind::Capped => alloc::vec![h; n],
        AxisKind::Open => {
            let mut w = alloc::vec![0.0; n];
            let intervals = n - 1;
            let simpson_end = if intervals.is_multiple_of(2) { n - 1 } else { n - 4 };
            for k in (0..simpson_end).step_by(2) {
                w[k] += h / 3.0;
                w[k + 1] += 4.0 * h / 3.0;
                w[k + 2] += h / 3.0;
            }
            if simpson_end != n - 1 {
                let s = simpson_end;
                w[s] += 3.0 * h / 8.0;
                w[s + 1] += 9.0 * h / 8.0;
                w[s + 2] += 9.0 * h / 8.0;
                w[s + 3] += 3.0 * h / 8.0;
            }
            w
        }
    }
}

/// `∫ field dA` with the axis quadratures and a fixed-order reduction.
pub fn integrate(field: &ScalarField, metric: &MetricField) -> f64 {
    let patch = field.patch();
    let wu = axis_weights(patch.u());
    let wv = axis_weights(patch.v());
    let mut terms = Vec::with_capacity(patch.len());
    for i in 0..patch.nu() {
        for j in 0..patch.nv() {
            terms.push(field.at(i, j) * metric.area.at(i, j) * wu[i] * wv[j]);
        }
    }
    pairwise_sum(&terms)
}

/// `∫ field dA` restricted to nodes where `keep` is true.
pub fn integrate_masked(field: &ScalarField, metric: &MetricField, keep: impl Fn(usize, usize) -> bool) -> f64 {
    let patch = field.patch();
    let wu = axis_weights(patch.u());
    let wv = axis_weights(patch.v());
    let mut terms = Vec::with_capacity(patch.len());
    for i in 0..patch.nu() {
        for j in 0..patch.nv() {
            if keep(i, j) {
                terms.push(field.at(i, j) * metric.area.at(i, j) * wu[i] * wv[j]);
            }
        }
    }
    pairwise_sum(&terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridPatch;
    use core::f64::consts::PI;

    #[test]
    fn hodge_star_conventions() {
        assert_eq!(hodge_star_oneform(1.0, 0.0), (0.0, 1.0));
        assert_eq!(hodge_star_oneform(0.0, 1.0), (-1.0, 0.0));
        let (a, b) = hodge_star_oneform(0.3, -2.0);
        let (c, d) = hodge_star_oneform(a, b);
        assert_eq!((c, d), (-0.3, 2.0));
    }

    #[test]
    fn flat_laplacian_of_cosine() {
        let p = GridPatch::torus(256, 16, 2.0 * PI, 1.0).unwrap();
        let m = MetricField::flat(p);
        let f = Field::from_fn(p, |i, _| p.u().coord(i as isize).cos());
        let lap = laplace_beltrami(&f, &m).unwrap();
        let err = lap.zip_map(&f, |l, x| l + x).max_abs();
        assert!(err < 1e-3, "{err:e}");
        let c = Field::constant(p, 2.5);
        assert!(laplace_beltrami(&c, &m).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn round_sphere_harmonic_is_an_eigenfunction() {
        // Chart (λ, φ) of the unit sphere, g = sin²φ dλ² + dφ²; x = sinφ cosλ has Δx = −2x.
        let errs: Vec<f64> = [64usize, 128]
            .iter()
            .map(|&n| {
                let p = GridPatch::new(Axis::periodic(n, 0.0, 2.0 * PI), Axis::capped(n, 0.0, PI)).unwrap();
                let m = MetricField::new(
                    Field::from_fn(p, |_, j| p.v().coord(j as isize).sin().powi(2)),
                    Field::constant(p, 0.0),
                    Field::constant(p, 1.0),
                )
                .unwrap();
                let f = Field::from_fn(p, |i, j| {
                    let (l, ph) = p.coords(i, j);
                    ph.sin() * l.cos()
                });
                let lap = laplace_beltrami(&f, &m).unwrap();
                // Away from the poles, where one-sided stencils meet the 1/sin φ factor.
                let mut e: f64 = 0.0;
                for i in 0..n {
                    for j in n / 8..n - n / 8 {
                        e = e.max((lap.at(i, j) + 2.0 * f.at(i, j)).abs());
                    }
                }
                e
            })
            .collect();
        assert!(errs[1] < 1e-3, "{errs:?}");
        assert!(errs[1] < errs[0] / 3.0, "not converging at second order: {errs:?}");
    }

    #[test]
    fn trig_polynomial_quadrature_is_exact() {
        let p = GridPatch::torus(32, 32, 2.0 * PI, 2.0 * PI).unwrap();
        let m = MetricField::flat(p);
        let f = Field::from_fn(p, |i, j| {
            let (u, v) = p.coords(i, j);
            1.0 + (3.0 * u).cos() * (2.0 * v).sin() + (7.0 * u + v).sin()
        });
        assert!((integrate(&f, &m) - 4.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn simpson_weights_integrate_cubics() {
        for n in [9usize, 10, 11, 12] {
            let a = Axis::open(n, 0.0, 2.0);
            let w = axis_weights(&a);
            let s: f64 = (0..n).map(|k| w[k] * a.coord(k as isize).powi(3)).sum();
            assert!((s - 4.0).abs() < 1e-12, "n={n}: {s}");
        }
    }

    #[test]
    fn closed_patch_laplacian_integrates_to_zero() {
        let p = GridPatch::torus(64, 48, 2.0 * PI, 3.0).unwrap();
        let m = MetricField::new(
            Field::from_fn(p, |i, j| 2.0 + p.coords(i, j).0.sin() * 0.5),
            Field::from_fn(p, |i, _| 0.2 * p.u().coord(i as isize).cos()),
            Field::from_fn(p, |_, j| 1.5 + 0.3 * (2.0 * PI * p.v().coord(j as isize) / 3.0).cos()),
        )
        .unwrap();
        let f = Field::from_fn(p, |i, j| {
            let (u, v) = p.coords(i, j);
            (u + 2.0 * PI * v / 3.0).sin() + 0.3 * (2.0 * u).cos()
        });
        for lap in [laplace_beltrami(&f, &m).unwrap(), laplace_beltrami_conservative(&f, &m).unwrap()] {
            assert!(integrate(&lap, &m).abs() < 1e-10 * f.max_abs());
        }
    }
}
