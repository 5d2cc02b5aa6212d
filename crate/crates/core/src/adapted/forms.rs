use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::AdaptedFrameField;
use crate::grid::diff::{d1, derivative_unchecked, Direction};
use crate::grid::{AxisKind, Field, GridPatch, ScalarField};
use crate::surface::TangentFrame;
use crate::Complex64;

/// Lower bound on `κ₁² − μ₁²` below which the forms are not evaluated.
pub const DISCRIMINANT_FLOOR: f64 = 1e-10;

/// Tangent frame `e_k = m[k][0] ∂u + m[k][1] ∂v` at every node; enough to
/// evaluate 1-forms given on coordinate vectors at `E = e₁ − ie₂`.
#[derive(Debug, Clone)]
pub struct EvalFrame {
    pub map: Field<[[f64; 2]; 2]>,
}

impl EvalFrame {
    pub fn from_tangent(tf: &TangentFrame) -> Self {
        Self { map: Field::from_fn(*tf.e1.patch(), |i, j| tf.vector_map(i, j)) }
    }

    /// Coordinate frame `e₁ = ∂u`, `e₂ = ∂v` (a flat, orthonormal chart).
    pub fn coordinate(patch: GridPatch) -> Self {
        Self { map: Field::constant(patch, [[1.0, 0.0], [0.0, 1.0]]) }
    }

    /// `ω(E) = ω(e₁) − iω(e₂)` for `w = [ω(∂u), ω(∂v)]`.
    pub fn on_e(&self, i: usize, j: usize, w: [f64; 2]) -> Complex64 {
        let m = self.map.at(i, j);
        Complex64::new(m[0][0] * w[0] + m[0][1] * w[1], -(m[1][0] * w[0] + m[1][1] * w[1]))
    }

    /// `E(g)` for a scalar field, by finite differences.
    pub fn derivative_e(&self, g: &ScalarField) -> Field<Complex64> {
        let gu = derivative_unchecked(g, Direction::U, 1);
        let gv = derivative_unchecked(g, Direction::V, 1);
        Field::from_fn(*g.patch(), |i, j| self.on_e(i, j, [gu.at(i, j), gv.at(i, j)]))
    }
}

/// Nodes whose ±3 neighbourhood along both axes avoids `mask`.
pub(crate) fn stencil_validity(mask: &Field<bool>) -> Field<bool> {
    let p = *mask.patch();
    Field::from_fn(p, |i, j| {
        for o in -3isize..=3 {
            for (di, dj) in [(o, 0), (0, o)] {
                if let Some((a, b)) = p.wrap(i as isize + di, j as isize + dj) {
                    if mask.at(a, b) {
                        return false;
                    }
                }
            }
        }
        true
    })
}

/// Gradient of an angle field known only modulo `period`: every stencil is
/// unwrapped relative to its centre before differencing.
pub(crate) fn angle_gradient(angle: &ScalarField, period: f64) -> (ScalarField, ScalarField) {
    let p = *angle.patch();
    let unwrap = |x: f64, c: f64| c + (x - c) - period * ((x - c) / period).round();
    let along = |dir: Direction| {
        Field::from_fn(p, |i, j| {
            let h = match dir {
                Direction::U => p.hu(),
                Direction::V => p.hv(),
            };
            let c = angle.at(i, j);
            let mut line: Vec<f64> = Vec::with_capacity(7);
            let mut centre = 0;
            for o in -3isize..=3 {
                let (di, dj) = match dir {
                    Direction::U => (o, 0),
                    Direction::V => (0, o),
                };
                if let Some((a, b)) = p.wrap(i as isize + di, j as isize + dj) {
                    if o == 0 {
                        centre = line.len();
                    }
                    line.push(unwrap(angle.at(a, b), c));
                }
            }
            // The truncated line reproduces the global stencil's order near open ends.
            d1(&line, centre, AxisKind::Open, h)
        })
    };
    (along(Direction::U), along(Direction::V))
}

/// Both evaluations of `ω₁₂(E)` and `ω₃₄(E)`.
#[derive(Debug, Clone)]
pub struct ConnectionForms {
    /// From `ω₁₂ = −¼ *d log(κ₁² − μ₁²)`, `ω₃₄ = *(κ₁dμ₁ − μ₁dκ₁)/(κ₁² − μ₁²)`.
    pub formula12: Field<Complex64>,
    pub formula34: Field<Complex64>,
    /// From derivatives of the adapted frame.
    pub direct12: Field<Complex64>,
    pub direct34: Field<Complex64>,
    pub valid: Field<bool>,
}

impl ConnectionForms {
    /// `max |formula − direct|` over valid nodes, for `(ω₁₂, ω₃₄)`.
    pub fn discrepancy(&self) -> (f64, f64) {
        let mut out = (0.0f64, 0.0f64);
        for k in 0..self.valid.values().len() {
            if self.valid.values()[k] {
                out.0 = out.0.max((self.formula12.values()[k] - self.direct12.values()[k]).norm());
                out.1 = out.1.max((self.formula34.values()[k] - self.direct34.values()[k]).norm());
            }
        }
        out
    }

    pub fn valid_count(&self) -> usize {
        self.valid.values().iter().filter(|&&v| v).count()
    }
}

/// Evaluates the closed-form connection forms at `E` from `κ₁`, `μ₁` alone.
/// Uses `*α(E) = −i α(E)`, which follows from `*ω₁ = ω₂`, `*ω₂ = −ω₁`.
/// Returns the two forms and the nodes where `κ₁² − μ₁² > 1e-10`.
pub fn closed_form_connection_forms(
    kappa1: &ScalarField,
    mu1: &ScalarField,
    frame: &EvalFrame,
) -> (Field<Complex64>, Field<Complex64>, Field<bool>) {
    let p = *kappa1.patch();
    let ek = frame.derivative_e(kappa1);
    let em = frame.derivative_e(mu1);
    let i_unit = Complex64::new(0.0, 1.0);
    let disc = kappa1.zip_map(mu1, |k, m| k * k - m * m);
    let w12 = Field::from_fn(p, |i, j| {
        let (k, m, d) = (kappa1.at(i, j), mu1.at(i, j), disc.at(i, j));
        // E(log D) = (2κ₁E(κ₁) − 2μ₁E(μ₁))/D
        let elog = (ek.at(i, j) * (2.0 * k) - em.at(i, j) * (2.0 * m)) / d;
        i_unit * elog * 0.25
    });
    let w34 = Field::from_fn(p, |i, j| {
        let (k, m, d) = (kappa1.at(i, j), mu1.at(i, j), disc.at(i, j));
        -i_unit * (em.at(i, j) * k - ek.at(i, j) * m) / d
    });
    let ok = disc.map(|d| d > DISCRIMINANT_FLOOR);
    (w12, w34, ok)
}

/// Closed-form versus frame-derivative connection forms of an adapted frame.
pub fn connection_forms(aff: &AdaptedFrameField) -> ConnectionForms {
    let frame = EvalFrame::from_tangent(&aff.tangent);
    let (f12, f34, ok) = closed_form_connection_forms(&aff.sigma.0, &aff.sigma.1, &frame);
    let ok_mask = ok.map(|b| !b);
    let near = stencil_validity(&ok_mask);
    let valid = aff.valid.zip_map(&near, |a, b| a && b);
    ConnectionForms {
        formula12: f12,
        formula34: f34,
        direct12: aff.omega12_e.clone(),
        direct34: aff.omega34_e.clone(),
        valid,
    }
}

/// `max` over `valid` nodes of `|E(κ₁) + 2iκ₁ω₁₂(E) − iμ₁ω₃₄(E)|` and
/// `|E(μ₁) + 2iμ₁ω₁₂(E) − iκ₁ω₃₄(E)|`.
pub fn frame_derivative_identity_residual(
    kappa1: &ScalarField,
    mu1: &ScalarField,
    omega12_e: &Field<Complex64>,
    omega34_e: &Field<Complex64>,
    frame: &EvalFrame,
    valid: &Field<bool>,
) -> f64 {
    let ek = frame.derivative_e(kappa1);
    let em = frame.derivative_e(mu1);
    let i_unit = Complex64::new(0.0, 1.0);
    let mut worst = 0.0f64;
    for k in 0..valid.values().len() {
        if !valid.values()[k] {
            continue;
        }
        let (ka, mu) = (kappa1.values()[k], mu1.values()[k]);
        let (w12, w34) = (omega12_e.values()[k], omega34_e.values()[k]);
        let r1 = ek.values()[k] + i_unit * w12 * (2.0 * ka) - i_unit * w34 * mu;
        let r2 = em.values()[k] + i_unit * w12 * (2.0 * mu) - i_unit * w34 * ka;
        worst = worst.max(r1.norm()).max(r2.norm());
    }
    worst
}

impl AdaptedFrameField {
    /// [`frame_derivative_identity_residual`] with this frame's `κ₁`, `μ₁`
    /// and frame-derivative forms.
    pub fn identity_residual(&self) -> f64 {
        let frame = EvalFrame::from_tangent(&self.tangent);
        // The identities are linear in (κ₁, μ₁); the canonical singular
        // values differ from them by a locally constant common sign.
        frame_derivative_identity_residual(
            &self.sigma.0,
            &self.sigma.1,
            &self.omega12_e,
            &self.omega34_e,
            &frame,
            &self.valid,
        )
    }
}
