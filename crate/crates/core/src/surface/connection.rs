use alloc::vec::Vec;

use super::{NormalFrame, ShapeReport, TangentFrame};
use crate::grid::diff::{derivative_unchecked, Direction};
use crate::grid::{exterior_derivative, Field, ScalarField};
use crate::linalg::Vec5;
use crate::{Complex64, Result};

/// Connection data at one node, with every 1-form evaluated on `∂u` and `∂v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointConnection {
    pub w1: [f64; 2],
    pub w2: [f64; 2],
    /// `ω₁₂(X) = ⟨∇_X e₁, e₂⟩`.
    pub w12: [f64; 2],
    /// `ω₃₄(X) = ⟨∇⊥_X e₃, e₄⟩`.
    pub w34: [f64; 2],
    pub h3: Complex64,
    pub h4: Complex64,
}

/// Everything needed to write down the moving-frame equations of the
/// surface and of its associated family, in one tangent and normal gauge.
#[derive(Debug, Clone)]
pub struct ConnectionData {
    pub points: Field<PointConnection>,
    /// Nodes where the normal gauge is discontinuous (see
    /// [`super::NormalHolonomy`]).
    pub mask: Field<bool>,
}

/// Curvatures recovered from derivatives of the connection forms alone:
/// `dω₁₂ = −K ω₁∧ω₂` and `dω₃₄ = −K_N ω₁∧ω₂`.
#[derive(Debug, Clone)]
pub struct IntrinsicCurvatures {
    pub k: ScalarField,
    pub kn: ScalarField,
}

/// `½(⟨∂a, b⟩ − ⟨∂b, a⟩)` along both axes.
fn frame_form(a: &Field<Vec5>, b: &Field<Vec5>) -> (ScalarField, ScalarField) {
    let mut out = Vec::with_capacity(2);
    for dir in [Direction::U, Direction::V] {
        let da = derivative_unchecked(a, dir, 1);
        let db = derivative_unchecked(b, dir, 1);
        out.push(Field::from_fn(*a.patch(), |i, j| {
            0.5 * (da.at(i, j).dot(&b.at(i, j)) - db.at(i, j).dot(&a.at(i, j)))
        }));
    }
    let v = out.pop().expect("two directions");
    let u = out.pop().expect("two directions");
    (u, v)
}

/// Differentiates the frames to get `ω₁₂`, `ω₃₄` and bundles them with the
/// coframe and `H_α`.
pub fn connection_data(tf: &TangentFrame, nf: &NormalFrame, shape: &ShapeReport) -> Result<ConnectionData> {
    tf.e1.check_finite()?;
    nf.e3.check_finite()?;
    let (w12u, w12v) = frame_form(&tf.e1, &tf.e2);
    let (w34u, w34v) = frame_form(&nf.e3, &nf.e4);
    let patch = *tf.e1.patch();
    let points = Field::from_fn(patch, |i, j| {
        let [a, b, c, d] = tf.coframe.at(i, j);
        PointConnection {
            w1: [a, b],
            w2: [c, d],
            w12: [w12u.at(i, j), w12v.at(i, j)],
            w34: [w34u.at(i, j), w34v.at(i, j)],
            h3: shape.h3.at(i, j),
            h4: shape.h4.at(i, j),
        }
    });
    Ok(ConnectionData { points, mask: nf.holonomy.mask.clone() })
}

impl ConnectionData {
    pub fn patch(&self) -> &crate::grid::GridPatch {
        self.points.patch()
    }

    fn component(&self, f: impl Fn(&PointConnection) -> f64) -> ScalarField {
        self.points.map(|p| f(&p))
    }

    /// Gauss and normal curvature from `dω₁₂` and `dω₃₄`.
    pub fn intrinsic_curvatures(&self) -> Result<IntrinsicCurvatures> {
        let area = self.component(|p| p.w1[0] * p.w2[1] - p.w1[1] * p.w2[0]);
        let d12 = exterior_derivative(&self.component(|p| p.w12[0]), &self.component(|p| p.w12[1]))?;
        let d34 = exterior_derivative(&self.component(|p| p.w34[0]), &self.component(|p| p.w34[1]))?;
        Ok(IntrinsicCurvatures {
            k: d12.zip_map(&area, |d, a| -d / a),
            kn: d34.zip_map(&area, |d, a| -d / a),
        })
    }
}
