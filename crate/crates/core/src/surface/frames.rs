use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use super::{Immersion, Jets};
use crate::grid::{Field, MetricField, ScalarField};
use crate::linalg::{Mat5, Vec5};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Orientation::Positive => Orientation::Negative,
            Orientation::Negative => Orientation::Positive,
        }
    }
}

/// Orthonormal tangent fields with their coframe.
///
/// `coframe` holds `[ω₁(∂u), ω₁(∂v), ω₂(∂u), ω₂(∂v)]` at each node, so any
/// 1-form known on `e₁, e₂` can be pulled back to coordinate vectors.
#[derive(Debug, Clone)]
pub struct TangentFrame {
    pub e1: Field<Vec5>,
    pub e2: Field<Vec5>,
    pub coframe: Field<[f64; 4]>,
    pub metric: MetricField,
    pub orientation: Orientation,
}

impl TangentFrame {
    /// Coordinates of `e₁, e₂` in the basis `∂u, ∂v`: returns
    /// `[[e₁^u, e₁^v], [e₂^u, e₂^v]]`.
    pub fn vector_map(&self, i: usize, j: usize) -> [[f64; 2]; 2] {
        let [a, b, c, d] = self.coframe.at(i, j);
        let det = a * d - b * c;
        [[d / det, -c / det], [-b / det, a / det]]
    }

    /// `(ω₁ ∧ ω₂)(∂u, ∂v)`; negative for the negative orientation.
    pub fn area_form(&self, i: usize, j: usize) -> f64 {
        let [a, b, c, d] = self.coframe.at(i, j);
        a * d - b * c
    }

    /// Frame rotated pointwise by `angle`: `e₁' = cos t e₁ + sin t e₂`,
    /// `e₂' = −sin t e₁ + cos t e₂`.
    pub fn rotated(&self, angle: &ScalarField) -> Self {
        let patch = *self.e1.patch();
        let rot = |i: usize, j: usize| {
            let t = angle.at(i, j);
            (t.cos(), t.sin())
        };
        Self {
            e1: Field::from_fn(patch, |i, j| {
                let (c, s) = rot(i, j);
                self.e1.at(i, j) * c + self.e2.at(i, j) * s
            }),
            e2: Field::from_fn(patch, |i, j| {
                let (c, s) = rot(i, j);
                self.e2.at(i, j) * c - self.e1.at(i, j) * s
            }),
            coframe: Field::from_fn(patch, |i, j| {
                let (c, s) = rot(i, j);
                let [a, b, p, q] = self.coframe.at(i, j);
                [c * a + s * p, c * b + s * q, c * p - s * a, c * q - s * b]
            }),
            metric: self.metric.clone(),
            orientation: self.orientation,
        }
    }
}

/// Gram–Schmidt of `(f_u, f_v)` after removing their radial components.
/// A negative orientation flips `e₂`.
pub fn tangent_frame(imm: &Immersion, jets: &Jets, orientation: Orientation) -> Result<TangentFrame> {
    let patch = *imm.patch();
    let n = patch.len();
    let s = orientation.sign();
    let (mut e1, mut e2, mut cof) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    let (mut ge, mut gf, mut gg) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for k in 0..n {
        let f = imm.position().values()[k];
        let fu = jets.fu.values()[k];
        let fv = jets.fv.values()[k];
        let fu = fu - f * f.dot(&fu);
        let fv = fv - f * f.dot(&fv);
        let r11 = fu.norm();
        if !(r11 > 1e-12) {
            return Err(Error::NotImmersion { index: patch.ij(k) });
        }
        let a = fu / r11;
        let r12 = fv.dot(&a);
        let w = fv - a * r12;
        let wn = w.norm();
        if !(wn > 1e-10 * r11.max(fv.norm())) {
            return Err(Error::NotImmersion { index: patch.ij(k) });
        }
        e1.push(a);
        e2.push(w * (s / wn));
        cof.push([r11, r12, 0.0, s * wn]);
        ge.push(fu.dot(&fu));
        gf.push(fu.dot(&fv));
        gg.push(fv.dot(&fv));
    }
    let metric = MetricField::new(Field::new(patch, ge)?, Field::new(patch, gf)?, Field::new(patch, gg)?)?;
    Ok(TangentFrame {
        e1: Field::new(patch, e1)?,
        e2: Field::new(patch, e2)?,
        coframe: Field::new(patch, cof)?,
        metric,
        orientation,
    })
}

/// Failure of the propagated normal gauge to close up around the patch.
#[derive(Debug, Clone)]
pub struct NormalHolonomy {
    /// Rotation angle of the transported normal frame around the `v` lap
    /// at `u = 0`, removed by a linear gauge ramp.
    pub v_angle: f64,
    /// Per-row rotation angles around the `u` lap, unwrapped in `v`.
    pub u_angles: Vec<f64>,
    /// Number of full turns the `u`-lap angle makes along a `v` lap. Nonzero
    /// means no global smooth normal frame exists in this chart.
    pub winding: i64,
    /// Nodes whose difference stencils straddle the resulting gauge seam.
    pub mask: Field<bool>,
}

impl NormalHolonomy {
    pub fn is_trivial(&self) -> bool {
        self.winding == 0
    }

    pub fn masked_count(&self) -> usize {
        self.mask.values().iter().filter(|&&m| m).count()
    }
}

/// Oriented orthonormal normal fields: `det[f, e₁, e₂, e₃, e₄] = ±1` per
/// `orientation`.
#[derive(Debug, Clone)]
pub struct NormalFrame {
    pub e3: Field<Vec5>,
    pub e4: Field<Vec5>,
    pub orientation: Orientation,
    pub holonomy: NormalHolonomy,
}

impl NormalFrame {
    /// Gauge rotated pointwise by `angle`: `e₃' = cos t e₃ + sin t e₄`,
    /// `e₄' = −sin t e₃ + cos t e₄`.
    pub fn rotated(&self, angle: &ScalarField) -> Self {
        let patch = *self.e3.patch();
        Self {
            e3: Field::from_fn(patch, |i, j| {
                let t = angle.at(i, j);
                self.e3.at(i, j) * t.cos() + self.e4.at(i, j) * t.sin()
            }),
            e4: Field::from_fn(patch, |i, j| {
                let t = angle.at(i, j);
                self.e4.at(i, j) * t.cos() - self.e3.at(i, j) * t.sin()
            }),
            orientation: self.orientation,
            holonomy: self.holonomy.clone(),
        }
    }

    /// Reverses the normal orientation (`e₄ → −e₄`).
    pub fn flipped(&self) -> Self {
        Self {
            e3: self.e3.clone(),
            e4: self.e4.map(|v| -v),
            orientation: self.orientation.flip(),
            holonomy: self.holonomy.clone(),
        }
    }
}

struct Basis<'a> {
    pos: &'a Field<Vec5>,
    tf: &'a TangentFrame,
}

impl Basis<'_> {
    fn project(&self, k: usize, v: &Vec5) -> Vec5 {
        let f = self.pos.values()[k];
        let a = self.tf.e1.values()[k];
        let b = self.tf.e2.values()[k];
        v - f * f.dot(v) - a * a.dot(v) - b * b.dot(v)
    }

    fn det(&self, k: usize, n3: &Vec5, n4: &Vec5) -> f64 {
        Mat5::from_columns(&[self.pos.values()[k], self.tf.e1.values()[k], self.tf.e2.values()[k], *n3, *n4])
            .determinant()
    }

    /// Completes `n3` to a positively oriented normal pair, preferring the
    /// direction of `hint`.
    fn complete(&self, k: usize, n3: Vec5, hint: Option<Vec5>) -> Option<(Vec5, Vec5)> {
        let mut best: Option<Vec5> = None;
        if let Some(h) = hint {
            let w = self.project(k, &h);
            let w = w - n3 * n3.dot(&w);
            if w.norm() > 0.3 {
                best = Some(w);
            }
        }
        if best.is_none() {
            let mut top = 0.0;
            for ax in 0..5 {
                let w = self.project(k, &Vec5::ith(ax, 1.0));
                let w = w - n3 * n3.dot(&w);
                if w.norm() > top {
                    top = w.norm();
                    best = Some(w);
                }
            }
        }
        let n4 = best?.normalize();
        let n4 = if self.det(k, &n3, &n4) < 0.0 { -n4 } else { n4 };
        Some((n3, n4))
    }

    /// Positively oriented normal pair at the origin node, built from the
    /// ambient `x₅` axis (as `e₄`) or else the `x₄` axis (as `e₃`).
    fn seed(&self, k: usize) -> Option<(Vec5, Vec5)> {
        let a5 = self.project(k, &Vec5::ith(4, 1.0));
        if a5.norm() >= 0.5 {
            let n4 = a5.normalize();
            let mut top = 0.0;
            let mut n3 = None;
            for ax in 0..5 {
                let w = self.project(k, &Vec5::ith(ax, 1.0));
                let w = w - n4 * n4.dot(&w);
                if w.norm() > top {
                    top = w.norm();
                    n3 = Some(w.normalize());
                }
            }
            let n3 = n3?;
            let n3 = if self.det(k, &n3, &n4) < 0.0 { -n3 } else { n3 };
            return Some((n3, n4));
        }
        let a4 = self.project(k, &Vec5::ith(3, 1.0));
        if a4.norm() >= 0.5 {
            return self.complete(k, a4.normalize(), Some(Vec5::ith(4, 1.0)));
        }
        let mut top = 0.0;
        let mut n3 = None;
        for ax in 0..5 {
            let w = self.project(k, &Vec5::ith(ax, 1.0));
            if w.norm() > top {
                top = w.norm();
                n3 = Some(w.normalize());
            }
        }
        self.complete(k, n3?, None)
    }

    /// Normal pair at node `k` closest to `(p3, p4)` (same orientation).
    fn transport(&self, k: usize, p3: &Vec5, p4: &Vec5) -> Option<(Vec5, Vec5)> {
        let w = self.project(k, p3);
        let (n3, n4) = if w.norm() > 0.3 { self.complete(k, w.normalize(), Some(*p4))? } else { self.seed(k)? };
        let psi = (n4.dot(p3) - n3.dot(p4)).atan2(n3.dot(p3) + n4.dot(p4));
        Some(rotate_pair(&n3, &n4, psi))
    }
}

fn rotate_pair(a: &Vec5, b: &Vec5, t: f64) -> (Vec5, Vec5) {
    let (c, s) = (t.cos(), t.sin());
    (a * c + b * s, b * c - a * s)
}

/// Angle `β` with `q₃ = cos β e₃ + sin β e₄` for two frames of one plane.
fn relative_angle(q3: &Vec5, e3: &Vec5, e4: &Vec5) -> f64 {
    q3.dot(e4).atan2(q3.dot(e3))
}

fn wrap_pi(x: f64) -> f64 {
    x - 2.0 * PI * ((x + PI) / (2.0 * PI)).floor()
}

/// Smooth positively oriented normal frame.
///
/// The origin node is seeded from the ambient `x₅` axis (or `x₄`), the
/// frame is carried up column `u = 0` and then along every row by
/// nearest-rotation alignment, and the rotation mismatch around each
/// periodic lap is spread linearly over the lap. The remaining gauge
/// freedom is a pointwise `SO(2)` rotation of `(e₃, e₄)`.
pub fn normal_frame(imm: &Immersion, tf: &TangentFrame) -> Result<NormalFrame> {
    let patch = *imm.patch();
    let (nu, nv) = (patch.nu(), patch.nv());
    let basis = Basis { pos: imm.position(), tf };
    let degenerate = |k: usize| Error::NotImmersion { index: patch.ij(k) };
    let mut e3 = alloc::vec![Vec5::zeros(); patch.len()];
    let mut e4 = alloc::vec![Vec5::zeros(); patch.len()];

    let (s3, s4) = basis.seed(0).ok_or_else(|| degenerate(0))?;
    e3[0] = s3;
    e4[0] = s4;
    for j in 1..nv {
        let (a, b) = (patch.idx(0, j - 1), patch.idx(0, j));
        let (p3, p4) = (e3[a], e4[a]);
        (e3[b], e4[b]) = basis.transport(b, &p3, &p4).ok_or_else(|| degenerate(b))?;
    }
    let mut v_angle = 0.0;
    if patch.periodic_v() {
        let last = patch.idx(0, nv - 1);
        let (q3, _) = basis.transport(0, &e3[last], &e4[last]).ok_or_else(|| degenerate(0))?;
        v_angle = relative_angle(&q3, &e3[0], &e4[0]);
        for j in 1..nv {
            let k = patch.idx(0, j);
            (e3[k], e4[k]) = rotate_pair(&e3[k], &e4[k], -v_angle * j as f64 / nv as f64);
        }
    }

    let mut u_angles = alloc::vec![0.0; nv];
    for j in 0..nv {
        for i in 1..nu {
            let (a, b) = (patch.idx(i - 1, j), patch.idx(i, j));
            let (p3, p4) = (e3[a], e4[a]);
            (e3[b], e4[b]) = basis.transport(b, &p3, &p4).ok_or_else(|| degenerate(b))?;
        }
        if patch.periodic_u() {
            let (last, first) = (patch.idx(nu - 1, j), patch.idx(0, j));
            let (q3, _) = basis.transport(first, &e3[last], &e4[last]).ok_or_else(|| degenerate(first))?;
            u_angles[j] = relative_angle(&q3, &e3[first], &e4[first]);
        }
    }
    // Unwrap the lap angles along v so the ramp is smooth in j.
    for j in 1..nv {
        u_angles[j] = u_angles[j - 1] + wrap_pi(u_angles[j] - u_angles[j - 1]);
    }
    let mut winding = 0;
    if patch.periodic_u() {
        if patch.periodic_v() {
            let closing = u_angles[nv - 1] + wrap_pi(u_angles[0] - u_angles[nv - 1]);
            winding = ((closing - u_angles[0]) / (2.0 * PI)).round() as i64;
        }
        for j in 0..nv {
            for i in 1..nu {
                let k = patch.idx(i, j);
                (e3[k], e4[k]) = rotate_pair(&e3[k], &e4[k], -u_angles[j] * i as f64 / nu as f64);
            }
        }
    }
    let mask = Field::from_fn(patch, |_, j| winding != 0 && (j < 3 || j + 3 >= nv));
    Ok(NormalFrame {
        e3: Field::new(patch, e3)?,
        e4: Field::new(patch, e4)?,
        orientation: Orientation::Positive,
        holonomy: NormalHolonomy { v_angle, u_angles, winding, mask },
    })
}
