//! Frames aligned with the curvature ellipse, their connection forms, the
//! Hopf differential and the circle locus.
//!
//! In any frame the second fundamental form of a minimal surface is
//! captured by the 2×2 matrix `P = [[h₁₁³, h₁₂³], [h₁₁⁴, h₁₂⁴]]`. Rotating
//! the tangent frame by `t` and the normal frame by `α` sends it to
//! `R(−α) P R(2t)`, so diagonalising `P` by a singular value decomposition
//! gives the frame in which `H₃ = κ₁` is real and `H₄ = iμ₁` is imaginary.

mod forms;
mod hopf;

pub use forms::{
    connection_forms, closed_form_connection_forms, frame_derivative_identity_residual, ConnectionForms, EvalFrame,
};
pub use hopf::{
    find_zero_candidates, hopf_differential, superminimality_test, zero_orders, HopfField, IsothermalChart,
    SuperminimalityVerdict, ZeroOrder, SUPERMINIMAL_EPS,
};

use alloc::collections::VecDeque;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};
#[allow(unused_imports)]
use num_traits::Float;

use crate::grid::{Field, ScalarField};
use crate::linalg::Vec5;
use crate::surface::{NormalFrame, SurfaceAnalysis, TangentFrame};
use crate::{Complex64, Error, Result};

/// Relative threshold for the circle locus: `κ − μ ≤ 1e-4 · max κ`.
pub const CIRCLE_EPS: f64 = 1e-4;

/// Ellipse-aligned frames and the functions `κ₁`, `μ₁`.
#[derive(Debug, Clone)]
pub struct AdaptedFrameField {
    pub tangent: TangentFrame,
    pub normal: NormalFrame,
    /// `H₃ = κ₁`, with `|κ₁| = κ`.
    pub kappa1: ScalarField,
    /// `H₄ = iμ₁`, with `|μ₁| = μ`.
    pub mu1: ScalarField,
    /// `ω₁₂(E)` and `ω₃₄(E)` on `E = e₁ − ie₂`, from derivatives of the frame.
    pub omega12_e: Field<Complex64>,
    pub omega34_e: Field<Complex64>,
    /// Points where the ellipse is (numerically) a circle; frames there are
    /// left in the input gauge and every adapted quantity is meaningless.
    pub circle_mask: Field<bool>,
    /// `−1` where `e₃` points against the canonical major-axis direction.
    pub gauge_sign: Field<i8>,
    /// Rotation of the adapted frames relative to the input gauges.
    pub tangent_angle: ScalarField,
    pub normal_angle: ScalarField,
    /// Canonical singular values (`σ₁ ≥ 0`, `σ₂` signed), i.e. `(κ₁, μ₁)` up
    /// to a common sign that is locally continuous.
    sigma: (ScalarField, ScalarField),
    /// Nodes whose difference stencils touch the circle locus.
    valid: Field<bool>,
}

/// Closed-form 2×2 SVD `P = R(φ) diag(σ₁, σ₂) R(ϑ)`, `σ₁ ≥ |σ₂|`.
/// Returns `(σ₁, σ₂, ϑ, φ)`.
pub fn svd2(p: [[f64; 2]; 2]) -> (f64, f64, f64, f64) {
    let e = 0.5 * (p[0][0] + p[1][1]);
    let f = 0.5 * (p[0][0] - p[1][1]);
    let g = 0.5 * (p[1][0] + p[0][1]);
    let h = 0.5 * (p[1][0] - p[0][1]);
    let q = e.hypot(h);
    let r = f.hypot(g);
    let a1 = g.atan2(f);
    let a2 = h.atan2(e);
    (q + r, q - r, 0.5 * (a2 - a1), 0.5 * (a2 + a1))
}

fn rot(a: &Vec5, b: &Vec5, t: f64) -> (Vec5, Vec5) {
    let (s, c) = t.sin_cos();
    (a * c + b * s, b * c - a * s)
}

/// Frame `[e₁, e₂, e₃, e₄]` at node `k` for rotation angles `(t, α)`.
fn frame_at(tf: &TangentFrame, nf: &NormalFrame, k: usize, t: f64, a: f64) -> [Vec5; 4] {
    let (e1, e2) = rot(&tf.e1.values()[k], &tf.e2.values()[k], t);
    let (e3, e4) = rot(&nf.e3.values()[k], &nf.e4.values()[k], a);
    [e1, e2, e3, e4]
}

fn frame_distance(a: &[Vec5; 4], b: &[Vec5; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_squared()).sum()
}

/// Builds the adapted frame from the default-gauge analysis of a surface.
///
/// The discrete ambiguity (`t + kπ/2`, `α + lπ`) is resolved breadth-first
/// from the grid origin, choosing at each node the candidate closest to the
/// already assigned neighbour it was reached from.
pub fn build_adapted_frame(analysis: &SurfaceAnalysis) -> Result<AdaptedFrameField> {
    let shape = &analysis.shape;
    let (tf, nf) = (&analysis.tangent, &analysis.normal);
    let patch = *shape.kappa.patch();
    let n = patch.len();
    let kmax = shape.kappa.max();
    let circle_mask = shape.kappa.zip_map(&shape.mu, |k, m| k - m <= CIRCLE_EPS * kmax);
    if circle_mask.values().iter().all(|&m| m) {
        return Err(Error::SuperminimalPatch);
    }

    let (mut t0, mut a0, mut s1, mut s2) = (alloc::vec![0.0; n], alloc::vec![0.0; n], alloc::vec![0.0; n], alloc::vec![0.0; n]);
    for k in 0..n {
        let h = shape.h.values()[k];
        let (x, y, theta, phi) = svd2([[h[0], h[1]], [h[3], h[4]]]);
        s1[k] = x;
        s2[k] = y;
        t0[k] = -0.5 * theta;
        a0[k] = phi;
    }

    // (k, l) choice per node: t = t0 + kπ/2, α = a0 + lπ.
    let mut choice: Vec<Option<(u8, u8)>> = alloc::vec![None; n];
    let mut queue = VecDeque::new();
    for start in 0..n {
        if choice[start].is_some() || circle_mask.values()[start] {
            continue;
        }
        choice[start] = Some((0, 0));
        queue.push_back(start);
        while let Some(c) = queue.pop_front() {
            let (kc, lc) = choice[c].expect("assigned");
            let fc = frame_at(tf, nf, c, t0[c] + kc as f64 * FRAC_PI_2, a0[c] + lc as f64 * PI);
            let (i, j) = patch.ij(c);
            for (di, dj) in [(1isize, 0isize), (-1, 0), (0, 1), (0, -1)] {
                let Some((ni, nj)) = patch.wrap(i as isize + di, j as isize + dj) else { continue };
                let m = patch.idx(ni, nj);
                if choice[m].is_some() || circle_mask.values()[m] {
                    continue;
                }
                let mut best = (f64::INFINITY, (0, 0));
                for kk in 0..4u8 {
                    for ll in 0..2u8 {
                        let fm = frame_at(tf, nf, m, t0[m] + kk as f64 * FRAC_PI_2, a0[m] + ll as f64 * PI);
                        let d = frame_distance(&fc, &fm);
                        if d < best.0 {
                            best = (d, (kk, ll));
                        }
                    }
                }
                choice[m] = Some(best.1);
                queue.push_back(m);
            }
        }
    }

    let mut tangle = alloc::vec![0.0; n];
    let mut nangle = alloc::vec![0.0; n];
    let mut kappa1 = alloc::vec![0.0; n];
    let mut mu1 = alloc::vec![0.0; n];
    let mut gauge = alloc::vec![1i8; n];
    for k in 0..n {
        if let Some((kk, ll)) = choice[k] {
            tangle[k] = t0[k] + kk as f64 * FRAC_PI_2;
            nangle[k] = a0[k] + ll as f64 * PI;
            let sign = if (kk + ll) % 2 == 0 { 1.0 } else { -1.0 };
            kappa1[k] = sign * s1[k];
            mu1[k] = sign * s2[k];
            gauge[k] = if ll == 0 { 1 } else { -1 };
        }
    }
    let tangent_angle = Field::new(patch, tangle)?;
    let normal_angle = Field::new(patch, nangle)?;
    let tangent = tf.rotated(&tangent_angle);
    let normal = nf.rotated(&normal_angle);

    let valid = forms::stencil_validity(&circle_mask);
    // Direct forms: the base-gauge forms plus the differential of the
    // rotation angles (locally unwrapped modulo their ambiguity).
    let dt = forms::angle_gradient(&Field::new(patch, t0.clone())?, FRAC_PI_2);
    let da = forms::angle_gradient(&Field::new(patch, a0.clone())?, PI);
    let pts = analysis.connection.points.values();
    let frame = EvalFrame::from_tangent(&tangent);
    let omega12_e = Field::from_fn(patch, |i, j| {
        let k = patch.idx(i, j);
        let w = [pts[k].w12[0] + dt.0.at(i, j), pts[k].w12[1] + dt.1.at(i, j)];
        frame.on_e(i, j, w)
    });
    let omega34_e = Field::from_fn(patch, |i, j| {
        let k = patch.idx(i, j);
        let w = [pts[k].w34[0] + da.0.at(i, j), pts[k].w34[1] + da.1.at(i, j)];
        frame.on_e(i, j, w)
    });

    Ok(AdaptedFrameField {
        tangent,
        normal,
        kappa1: Field::new(patch, kappa1)?,
        mu1: Field::new(patch, mu1)?,
        omega12_e,
        omega34_e,
        circle_mask,
        gauge_sign: Field::new(patch, gauge)?,
        tangent_angle,
        normal_angle,
        sigma: (Field::new(patch, s1)?, Field::new(patch, s2)?),
        valid,
    })
}

impl AdaptedFrameField {
    /// Nodes away from the circle locus where derivative-based quantities
    /// are meaningful.
    pub fn valid(&self) -> &Field<bool> {
        &self.valid
    }

    /// `(H₃, H₄)` of the adapted frame recomputed from the given report's
    /// `H` by the frame rotation; equals `(κ₁, iμ₁)` off the mask.
    pub fn rotated_h(&self, h3: Complex64, h4: Complex64, i: usize, j: usize) -> (Complex64, Complex64) {
        let t = self.tangent_angle.at(i, j);
        let a = self.normal_angle.at(i, j);
        let phase = Complex64::from_polar(1.0, -2.0 * t);
        let (h3, h4) = (h3 * phase, h4 * phase);
        let (s, c) = a.sin_cos();
        (h3 * c + h4 * s, h4 * c - h3 * s)
    }
}
