//! The associated family `f_θ`: the moving-frame system `dF = F Ω_θ` of a
//! minimal surface with its second fundamental form rotated by `J_θ`, and
//! its integration on the unwrapped parameter domain.
//!
//! `F = (f | e₁ e₂ e₃ e₄)` has orthonormal columns. Writing `dF = F Ω`,
//! column `0` of `Ω` carries the coframe `(0, ω₁, ω₂, 0, 0)` and entry
//! `Ω[k][j]` is `ω_jk = ⟨de_j, e_k⟩`. The family keeps `ω₁`, `ω₂`, `ω₁₂`,
//! `ω₃₄` and replaces `H_α` by `e^{−2iθ} H_α`.

mod congruence;
mod integrate;

pub use congruence::{congruence_test, Congruence};
pub use integrate::{
    integrate_frame, transport, unwrap_field, unwrapped_patch, DeformedPatch, IntegrationOptions,
};

use crate::grid::diff::{derivative_unchecked, Direction};
use crate::grid::{Field, GridPatch, ScalarField};
use crate::linalg::{from_columns, Mat5};
use crate::surface::{ConnectionData, SurfaceAnalysis};
use crate::{Complex64, Error, Result};

/// `Ω_θ(∂u)` and `Ω_θ(∂v)`, evaluated on demand from connection data so a
/// θ-scan only pays for the nodes it visits.
#[derive(Debug, Clone, Copy)]
pub struct MaurerCartanField<'a> {
    pub theta: f64,
    conn: &'a ConnectionData,
    phase: Complex64,
}

/// The frame field `(f | e₁ e₂ e₃ e₄)` of an analysed surface.
pub fn frame_field(analysis: &SurfaceAnalysis, position: &Field<crate::linalg::Vec5>) -> Field<Mat5> {
    let (tf, nf) = (&analysis.tangent, &analysis.normal);
    Field::from_fn(*position.patch(), |i, j| {
        from_columns([&position.at(i, j), &tf.e1.at(i, j), &tf.e2.at(i, j), &nf.e3.at(i, j), &nf.e4.at(i, j)])
    })
}

fn fill(m: &mut Mat5, w1: f64, w2: f64, w12: f64, w34: f64, h3: Complex64, h4: Complex64) {
    // ω_jα = h^α_j1 ω₁ + h^α_j2 ω₂ with h₂₂ = −h₁₁.
    let entries = |h: Complex64| (h.re * w1 + h.im * w2, h.im * w1 - h.re * w2);
    let (w13, w23) = entries(h3);
    let (w14, w24) = entries(h4);
    // Ω[k][j] = ω_jk, Ω[j][0] = ω_j.
    let upper = [(0, 1, -w1), (0, 2, -w2), (1, 2, -w12), (1, 3, -w13), (2, 3, -w23), (1, 4, -w14), (2, 4, -w24), (3, 4, -w34)];
    *m = Mat5::zeros();
    for (r, c, v) in upper {
        // Entry (r, c) with r < c is Ω[r][c] = ω_cr = −ω_rc.
        m[(r, c)] = v;
        m[(c, r)] = -v;
    }
}

/// Assembles `Ω_θ` from connection data in any smooth gauge. Every matrix
/// is antisymmetric by construction.
pub fn assemble_maurer_cartan(conn: &ConnectionData, theta: f64) -> Result<MaurerCartanField<'_>> {
    let masked: usize = conn.mask.values().iter().filter(|&&m| m).count();
    if masked > 0 {
        let k = conn.mask.values().iter().position(|&m| m).expect("nonzero count");
        return Err(Error::MaskedPoints { count: masked, first: conn.patch().ij(k) });
    }
    Ok(MaurerCartanField { theta, conn, phase: Complex64::from_polar(1.0, -2.0 * theta) })
}

impl MaurerCartanField<'_> {
    pub fn patch(&self) -> &GridPatch {
        self.conn.patch()
    }

    /// `Ω_θ` on `∂u` or `∂v` at a stored node.
    pub fn omega(&self, dir: Direction, i: usize, j: usize) -> Mat5 {
        let p = self.conn.points.at(i, j);
        let a = match dir {
            Direction::U => 0,
            Direction::V => 1,
        };
        let mut m = Mat5::zeros();
        fill(&mut m, p.w1[a], p.w2[a], p.w12[a], p.w34[a], p.h3 * self.phase, p.h4 * self.phase);
        m
    }

    pub fn omega_field(&self, dir: Direction) -> Field<Mat5> {
        Field::from_fn(*self.patch(), |i, j| self.omega(dir, i, j))
    }

    /// `‖∂uΩv − ∂vΩu + [Ωu, Ωv]‖_F` at every node; zero for a flat system,
    /// i.e. when the Gauss, Codazzi and Ricci equations hold.
    pub fn flatness_residual(&self) -> ScalarField {
        let (wu, wv) = (self.omega_field(Direction::U), self.omega_field(Direction::V));
        let dv_u = derivative_unchecked(&wv, Direction::U, 1);
        let du_v = derivative_unchecked(&wu, Direction::V, 1);
        Field::from_fn(*self.patch(), |i, j| {
            let (a, b) = (wu.at(i, j), wv.at(i, j));
            (dv_u.at(i, j) - du_v.at(i, j) + a * b - b * a).norm()
        })
    }

    /// `max ‖Ω + Ωᵀ‖_F` over both directions and all nodes.
    pub fn antisymmetry_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for dir in [Direction::U, Direction::V] {
            for m in self.omega_field(dir).values() {
                worst = worst.max((m + m.transpose()).norm());
            }
        }
        worst
    }
}
