use alloc::vec::Vec;

use super::MaurerCartanField;
use crate::grid::diff::Direction;
use crate::grid::{Axis, Field, FieldValue, GridPatch, LoopPath};
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{orthogonality_defect, polar_orthonormalize, Mat5, Vec5};
use crate::{Error, Result};

/// Controls for [`integrate_frame`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationOptions {
    /// Largest accepted difference between the rows-first and
    /// columns-first frames at any node.
    pub path_tol: f64,
    /// RK4 steps per grid edge; `Ω` between nodes is cubic-interpolated.
    pub substeps: usize,
}

impl IntegrationOptions {
    /// RK4 truncation grows like `h⁴`; the default tolerance follows it with
    /// a floor of `1e-6`.
    pub fn for_patch(p: &GridPatch) -> Self {
        Self { path_tol: (200.0 * p.h_max().powi(4)).max(1e-6), substeps: 1 }
    }
}

/// A member of the associated family on the unwrapped parameter domain.
#[derive(Debug, Clone)]
pub struct DeformedPatch {
    pub theta: f64,
    /// Frames integrated rows first, on [`unwrapped_patch`].
    pub frame: Field<Mat5>,
    /// First frame column: the immersion `f_θ`.
    pub position: Field<Vec5>,
    /// `max ‖F_rows − F_cols‖_F` over all nodes.
    pub path_discrepancy: f64,
    /// `max ‖FᵀF − I‖_F` after reorthonormalization.
    pub orthogonality: f64,
    /// Maximum of the flatness residual of the input system.
    pub flatness: f64,
}

/// The patch with every periodic axis opened up and its seam duplicated:
/// `n` periodic nodes become `n + 1` open nodes on the same interval.
pub fn unwrapped_patch(p: &GridPatch) -> GridPatch {
    let open = |a: &Axis| if a.is_periodic() { Axis::open(a.n + 1, a.min, a.max) } else { *a };
    GridPatch::new(open(p.u()), open(p.v())).expect("opening an axis keeps it valid")
}

/// Samples a field on [`unwrapped_patch`] by periodic extension.
pub fn unwrap_field<T: FieldValue>(field: &Field<T>) -> Field<T> {
    let p = *field.patch();
    Field::from_fn(unwrapped_patch(&p), |i, j| {
        let (a, b) = p.wrap(i as isize, j as isize).expect("unwrapped nodes map back");
        field.at(a, b)
    })
}

/// Cubic Lagrange value of `g` at `lo + s` (`0 ≤ s ≤ 1`) on a line of `n`
/// nodes; stencils are shifted inward at open ends.
fn cubic(g: &impl Fn(isize) -> Mat5, lo: isize, s: f64, n: isize, periodic: bool) -> Mat5 {
    if s == 0.0 {
        return g(lo);
    }
    if s == 1.0 {
        return g(lo + 1);
    }
    let b = if periodic { lo - 1 } else { (lo - 1).clamp(0, n - 4) };
    let x = (lo - b) as f64 + s;
    let mut acc = Mat5::zeros();
    for k in 0..4 {
        let mut w = 1.0;
        for m in 0..4 {
            if m != k {
                w *= (x - m as f64) / (k as f64 - m as f64);
            }
        }
        acc += g(b + k as isize) * w;
    }
    acc
}

fn rk4(f: &Mat5, w0: &Mat5, wm: &Mat5, w1: &Mat5, h: f64) -> Mat5 {
    let k1 = f * w0;
    let k2 = (f + k1 * (0.5 * h)) * wm;
    let k3 = (f + k2 * (0.5 * h)) * wm;
    let k4 = (f + k3 * h) * w1;
    polar_orthonormalize(&(f + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)))
}

/// One grid step from unwrapped node `(i, j)` to its neighbour along `line`
/// in direction `sign`, as `substeps` RK4 steps.
fn step(mc: &MaurerCartanField<'_>, f: &Mat5, i: isize, j: isize, line: Direction, sign: isize, substeps: usize) -> Mat5 {
    let p = *mc.patch();
    let at = |a: isize, b: isize| {
        let (x, y) = p.wrap(a, b).expect("step stays on the patch");
        mc.omega(line, x, y)
    };
    let (start, n, periodic, h) = match line {
        Direction::U => (i, p.nu() as isize, p.periodic_u(), p.hu()),
        Direction::V => (j, p.nv() as isize, p.periodic_v(), p.hv()),
    };
    let g = |k: isize| match line {
        Direction::U => at(k, j),
        Direction::V => at(i, k),
    };
    let lo = if sign > 0 { start } else { start - 1 };
    let s0 = if sign > 0 { 0.0 } else { 1.0 };
    let ds = sign as f64 / substeps as f64;
    let mut out = *f;
    for q in 0..substeps {
        let a = s0 + ds * q as f64;
        let b = if q + 1 == substeps { 1.0 - s0 } else { s0 + ds * (q + 1) as f64 };
        let w0 = cubic(&g, lo, a, n, periodic);
        let wm = cubic(&g, lo, 0.5 * (a + b), n, periodic);
        let w1 = cubic(&g, lo, b, n, periodic);
        out = rk4(&out, &w0, &wm, &w1, ds * h);
    }
    out
}

fn sweep(mc: &MaurerCartanField<'_>, seed: &Mat5, rows_first: bool, k: usize) -> Vec<Mat5> {
    let up = unwrapped_patch(mc.patch());
    let (nu, nv) = (up.nu(), up.nv());
    let mut out = alloc::vec![Mat5::zeros(); nu * nv];
    let idx = |i: usize, j: usize| up.idx(i, j);
    out[idx(0, 0)] = *seed;
    if rows_first {
        for i in 1..nu {
            out[idx(i, 0)] = step(mc, &out[idx(i - 1, 0)], i as isize - 1, 0, Direction::U, 1, k);
        }
        for i in 0..nu {
            for j in 1..nv {
                out[idx(i, j)] = step(mc, &out[idx(i, j - 1)], i as isize, j as isize - 1, Direction::V, 1, k);
            }
        }
    } else {
        for j in 1..nv {
            out[idx(0, j)] = step(mc, &out[idx(0, j - 1)], 0, j as isize - 1, Direction::V, 1, k);
        }
        for j in 0..nv {
            for i in 1..nu {
                out[idx(i, j)] = step(mc, &out[idx(i - 1, j)], i as isize - 1, j as isize, Direction::U, 1, k);
            }
        }
    }
    out
}

/// Integrates `dF = F Ω_θ` over the unwrapped domain from `seed` at the
/// origin, by RK4 steps along grid lines with polar reorthonormalization.
/// Both integration orders are run; their disagreement must stay below
/// `opts.path_tol`.
pub fn integrate_frame(mc: &MaurerCartanField<'_>, seed: &Mat5, opts: IntegrationOptions) -> Result<DeformedPatch> {
    if orthogonality_defect(seed) > 1e-8 {
        return Err(Error::InvalidArgument("seed frame is not orthogonal".into()));
    }
    let up = unwrapped_patch(mc.patch());
    let seed = polar_orthonormalize(seed);
    #[cfg(feature = "parallel")]
    let (a, b) = rayon::join(|| sweep(mc, &seed, true, opts.substeps.max(1)), || sweep(mc, &seed, false, opts.substeps.max(1)));
    #[cfg(not(feature = "parallel"))]
    let (a, b) = (sweep(mc, &seed, true, opts.substeps.max(1)), sweep(mc, &seed, false, opts.substeps.max(1)));
    let path_discrepancy = a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    let flatness = mc.flatness_residual().max();
    if !(path_discrepancy <= opts.path_tol) {
        return Err(Error::IntegrabilityBroken { discrepancy: path_discrepancy, tolerance: opts.path_tol });
    }
    let orthogonality = a.iter().map(orthogonality_defect).fold(0.0, f64::max);
    let frame = Field::new(up, a)?;
    let position = frame.map(|m| m.column(0).into_owned());
    Ok(DeformedPatch { theta: mc.theta, frame, position, path_discrepancy, flatness, orthogonality })
}

/// Transports `seed` along `path` with `substeps` RK4 steps per edge;
/// returns the frame at the last node.
pub fn transport(mc: &MaurerCartanField<'_>, path: &LoopPath, seed: &Mat5, substeps: usize) -> Result<Mat5> {
    let p = *mc.patch();
    let mut f = polar_orthonormalize(seed);
    for w in path.nodes().windows(2) {
        let ((i0, j0), (i1, j1)) = (w[0], w[1]);
        let (line, sign) = if i1 != i0 { (Direction::U, i1 - i0) } else { (Direction::V, j1 - j0) };
        // Open axes cannot be left; the path constructor already checked.
        if p.wrap(i1, j1).is_none() {
            return Err(Error::InvalidLoop("path leaves the patch".into()));
        }
        f = step(mc, &f, i0, j0, line, sign, substeps.max(1));
    }
    Ok(f)
}
