#[allow(unused_imports)]
use num_traits::Float;

use super::{AxisKind, Field, FieldValue};

/// Weights of the 4-point Lagrange interpolant at offset `t ∈ [0, 1]` from
/// node 0 of the stencil `{-1, 0, 1, 2}`.
fn lagrange4(t: f64) -> [f64; 4] {
    [
        -t * (t - 1.0) * (t - 2.0) / 6.0,
        (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
        -(t + 1.0) * t * (t - 2.0) / 2.0,
        (t + 1.0) * t * (t - 1.0) / 6.0,
    ]
}

fn stencil(pos: f64, n: usize, kind: AxisKind) -> Option<([isize; 4], [f64; 4])> {
    let base = pos.floor();
    let mut i0 = base as isize - 1;
    let mut t = pos - base;
    if kind != AxisKind::Periodic {
        let last = n as isize - 1;
        if pos < 0.0 || pos > last as f64 {
            return None;
        }
        // Keep the stencil on the grid by shifting it inwards.
        if i0 < 0 {
            t -= (-i0) as f64;
            i0 = 0;
        } else if i0 + 3 > last {
            let s = i0 + 3 - last;
            t += s as f64;
            i0 -= s;
        }
    }
    Some(([i0, i0 + 1, i0 + 2, i0 + 3], lagrange4(t)))
}

/// Tensor-product cubic interpolation at fractional node coordinates
/// `(x, y)` (node `(i, j)` sits at `(i, j)`). Periodic axes wrap; off an open
/// or capped axis returns `None`.
pub fn interpolate<T: FieldValue>(field: &Field<T>, x: f64, y: f64) -> Option<T> {
    let p = field.patch();
    let (iu, wu) = stencil(x, p.nu(), p.u().kind)?;
    let (iv, wv) = stencil(y, p.nv(), p.v().kind)?;
    let mut acc = T::zero();
    for a in 0..4 {
        let mut row = T::zero();
        for b in 0..4 {
            let (i, j) = p.wrap(iu[a], iv[b])?;
            row = row + field.at(i, j) * wv[b];
        }
        acc = acc + row * wu[a];
    }
    Some(acc)
}
