//! Finite differences along grid axes.
//!
//! Periodic axes use 6th-order central stencils with modular indexing. On
//! open and pole-capped axes the order drops towards the ends: 6th order
//! three nodes in, then 4th, then 2nd-order central, and 2nd-order one-sided
//! at the end nodes. Every stencil is exact on linear data.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::{AxisKind, Field, FieldValue};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    U,
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    First,
    Second,
}

/// Partial derivatives of a field; the second-order block is present when
/// requested.
#[derive(Debug, Clone)]
pub struct Partials<T> {
    pub du: Field<T>,
    pub dv: Field<T>,
    pub second: Option<SecondPartials<T>>,
}

#[derive(Debug, Clone)]
pub struct SecondPartials<T> {
    pub duu: Field<T>,
    pub duv: Field<T>,
    pub dvv: Field<T>,
}

pub fn partial_derivatives<T: FieldValue>(field: &Field<T>, order: Order) -> Result<Partials<T>> {
    field.check_finite()?;
    let du = derivative_unchecked(field, Direction::U, 1);
    let dv = derivative_unchecked(field, Direction::V, 1);
    let second = match order {
        Order::First => None,
        Order::Second => Some(SecondPartials {
            duu: derivative_unchecked(field, Direction::U, 2),
            duv: derivative_unchecked(&du, Direction::V, 1),
            dvv: derivative_unchecked(field, Direction::V, 2),
        }),
    };
    Ok(Partials { du, dv, second })
}

/// Derivative of order 1 or 2 along one axis.
pub fn derivative<T: FieldValue>(field: &Field<T>, dir: Direction, order: u8) -> Result<Field<T>> {
    field.check_finite()?;
    Ok(derivative_unchecked(field, dir, order))
}

pub(crate) fn derivative_unchecked<T: FieldValue>(field: &Field<T>, dir: Direction, order: u8) -> Field<T> {
    let patch = *field.patch();
    let (axis, n_other) = match dir {
        Direction::U => (*patch.u(), patch.nv()),
        Direction::V => (*patch.v(), patch.nu()),
    };
    let n = axis.n;
    let h = axis.spacing();
    let mut out = alloc::vec![T::zero(); patch.len()];
    let mut line: Vec<T> = alloc::vec![T::zero(); n];
    let vals = field.values();
    for o in 0..n_other {
        for (k, slot) in line.iter_mut().enumerate() {
            *slot = match dir {
                Direction::U => vals[patch.idx(k, o)],
                Direction::V => vals[patch.idx(o, k)],
            };
        }
        for k in 0..n {
            let d = if order == 1 {
                d1(&line, k, axis.kind, h)
            } else {
                d2(&line, k, axis.kind, h)
            };
            let idx = match dir {
                Direction::U => patch.idx(k, o),
                Direction::V => patch.idx(o, k),
            };
            out[idx] = d;
        }
    }
    Field::new(patch, out).expect("shape preserved")
}

/// Finite-difference weights for the `m`-th derivative at `x0` from samples
/// at the integer nodes `0..N` (Fornberg's recursion).
fn fornberg<const N: usize>(x0: f64, m: usize) -> [f64; N] {
    let mut c = [[[0.0f64; N]; N]; 3];
    c[0][0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = -x0;
    for i in 1..N {
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = i as f64 - x0;
        for j in 0..i {
            let c3 = (i - j) as f64;
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=m.min(i)).rev() {
                    c[k][i][i] = c1 * (k as f64 * c[k - 1][i - 1][i - 1] - c5 * c[k][i - 1][i - 1]) / c2;
                }
                c[0][i][i] = -c1 * c5 * c[0][i - 1][i - 1] / c2;
            }
            for k in (1..=m.min(i)).rev() {
                c[k][i][j] = (c4 * c[k][i - 1][j] - k as f64 * c[k - 1][i - 1][j]) / c3;
            }
            c[0][i][j] = c4 * c[0][i - 1][j] / c3;
        }
        c1 = c2;
    }
    c[m][N - 1]
}

/// One-sided window of `N` nodes containing `k`, as close to centred as the
/// line allows.
fn window<T: FieldValue, const N: usize>(line: &[T], k: isize, m: usize, h: f64) -> T {
    let n = line.len() as isize;
    let s = (k - N as isize / 2).clamp(0, n - N as isize);
    let w = fornberg::<N>((k - s) as f64, m);
    let mut acc = T::zero();
    for (o, wt) in w.iter().enumerate() {
        acc = acc + line[(s + o as isize) as usize] * *wt;
    }
    acc * (1.0 / h.powi(m as i32))
}

/// First derivative at node `k` of a sampled line. Sixth order everywhere;
/// the last three nodes of an open axis use one-sided 7-point stencils.
pub fn d1<T: FieldValue>(line: &[T], k: usize, kind: AxisKind, h: f64) -> T {
    let n = line.len() as isize;
    let k = k as isize;
    let at = |o: isize| -> T {
        let m = k + o;
        line[if kind == AxisKind::Periodic { m.rem_euclid(n) } else { m } as usize]
    };
    let depth = if kind == AxisKind::Periodic { 3 } else { k.min(n - 1 - k) };
    match depth {
        d if d >= 3 => {
            (at(3) - at(-3) + (at(-2) - at(2)) * 9.0 + (at(1) - at(-1)) * 45.0) * (1.0 / (60.0 * h))
        }
        _ if n >= 7 => window::<T, 7>(line, k, 1, h),
        1 | 2 => (at(1) - at(-1)) * (1.0 / (2.0 * h)),
        _ => {
            if k == 0 {
                (at(1) * 4.0 - at(0) * 3.0 - at(2)) * (1.0 / (2.0 * h))
            } else {
                (at(0) * 3.0 - at(-1) * 4.0 + at(-2)) * (1.0 / (2.0 * h))
            }
        }
    }
}

/// Second derivative at node `k` of a sampled line; one-sided 8-point
/// stencils near open ends.
pub fn d2<T: FieldValue>(line: &[T], k: usize, kind: AxisKind, h: f64) -> T {
    let n = line.len() as isize;
    let k = k as isize;
    let at = |o: isize| -> T {
        let m = k + o;
        line[if kind == AxisKind::Periodic { m.rem_euclid(n) } else { m } as usize]
    };
    let depth = if kind == AxisKind::Periodic { 3 } else { k.min(n - 1 - k) };
    let h2 = h * h;
    match depth {
        d if d >= 3 => {
            ((at(-3) + at(3)) * 2.0 - (at(-2) + at(2)) * 27.0 + (at(-1) + at(1)) * 270.0
                - at(0) * 490.0)
                * (1.0 / (180.0 * h2))
        }
        _ if n >= 8 => window::<T, 8>(line, k, 2, h),
        1 | 2 => (at(-1) + at(1) - at(0) * 2.0) * (1.0 / h2),
        _ => {
            let s: isize = if k == 0 { 1 } else { -1 };
            (at(0) * 2.0 - at(s) * 5.0 + at(2 * s) * 4.0 - at(3 * s)) * (1.0 / h2)
        }
    }
}
