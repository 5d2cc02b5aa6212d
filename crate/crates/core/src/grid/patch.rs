use alloc::format;

use crate::{Error, Result};

/// How an axis closes up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisKind {
    /// Index `n` is identified with `0`; no seam row is stored.
    Periodic,
    /// Endpoints are sampled: nodes at `min + i h` with `h = (max - min)/(n - 1)`.
    Open,
    /// Both ends are coordinate poles of a closed surface (latitude of a
    /// sphere chart). Nodes sit at cell centres, `min + (i + 1/2) h`, so no
    /// node lands on a pole.
    Capped,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub n: usize,
    pub min: f64,
    pub max: f64,
    pub kind: AxisKind,
}

impl Axis {
    pub fn periodic(n: usize, min: f64, max: f64) -> Self {
        Self { n, min, max, kind: AxisKind::Periodic }
    }

    pub fn open(n: usize, min: f64, max: f64) -> Self {
        Self { n, min, max, kind: AxisKind::Open }
    }

    pub fn capped(n: usize, min: f64, max: f64) -> Self {
        Self { n, min, max, kind: AxisKind::Capped }
    }

    pub fn is_periodic(&self) -> bool {
        self.kind == AxisKind::Periodic
    }

    pub fn spacing(&self) -> f64 {
        match self.kind {
            AxisKind::Periodic | AxisKind::Capped => (self.max - self.min) / self.n as f64,
            AxisKind::Open => (self.max - self.min) / (self.n - 1) as f64,
        }
    }

    /// Parameter value of node `i`; accepts indices outside `0..n` (unwrapped cover).
    pub fn coord(&self, i: isize) -> f64 {
        let h = self.spacing();
        match self.kind {
            AxisKind::Capped => self.min + (i as f64 + 0.5) * h,
            _ => self.min + i as f64 * h,
        }
    }

    pub fn period(&self) -> f64 {
        self.max - self.min
    }

    /// Storage index of a possibly out-of-range node, or `None` off an open axis.
    pub fn wrap(&self, i: isize) -> Option<usize> {
        let n = self.n as isize;
        if self.is_periodic() {
            Some(i.rem_euclid(n) as usize)
        } else if (0..n).contains(&i) {
            Some(i as usize)
        } else {
            None
        }
    }

    fn validate(&self, name: &str) -> Result<()> {
        if self.n < 8 {
            return Err(Error::InvalidPatch(format!("{name}: need at least 8 points, got {}", self.n)));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.max > self.min) {
            return Err(Error::InvalidPatch(format!("{name}: empty or non-finite range")));
        }
        Ok(())
    }
}

/// Rectangular parameter domain. Storage is row-major with `v` fastest:
/// node `(i, j)` lives at `i * nv + j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPatch {
    u: Axis,
    v: Axis,
}

impl GridPatch {
    pub fn new(u: Axis, v: Axis) -> Result<Self> {
        u.validate("u")?;
        v.validate("v")?;
        Ok(Self { u, v })
    }

    /// Doubly periodic patch on `[0, lu) x [0, lv)`.
    pub fn torus(nu: usize, nv: usize, lu: f64, lv: f64) -> Result<Self> {
        Self::new(Axis::periodic(nu, 0.0, lu), Axis::periodic(nv, 0.0, lv))
    }

    pub fn u(&self) -> &Axis {
        &self.u
    }

    pub fn v(&self) -> &Axis {
        &self.v
    }

    pub fn nu(&self) -> usize {
        self.u.n
    }

    pub fn nv(&self) -> usize {
        self.v.n
    }

    pub fn len(&self) -> usize {
        self.u.n * self.v.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn hu(&self) -> f64 {
        self.u.spacing()
    }

    pub fn hv(&self) -> f64 {
        self.v.spacing()
    }

    pub fn h_max(&self) -> f64 {
        self.hu().max(self.hv())
    }

    pub fn periodic_u(&self) -> bool {
        self.u.is_periodic()
    }

    pub fn periodic_v(&self) -> bool {
        self.v.is_periodic()
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.v.n + j
    }

    #[inline]
    pub fn ij(&self, k: usize) -> (usize, usize) {
        (k / self.v.n, k % self.v.n)
    }

    pub fn coords(&self, i: usize, j: usize) -> (f64, f64) {
        (self.u.coord(i as isize), self.v.coord(j as isize))
    }

    /// Storage index of an unwrapped node, if it exists.
    pub fn wrap(&self, i: isize, j: isize) -> Option<(usize, usize)> {
        Some((self.u.wrap(i)?, self.v.wrap(j)?))
    }

    /// A closed surface is covered: a torus, or a periodic axis times a
    /// pole-capped one (sphere chart).
    pub fn is_closed(&self) -> bool {
        use AxisKind::*;
        matches!(
            (self.u.kind, self.v.kind),
            (Periodic, Periodic) | (Periodic, Capped) | (Capped, Periodic)
        )
    }

    /// Number of independent deck generators the chart exposes.
    pub fn generator_count(&self) -> usize {
        self.periodic_u() as usize + self.periodic_v() as usize
    }
}
