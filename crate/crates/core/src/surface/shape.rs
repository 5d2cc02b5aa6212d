use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::{JetSource, Jets, NormalFrame, TangentFrame};
use crate::grid::{Field, ScalarField};
use crate::{Complex64, Error, Result};

/// Clamp threshold for negative radicands of `1 − K ± K_N`.
pub const RADICAND_TOL: f64 = 1e-8;

/// Pointwise second fundamental form and its frame-independent invariants.
#[derive(Debug, Clone)]
pub struct ShapeReport {
    /// `[h₁₁³, h₁₂³, h₂₂³, h₁₁⁴, h₁₂⁴, h₂₂⁴]` in the frame the report was built in.
    pub h: Field<[f64; 6]>,
    /// `H_α = h₁₁^α + i h₁₂^α`.
    pub h3: Field<Complex64>,
    pub h4: Field<Complex64>,
    /// `‖B‖² = 2(|H₃|² + |H₄|²)`.
    pub norm_b2: ScalarField,
    /// Gaussian curvature from the Gauss equation `K = 1 − ‖B‖²/2`.
    pub k: ScalarField,
    /// Normal curvature `K_N = i(H₃H̄₄ − H̄₃H₄)`.
    pub kn: ScalarField,
    /// Semi-axes of the curvature ellipse, `κ ≥ μ ≥ 0`.
    pub kappa: ScalarField,
    pub mu: ScalarField,
    /// `a± = (1 − K ± K_N)^{1/2}`.
    pub a_plus: ScalarField,
    pub a_minus: ScalarField,
    /// `max_α |h₁₁^α + h₂₂^α|`.
    pub minimality: ScalarField,
    pub jet_source: JetSource,
}

/// `K_N = 2 Im(H̄₃ H₄)`.
#[inline]
pub fn normal_curvature(h3: Complex64, h4: Complex64) -> f64 {
    2.0 * (h3.conj() * h4).im
}

/// Projects the second jets onto the normal frame and evaluates every
/// invariant.
pub fn second_fundamental_form(jets: &Jets, tf: &TangentFrame, nf: &NormalFrame) -> Result<ShapeReport> {
    let patch = *tf.e1.patch();
    let n = patch.len();
    let mut h = Vec::with_capacity(n);
    let (mut h3v, mut h4v) = (Vec::with_capacity(n), Vec::with_capacity(n));
    let (mut nb, mut kk, mut knv) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    let (mut kap, mut muv, mut ap, mut am, mut mres) =
        (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for k in 0..n {
        let (i, j) = patch.ij(k);
        let m = tf.vector_map(i, j);
        let (fuu, fuv, fvv) = (jets.fuu.values()[k], jets.fuv.values()[k], jets.fvv.values()[k]);
        let mut hk = [0.0; 6];
        for (slot, e) in [nf.e3.values()[k], nf.e4.values()[k]].iter().enumerate() {
            let (buu, buv, bvv) = (fuu.dot(e), fuv.dot(e), fvv.dot(e));
            let b = |x: [f64; 2], y: [f64; 2]| {
                x[0] * y[0] * buu + (x[0] * y[1] + x[1] * y[0]) * buv + x[1] * y[1] * bvv
            };
            hk[3 * slot] = b(m[0], m[0]);
            hk[3 * slot + 1] = b(m[0], m[1]);
            hk[3 * slot + 2] = b(m[1], m[1]);
        }
        let h3 = Complex64::new(hk[0], hk[1]);
        let h4 = Complex64::new(hk[3], hk[4]);
        let s = h3.norm_sqr() + h4.norm_sqr();
        let gauss_k = 1.0 - s;
        let kn = normal_curvature(h3, h4);
        for sign in [1.0, -1.0] {
            let rad = 1.0 - gauss_k + sign * kn;
            if rad < -RADICAND_TOL {
                return Err(Error::Inconsistent { index: (i, j), radicand: rad });
            }
        }
        // |H̄₃ ± iH̄₄|² = |H₃|² + |H₄|² ± K_N, without cancellation in the square root.
        let i_unit = Complex64::new(0.0, 1.0);
        let a_p = (h3.conj() + i_unit * h4.conj()).norm();
        let a_m = (h3.conj() - i_unit * h4.conj()).norm();
        h.push(hk);
        h3v.push(h3);
        h4v.push(h4);
        nb.push(2.0 * s);
        kk.push(gauss_k);
        knv.push(kn);
        kap.push(0.5 * (a_p + a_m));
        muv.push(0.5 * (a_p - a_m).abs());
        ap.push(a_p);
        am.push(a_m);
        mres.push((hk[0] + hk[2]).abs().max((hk[3] + hk[5]).abs()));
    }
    Ok(ShapeReport {
        h: Field::new(patch, h)?,
        h3: Field::new(patch, h3v)?,
        h4: Field::new(patch, h4v)?,
        norm_b2: Field::new(patch, nb)?,
        k: Field::new(patch, kk)?,
        kn: Field::new(patch, knv)?,
        kappa: Field::new(patch, kap)?,
        mu: Field::new(patch, muv)?,
        a_plus: Field::new(patch, ap)?,
        a_minus: Field::new(patch, am)?,
        minimality: Field::new(patch, mres)?,
        jet_source: jets.source,
    })
}

/// `max |h₁₁^α + h₂₂^α|` over nodes and both normal directions.
pub fn minimality_residual(report: &ShapeReport) -> f64 {
    report.minimality.max_abs()
}

/// Per-invariant maximum discrepancy between two reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeDiscrepancy {
    pub k: f64,
    pub kn: f64,
    pub kn_abs: f64,
    pub kappa: f64,
    pub mu: f64,
    pub a_plus: f64,
    pub a_minus: f64,
    pub norm_b2: f64,
}

impl GaugeDiscrepancy {
    /// Largest discrepancy over all orientation-independent invariants and `K_N`.
    pub fn max(&self) -> f64 {
        [self.k, self.kn, self.kappa, self.mu, self.a_plus, self.a_minus, self.norm_b2]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Recomputes the invariants in two normal gauges and compares them.
pub fn gauge_invariance_check(
    jets: &Jets,
    tf: &TangentFrame,
    gauge_a: &NormalFrame,
    gauge_b: &NormalFrame,
) -> Result<GaugeDiscrepancy> {
    let a = second_fundamental_form(jets, tf, gauge_a)?;
    let b = second_fundamental_form(jets, tf, gauge_b)?;
    Ok(GaugeDiscrepancy {
        k: a.k.max_abs_diff(&b.k),
        kn: a.kn.max_abs_diff(&b.kn),
        kn_abs: a.kn.map(f64::abs).max_abs_diff(&b.kn.map(f64::abs)),
        kappa: a.kappa.max_abs_diff(&b.kappa),
        mu: a.mu.max_abs_diff(&b.mu),
        a_plus: a.a_plus.max_abs_diff(&b.a_plus),
        a_minus: a.a_minus.max_abs_diff(&b.a_minus),
        norm_b2: a.norm_b2.max_abs_diff(&b.norm_b2),
    })
}
