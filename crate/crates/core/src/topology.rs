//! Global identities of closed minimal surfaces: Gauss–Bonnet, the normal
//! Euler number `χ(Nf) = (1/2π)∫K_N dA`, zero counts `N(a±)` of the
//! absolute-value-type functions `a± = (1 − K ± K_N)^{1/2}`, the relation
//! `2χ(M) ± χ(Nf) = −N(a∓)` between them, and the pointwise identities
//! `Δ log a± = 2K ∓ K_N` and (for surfaces in a great S³) `Δ log(1−K) = 4K`.
//!
//! `Δ` is the Laplace–Beltrami operator `div grad`, so `∫ Δ log a dA` over
//! the complement of the zeros of `a` equals `−2π N(a)`.

use alloc::vec::Vec;
use core::f64::consts::TAU;
#[allow(unused_imports)]
use num_traits::Float;

use crate::adapted::{find_zero_candidates, superminimality_test};
use crate::grid::{
    axis_weights, integrate, laplace_beltrami, laplace_beltrami_conservative, Field, MetricField, ScalarField,
};
use crate::linalg::pairwise_sum;
use crate::surface::{ShapeReport, SurfaceAnalysis};
use crate::{Error, Result};

/// A quantity that should be an integer, reported with its rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegerEstimate {
    pub value: f64,
    pub rounded: i64,
    pub gap: f64,
}

impl IntegerEstimate {
    pub fn new(value: f64) -> Self {
        let r = value.round();
        Self { value, rounded: r as i64, gap: (value - r).abs() }
    }
}

/// `(χ(M), χ(Nf))` by quadrature of `K dA` and `K_N dA`.
pub fn euler_numbers(report: &ShapeReport, metric: &MetricField) -> Result<(IntegerEstimate, IntegerEstimate)> {
    if !report.k.patch().is_closed() {
        return Err(Error::NotClosed);
    }
    let chi_m = integrate(&report.k, metric) / TAU;
    let chi_n = integrate(&report.kn, metric) / TAU;
    Ok((IntegerEstimate::new(chi_m), IntegerEstimate::new(chi_n)))
}

/// Excision radius `6 max(hu, hv)` in parameter units.
pub fn default_excision_radius(metric: &MetricField) -> f64 {
    6.0 * metric.patch().h_max()
}

/// Contribution of one excised zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscCount {
    /// Fractional node coordinates of the disc centre.
    pub centre: (f64, f64),
    /// `(1/2π)` × outward flux of `grad log a` through the disc boundary.
    pub flux: f64,
    /// `flux` minus the regular part of `Δ log a` inside the disc,
    /// estimated as the mean over the surrounding ring times the disc area.
    pub order: IntegerEstimate,
}

/// Zero count of an absolute-value-type function.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcisedCount {
    /// `−(1/2π) ∫ Δ log a dA` over the nodes outside all discs, corrected
    /// for the regular part inside the discs.
    pub total: IntegerEstimate,
    /// The same integral without the disc correction.
    pub uncorrected: f64,
    pub radius: f64,
    pub discs: Vec<DiscCount>,
}

/// Counts the zeros of `a` with multiplicity from
/// `∫_{M∖{a=0}} Δ log a dA = −2π N(a)`.
///
/// Each zero (fractional node coordinates) is excised by a disc of
/// parameter radius `radius`. The Laplacian is the conservative one, so the
/// integral over the remaining nodes is exactly minus the discrete flux out
/// of the discs; the regular part of `Δ log a` inside each disc is added
/// back from the ring of nodes just outside it.
pub fn zero_count_excised(a: &ScalarField, metric: &MetricField, zeros: &[(f64, f64)], radius: f64) -> Result<ExcisedCount> {
    let p = *a.patch();
    if !p.is_closed() {
        return Err(Error::NotClosed);
    }
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument("excision radius must be positive".into()));
    }
    // Parameter offset from a disc centre, periodic axes taken the short way.
    let offset = |x: f64, c: f64, n: usize, periodic: bool, h: f64| {
        let mut d = x - c;
        if periodic {
            let n = n as f64;
            d -= n * (d / n).round();
        }
        d * h
    };
    let dist = |i: usize, j: usize, c: (f64, f64)| {
        let du = offset(i as f64, c.0, p.nu(), p.periodic_u(), p.hu());
        let dv = offset(j as f64, c.1, p.nv(), p.periodic_v(), p.hv());
        (du * du + dv * dv).sqrt()
    };
    for (k, &x) in zeros.iter().enumerate() {
        for &y in &zeros[k + 1..] {
            let du = offset(x.0, y.0, p.nu(), p.periodic_u(), p.hu());
            let dv = offset(x.1, y.1, p.nv(), p.periodic_v(), p.hv());
            if (du * du + dv * dv).sqrt() < 2.0 * radius {
                return Err(Error::OverlappingDiscs);
            }
        }
    }
    let owner = Field::from_fn(p, |i, j| zeros.iter().position(|&c| dist(i, j, c) < radius));
    // Zeros must all be excised.
    let floor = a.max() * 1e-12;
    for k in 0..p.len() {
        let (i, j) = p.ij(k);
        if owner.at(i, j).is_none() && !(a.values()[k] > floor) {
            return Err(Error::UnexcisedZero { index: (i, j) });
        }
    }
    let log_a = a.map(|x| x.max(f64::MIN_POSITIVE).ln());
    let lap = laplace_beltrami_conservative(&log_a, metric)?;
    let (wu, wv) = (axis_weights(p.u()), axis_weights(p.v()));
    let cell = |i: usize, j: usize| metric.area.at(i, j) * wu[i] * wv[j];

    let mut outside = Vec::new();
    let mut flux = alloc::vec![Vec::new(); zeros.len()];
    let mut disc_area = alloc::vec![Vec::new(); zeros.len()];
    let mut ring = alloc::vec![(Vec::new(), Vec::new()); zeros.len()];
    for i in 0..p.nu() {
        for j in 0..p.nv() {
            let w = cell(i, j);
            match owner.at(i, j) {
                Some(d) => {
                    flux[d].push(lap.at(i, j) * w);
                    disc_area[d].push(w);
                }
                None => {
                    outside.push(lap.at(i, j) * w);
                    for (d, &c) in zeros.iter().enumerate() {
                        // One-cell-wide ring, far enough out that the
                        // stencil does not straddle the disc boundary.
                        let r = dist(i, j, c);
                        if r >= radius + 2.0 * p.h_max() && r < radius + 4.0 * p.h_max() {
                            ring[d].0.push(lap.at(i, j) * w);
                            ring[d].1.push(w);
                        }
                    }
                }
            }
        }
    }
    let uncorrected = -pairwise_sum(&outside) / TAU;
    let mut discs = Vec::with_capacity(zeros.len());
    for (d, &centre) in zeros.iter().enumerate() {
        let f = pairwise_sum(&flux[d]) / TAU;
        let ring_area = pairwise_sum(&ring[d].1);
        let regular = if ring_area > 0.0 { pairwise_sum(&ring[d].0) / ring_area } else { 0.0 };
        let order = f - regular * pairwise_sum(&disc_area[d]) / TAU;
        discs.push(DiscCount { centre, flux: f, order: IntegerEstimate::new(order) });
    }
    let correction: f64 = discs.iter().map(|d| d.order.value - d.flux).sum();
    Ok(ExcisedCount { total: IntegerEstimate::new(uncorrected + correction), uncorrected, radius, discs })
}

/// Zero count of one of `a±`.
#[derive(Debug, Clone, PartialEq)]
pub enum ZeroCount {
    /// `a` vanishes on the whole surface; `N(a)` is undefined.
    Identically,
    Isolated(ExcisedCount),
}

impl ZeroCount {
    pub fn value(&self) -> Option<f64> {
        match self {
            Self::Identically => None,
            Self::Isolated(c) => Some(c.total.value),
        }
    }
}

/// Relative level below which `a±` counts as zero.
pub const ZERO_LEVEL: f64 = 1e-3;
/// `a±` with maximum below this is treated as identically zero.
pub const IDENTICALLY_ZERO: f64 = 1e-6;

/// Local minima below this fraction of `max a` are zero candidates too; a
/// candidate that is not a zero contributes order ≈ 0.
pub const MINIMUM_LEVEL: f64 = 0.05;

/// Locates the zeros of `a` as clusters of nodes below `ZERO_LEVEL · max a`
/// or at local minima below `MINIMUM_LEVEL · max a`, and counts them.
pub fn count_zeros(a: &ScalarField, metric: &MetricField) -> Result<ZeroCount> {
    let top = a.max();
    if !(top > IDENTICALLY_ZERO) {
        return Ok(ZeroCount::Identically);
    }
    let p = *a.patch();
    let mask = Field::from_fn(p, |i, j| {
        let x = a.at(i, j);
        if x <= ZERO_LEVEL * top {
            return true;
        }
        if x > MINIMUM_LEVEL * top {
            return false;
        }
        let (ii, jj) = (i as isize, j as isize);
        (-1..=1).all(|di| (-1..=1).all(|dj| p.wrap(ii + di, jj + dj).is_none_or(|(a2, b2)| a.at(a2, b2) >= x)))
    });
    let zeros = find_zero_candidates(&mask);
    zero_count_excised(a, metric, &zeros, default_excision_radius(metric)).map(ZeroCount::Isolated)
}

/// Outcome of the `2χ(M) ± χ(Nf) = −N(a∓)` check.
#[derive(Debug, Clone, PartialEq)]
pub enum EulerZeroCheck {
    Skipped { reason: &'static str },
    /// `|2χ(M) + χ(Nf) + N(a₋)|` and `|2χ(M) − χ(Nf) + N(a₊)|`.
    Residuals { plus: f64, minus: f64 },
}

impl EulerZeroCheck {
    pub fn max_residual(&self) -> Option<f64> {
        match self {
            Self::Skipped { .. } => None,
            Self::Residuals { plus, minus } => Some(plus.max(*minus)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopologyReport {
    pub chi_m: IntegerEstimate,
    pub chi_nf: IntegerEstimate,
    pub n_a_plus: ZeroCount,
    pub n_a_minus: ZeroCount,
    pub superminimal: bool,
    pub euler_zero: EulerZeroCheck,
    /// `None` when `1 − K` vanishes everywhere.
    pub ricci_residual: Option<f64>,
}

/// Runs the whole suite on a closed surface.
pub fn topology_report(analysis: &SurfaceAnalysis) -> Result<TopologyReport> {
    let shape = &analysis.shape;
    let metric = &analysis.tangent.metric;
    let (chi_m, chi_nf) = euler_numbers(shape, metric)?;
    let n_a_plus = count_zeros(&shape.a_plus, metric)?;
    let n_a_minus = count_zeros(&shape.a_minus, metric)?;
    let superminimal = superminimality_test(shape).is_superminimal();
    let mut report = TopologyReport {
        chi_m,
        chi_nf,
        n_a_plus,
        n_a_minus,
        superminimal,
        euler_zero: EulerZeroCheck::Skipped { reason: "superminimal" },
        ricci_residual: ricci_condition_residual(shape, metric)?.residual,
    };
    report.euler_zero = euler_zero_check(&report);
    Ok(report)
}

/// Evaluates `2χ(M) ± χ(Nf) + N(a∓)` from unrounded values. Superminimal
/// surfaces are outside the relation's hypothesis and are skipped.
pub fn euler_zero_check(topo: &TopologyReport) -> EulerZeroCheck {
    if topo.superminimal {
        return EulerZeroCheck::Skipped { reason: "superminimal" };
    }
    let (Some(np), Some(nm)) = (topo.n_a_plus.value(), topo.n_a_minus.value()) else {
        return EulerZeroCheck::Skipped { reason: "a+ or a- vanishes identically" };
    };
    let (x, y) = (topo.chi_m.value, topo.chi_nf.value);
    EulerZeroCheck::Residuals { plus: (2.0 * x + y + nm).abs(), minus: (2.0 * x - y + np).abs() }
}

/// Pointwise residual of one identity, on the nodes where it is evaluated.
#[derive(Debug, Clone)]
pub struct IdentityResidual {
    pub residual: ScalarField,
    pub keep: Field<bool>,
    /// Maximum over kept nodes; zero when none are kept.
    pub max: f64,
    pub evaluated: usize,
}

/// Relative level above which a log-argument is trusted.
pub const LOG_FLOOR: f64 = 0.1;

fn log_identity(arg: &ScalarField, rhs: &ScalarField, metric: &MetricField) -> Result<IdentityResidual> {
    let top = arg.max();
    let keep = arg.map(|x| top > IDENTICALLY_ZERO && x > LOG_FLOOR * top);
    // Only isolated zeros are clamped; kept nodes see the true logarithm.
    let log = arg.map(|x| x.max(f64::MIN_POSITIVE).ln());
    let lap = laplace_beltrami(&log, metric)?;
    let residual = Field::from_fn(*arg.patch(), |i, j| if keep.at(i, j) { (lap.at(i, j) - rhs.at(i, j)).abs() } else { 0.0 });
    let evaluated = keep.values().iter().filter(|&&k| k).count();
    Ok(IdentityResidual { max: residual.max().max(0.0), residual, keep, evaluated })
}

/// `|Δ log a± − (2K ∓ K_N)|` for the `+` and `−` branches, where
/// `a± > 0.1 max a±`.
pub fn laplace_identity_residual(report: &ShapeReport, metric: &MetricField) -> Result<(IdentityResidual, IdentityResidual)> {
    let rhs = |s: f64| report.k.zip_map(&report.kn, move |k, kn| 2.0 * k - s * kn);
    Ok((log_identity(&report.a_plus, &rhs(1.0), metric)?, log_identity(&report.a_minus, &rhs(-1.0), metric)?))
}

#[derive(Debug, Clone)]
pub struct RicciCheck {
    /// `max |Δ log(1−K) − 4K|` where `1 − K > 0.1 max(1 − K)`; `None` when
    /// `1 − K` vanishes everywhere.
    pub residual: Option<f64>,
    /// `max − min` of `μ/κ` where `κ > 1e-6`: zero for surfaces in a great S³.
    pub ratio_spread: Option<f64>,
}

/// Ricci condition `Δ log(1−K) = 4K`, satisfied by minimal surfaces of a
/// totally geodesic S³.
pub fn ricci_condition_residual(report: &ShapeReport, metric: &MetricField) -> Result<RicciCheck> {
    let one_minus_k = report.k.map(|k| 1.0 - k);
    let rhs = report.k.map(|k| 4.0 * k);
    let r = log_identity(&one_minus_k, &rhs, metric)?;
    let ratios: Vec<f64> =
        report.kappa.values().iter().zip(report.mu.values()).filter(|(k, _)| **k > 1e-6).map(|(k, m)| m / k).collect();
    let ratio_spread = (!ratios.is_empty()).then(|| {
        let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        hi - lo
    });
    Ok(RicciCheck { residual: (r.evaluated > 0).then_some(r.max), ratio_spread })
}
