//! Monodromy of the associated family around the periods of the parameter
//! domain, the distance profile `d(θ) = max_i ‖M_i(θ) − I‖_F` and its
//! closing set.
//!
//! A loop integrated from frame `F₀` ends at `M F₀`, where `M` is the
//! ambient isometry relating the two lifts. Changing the base frame
//! conjugates `M` by an orthogonal matrix, which leaves `d` unchanged.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
#[allow(unused_imports)]
use num_traits::Float;

use crate::adapted::superminimality_test;
use crate::family::{
    assemble_maurer_cartan, congruence_test, frame_field, integrate_frame, transport, unwrap_field,
    IntegrationOptions, MaurerCartanField,
};
use crate::grid::{Field, LoopPath};
use crate::linalg::{identity_distance, Mat5};
use crate::surface::{Immersion, SurfaceAnalysis};
use crate::{Error, Result};

/// Fewest θ samples a scan accepts.
pub const MIN_THETA_SAMPLES: usize = 64;
/// Fraction of closed samples above which the closing set is a circle.
pub const CIRCLE_FRACTION: f64 = 0.9;

/// RK4 steps per grid edge on monodromy loops.
pub const LOOP_SUBSTEPS: usize = 2;

/// `M = F_end F_startᵀ` for `path` started at `seed`.
pub fn generator_monodromy(mc: &MaurerCartanField<'_>, path: &LoopPath, seed: &Mat5) -> Result<Mat5> {
    let end = transport(mc, path, seed, LOOP_SUBSTEPS)?;
    Ok(end * seed.transpose())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosingVerdict {
    /// Finitely many θ close; see the root list.
    Finite,
    /// Every θ closes.
    Circle,
}

impl ClosingVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Finite => "FINITE",
            Self::Circle => "CIRCLE",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub n_theta: usize,
    /// `None`: `max(1e-6, 10 · max flatness residual)`.
    pub tol_close: Option<f64>,
    /// Loops start here, with the original frame as seed.
    pub basepoint: (isize, isize),
    /// Inputs whose `θ = 0` flatness residual exceeds this are rejected;
    /// `None`: `5 h²`.
    pub flatness_tol: Option<f64>,
    /// Superminimal inputs: largest RMS congruence residual that counts
    /// as closed.
    pub congruence_tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { n_theta: 360, tol_close: None, basepoint: (0, 0), flatness_tol: None, congruence_tol: 1e-4 }
    }
}

/// `d(θ)` and the generator images on a uniform θ grid.
#[derive(Debug, Clone)]
pub struct MonodromyProfile {
    pub thetas: Vec<f64>,
    /// Images of the periodic generators (`u` first), per θ.
    pub generators: Vec<Vec<Mat5>>,
    pub d: Vec<f64>,
    /// `‖M₁M₂ − M₂M₁‖_F`; zero when there are fewer than two generators.
    pub commutator_defect: Vec<f64>,
    /// RMS congruence residual of `f_θ` against `f` (superminimal inputs only).
    pub congruence: Option<Vec<f64>>,
    /// Refined zeros of `d` in `[0, 2π)`.
    pub roots: Vec<f64>,
    /// `d` at each refined root.
    pub root_d: Vec<f64>,
    /// Whether each sample counts as closed.
    pub closed: Vec<bool>,
    pub tol_close: f64,
    pub flatness: f64,
    pub superminimal: bool,
    pub verdict: ClosingVerdict,
}

fn loops(analysis: &SurfaceAnalysis, base: (isize, isize)) -> Result<Vec<LoopPath>> {
    let p = analysis.connection.patch();
    let mut out = Vec::new();
    if p.periodic_u() {
        out.push(LoopPath::generator_u(p, base)?);
    }
    if p.periodic_v() {
        out.push(LoopPath::generator_v(p, base)?);
    }
    Ok(out)
}

fn images(analysis: &SurfaceAnalysis, paths: &[LoopPath], seed: &Mat5, theta: f64) -> Result<Vec<Mat5>> {
    let mc = assemble_maurer_cartan(&analysis.connection, theta)?;
    paths.iter().map(|path| generator_monodromy(&mc, path, seed)).collect()
}

fn distance(ms: &[Mat5]) -> f64 {
    ms.iter().map(identity_distance).fold(0.0, f64::max)
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, width: f64) -> (f64, f64) {
    let g = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > width {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

fn wrap_tau(x: f64) -> f64 {
    x - TAU * (x / TAU).floor()
}

/// Samples `d(θ)` at `n_theta` uniform angles, refines every local minimum
/// below `10 tol_close` to width `1e-8`, and classifies the closing set.
///
/// Superminimal inputs are additionally checked by integrating `f_θ` over
/// the whole domain and fitting it to `f`; they close at `θ` when either
/// test passes.
pub fn scan_profile(imm: &Immersion, analysis: &SurfaceAnalysis, opts: ScanOptions) -> Result<MonodromyProfile> {
    if opts.n_theta < MIN_THETA_SAMPLES {
        return Err(Error::ScanTooCoarse { min: MIN_THETA_SAMPLES, got: opts.n_theta });
    }
    let patch = *analysis.connection.patch();
    let flatness = assemble_maurer_cartan(&analysis.connection, 0.0)?.flatness_residual().max();
    let flat_tol = opts.flatness_tol.unwrap_or(5.0 * patch.h_max().powi(2));
    if !(flatness <= flat_tol) {
        return Err(Error::IntegrabilityBroken { discrepancy: flatness, tolerance: flat_tol });
    }
    let tol_close = opts.tol_close.unwrap_or((10.0 * flatness).max(1e-6));
    let superminimal = superminimality_test(&analysis.shape).is_superminimal();
    let paths = loops(analysis, opts.basepoint)?;
    if paths.is_empty() && !superminimal {
        return Err(Error::InvalidArgument("the patch has no periodic direction to scan".into()));
    }
    let frames = frame_field(analysis, imm.position());
    let (bi, bj) = patch.wrap(opts.basepoint.0, opts.basepoint.1).ok_or_else(|| Error::InvalidArgument("basepoint lies off the patch".into()))?;
    let seed = frames.at(bi, bj);
    let thetas: Vec<f64> = (0..opts.n_theta).map(|k| TAU * k as f64 / opts.n_theta as f64).collect();

    let eval = |theta: f64| -> Result<(Vec<Mat5>, Option<f64>)> {
        let ms = images(analysis, &paths, &seed, theta)?;
        let cong = if superminimal { Some(congruence_residual(imm, analysis, &frames, theta)?) } else { None };
        Ok((ms, cong))
    };
    #[cfg(feature = "parallel")]
    let samples: Vec<Result<(Vec<Mat5>, Option<f64>)>> = {
        use rayon::prelude::*;
        thetas.par_iter().map(|&t| eval(t)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let samples: Vec<Result<(Vec<Mat5>, Option<f64>)>> = thetas.iter().map(|&t| eval(t)).collect();

    let mut generators = Vec::with_capacity(thetas.len());
    let mut congruence = superminimal.then(Vec::new);
    for s in samples {
        let (ms, c) = s?;
        generators.push(ms);
        if let (Some(v), Some(c)) = (congruence.as_mut(), c) {
            v.push(c);
        }
    }
    let d: Vec<f64> = generators.iter().map(|ms| distance(ms)).collect();
    let commutator_defect: Vec<f64> = generators
        .iter()
        .map(|ms| if ms.len() >= 2 { (ms[0] * ms[1] - ms[1] * ms[0]).norm() } else { 0.0 })
        .collect();

    let closed = |k: usize| {
        let by_loops = !paths.is_empty() && d[k] < tol_close;
        let by_fit = congruence.as_ref().is_some_and(|c| c[k] < opts.congruence_tol);
        by_loops || by_fit
    };
    let n = thetas.len();
    let closed: Vec<bool> = (0..n).map(closed).collect();
    let closed_count = closed.iter().filter(|&&c| c).count();
    let verdict = if closed_count as f64 >= CIRCLE_FRACTION * n as f64 { ClosingVerdict::Circle } else { ClosingVerdict::Finite };

    let (mut roots, mut root_d) = (Vec::new(), Vec::new());
    if verdict == ClosingVerdict::Finite && !paths.is_empty() {
        let step = TAU / n as f64;
        let dist_at = |t: f64| images(analysis, &paths, &seed, t).map(|ms| distance(&ms)).unwrap_or(f64::INFINITY);
        for k in 0..n {
            let (l, r) = (d[(k + n - 1) % n], d[(k + 1) % n]);
            if d[k] <= l && d[k] < r && d[k] < 10.0 * tol_close {
                let (t, v) = golden_min(dist_at, thetas[k] - step, thetas[k] + step, 1e-8);
                if v < tol_close {
                    let t = wrap_tau(t);
                    // Roots straddling 2π ≡ 0 are reported near 0.
                    let t = if TAU - t < 1e-6 { 0.0 } else { t };
                    if !roots.iter().any(|&x: &f64| (x - t).abs() < 1e-6 || (TAU - (x - t).abs()) < 1e-6) {
                        roots.push(t);
                        root_d.push(v);
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..roots.len()).collect();
        order.sort_by(|&a, &b| roots[a].total_cmp(&roots[b]));
        roots = order.iter().map(|&i| roots[i]).collect();
        root_d = order.iter().map(|&i| root_d[i]).collect();
    }

    Ok(MonodromyProfile {
        thetas,
        generators,
        d,
        commutator_defect,
        congruence,
        roots,
        root_d,
        closed,
        tol_close,
        flatness,
        superminimal,
        verdict,
    })
}

/// RMS Procrustes residual of `f_θ` integrated over the unwrapped domain
/// against the original immersion.
fn congruence_residual(imm: &Immersion, analysis: &SurfaceAnalysis, frames: &Field<Mat5>, theta: f64) -> Result<f64> {
    let mc = assemble_maurer_cartan(&analysis.connection, theta)?;
    // Only the fit matters here; path dependence is checked elsewhere.
    let opts = IntegrationOptions { path_tol: f64::INFINITY, substeps: 1 };
    let def = integrate_frame(&mc, &frames.at(0, 0), opts)?;
    Ok(congruence_test(&unwrap_field(imm.position()), &def.position)?.residual)
}

/// Summary of a profile for reports.
#[derive(Debug, Clone, PartialEq)]
pub struct DichotomyReport {
    pub verdict: ClosingVerdict,
    pub roots: Vec<f64>,
    pub n_theta: usize,
    pub tol_close: f64,
    pub closed_fraction: f64,
    pub max_commutator_defect: f64,
    pub d_min: f64,
    pub d_max: f64,
    /// `‖A M Aᵀ − I‖_F = ‖M − I‖_F` for orthogonal `A`, so `d` does not
    /// depend on the base point or base frame.
    pub basepoint_invariant: bool,
}

pub fn dichotomy_report(profile: &MonodromyProfile) -> DichotomyReport {
    let n = profile.thetas.len();
    let closed = profile.closed.iter().filter(|&&c| c).count();
    DichotomyReport {
        verdict: profile.verdict,
        roots: profile.roots.clone(),
        n_theta: n,
        tol_close: profile.tol_close,
        closed_fraction: closed as f64 / n as f64,
        max_commutator_defect: profile.commutator_defect.iter().copied().fold(0.0, f64::max),
        d_min: profile.d.iter().copied().fold(f64::INFINITY, f64::min),
        d_max: profile.d.iter().copied().fold(0.0, f64::max),
        basepoint_invariant: true,
    }
}

/// `θ` reduced to `(−π, π]`.
pub fn centred_angle(theta: f64) -> f64 {
    let t = wrap_tau(theta);
    if t > PI {
        t - TAU
    } else {
        t
    }
}
