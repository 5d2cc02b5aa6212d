//! The verification suite: every identity the pipeline is supposed to
//! satisfy, each judged against a stated tolerance.

use std::f64::consts::{FRAC_PI_4, PI};

use minsurf_core::adapted::{build_adapted_frame, connection_forms, superminimality_test};
use minsurf_core::family::{assemble_maurer_cartan, frame_field, integrate_frame, unwrap_field, IntegrationOptions};
use minsurf_core::grid::{Field, LoopPath, ScalarField};
use minsurf_core::linalg::{identity_distance, symmetric_eigen, Mat5};
use minsurf_core::monodromy::generator_monodromy;
use minsurf_core::surface::{analyze, minimality_residual, Immersion, SurfaceAnalysis};
use minsurf_core::topology::{laplace_identity_residual, ricci_condition_residual, topology_report, EulerZeroCheck};
use minsurf_core::{Error, UNIT_NORM_TOL};
use serde::Serialize;

use crate::commands::{ground_truth_checks, hopf_abs, minimality_tolerance};
use crate::config::{load, RunConfig};
use crate::error::Failure;
use crate::report::{Check, Header, Quantity};
use crate::tags;

/// Angles at which the Maurer–Cartan system is checked for flatness.
pub const FLATNESS_THETAS: [f64; 5] = [0.0, 0.3, FRAC_PI_4, 1.2, PI];
/// Members whose metric and curvatures are compared with the original.
pub const ISOMETRY_THETAS: [f64; 3] = [0.3, FRAC_PI_4, 1.2];

pub const RECONSTRUCTION_TOL: f64 = 1e-6;
pub const ISOMETRY_TOL: f64 = 1e-4;
pub const EULER_GAP_TOL: f64 = 0.02;
pub const EULER_ZERO_TOL: f64 = 0.05;
pub const ELLIPSE_TOL: f64 = 1e-10;
pub const HOPF_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    #[serde(flatten)]
    pub header: Header,
    pub h_max: f64,
    pub passed: bool,
    pub failed: Vec<&'static str>,
    pub checks: Vec<Check>,
    /// The same quantities on the source before perturbation.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub baseline: Vec<Quantity>,
}

impl VerifyReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Largest Maurer–Cartan residual over [`FLATNESS_THETAS`].
pub fn flatness(a: &SurfaceAnalysis) -> Result<f64, Error> {
    let mut worst = 0.0f64;
    for theta in FLATNESS_THETAS {
        worst = worst.max(assemble_maurer_cartan(&a.connection, theta)?.flatness_residual().max());
    }
    Ok(worst)
}

fn masked_max_diff(a: &ScalarField, b: &ScalarField, mask: &Field<bool>) -> f64 {
    let mut worst = 0.0f64;
    for k in 0..a.values().len() {
        if !mask.values()[k] {
            worst = worst.max((a.values()[k] - b.values()[k]).abs());
        }
    }
    worst
}

/// Whether all samples lie in a hyperplane through the origin, i.e. in a
/// great 3-sphere.
fn in_great_three_sphere(imm: &Immersion) -> bool {
    let mut c = Mat5::zeros();
    for p in imm.position().values() {
        c += p * p.transpose();
    }
    let (eig, _) = symmetric_eigen(&(c / imm.patch().len() as f64));
    eig[4].abs() < 1e-12
}

fn reconstruction_and_isometry(imm: &Immersion, a: &SurfaceAnalysis) -> Vec<Check> {
    let frames = frame_field(a, imm.position());
    let seed = frames.at(0, 0);
    let opts = IntegrationOptions::for_patch(imm.patch());
    let deform = |theta: f64| -> Result<Field<minsurf_core::linalg::Vec5>, Error> {
        let mc = assemble_maurer_cartan(&a.connection, theta)?;
        Ok(integrate_frame(&mc, &seed, opts)?.position)
    };
    let mut out = Vec::new();
    out.push(match deform(0.0) {
        Ok(p) => {
            let orig = unwrap_field(imm.position());
            let sum: f64 = p.values().iter().zip(orig.values()).map(|(x, y)| (x - y).norm_squared()).sum();
            let rms = (sum / p.values().len() as f64).sqrt();
            Check::measure("reconstruction", tags::RECONSTRUCTION, rms, RECONSTRUCTION_TOL)
        }
        Err(e) => Check::errored("reconstruction", tags::RECONSTRUCTION, RECONSTRUCTION_TOL, e),
    });

    let m = &a.tangent.metric;
    let (e, f, g) = (unwrap_field(&m.e), unwrap_field(&m.f), unwrap_field(&m.g));
    let (k, kn) = (unwrap_field(&a.shape.k), unwrap_field(&a.shape.kn));
    let mut metric_err = 0.0f64;
    let mut curv_err = 0.0f64;
    let mut failure = None;
    for theta in ISOMETRY_THETAS {
        let member = deform(theta).and_then(|p| {
            let p = p.map(|x| x / x.norm());
            analyze(&Immersion::new(p, None)?)
        });
        match member {
            Ok(out) => {
                let mm = &out.tangent.metric;
                metric_err = metric_err.max(mm.e.max_abs_diff(&e)).max(mm.f.max_abs_diff(&f)).max(mm.g.max_abs_diff(&g));
                curv_err = curv_err.max(out.shape.k.max_abs_diff(&k)).max(out.shape.kn.max_abs_diff(&kn));
            }
            Err(err) => {
                failure = Some(format!("theta {theta}: {err}"));
                break;
            }
        }
    }
    match failure {
        None => {
            out.push(Check::measure("family_metric", tags::ISOMETRY, metric_err, ISOMETRY_TOL));
            out.push(Check::measure("family_curvatures", tags::ISOMETRY, curv_err, ISOMETRY_TOL));
        }
        Some(msg) => {
            out.push(Check::errored("family_metric", tags::ISOMETRY, ISOMETRY_TOL, &msg));
            out.push(Check::errored("family_curvatures", tags::ISOMETRY, ISOMETRY_TOL, &msg));
        }
    }
    out
}

fn topology_checks(a: &SurfaceAnalysis, expected_chi: Option<i64>) -> Vec<Check> {
    let names = [
        ("gauss_bonnet", tags::GAUSS_BONNET, EULER_GAP_TOL),
        ("normal_euler_number", tags::NORMAL_EULER, EULER_GAP_TOL),
        ("euler_zero_relation", tags::EULER_ZERO, EULER_ZERO_TOL),
    ];
    if !a.connection.patch().is_closed() {
        return names.iter().map(|&(n, t, tol)| Check::skipped(n, t, tol, "open patch")).collect();
    }
    let t = match topology_report(a) {
        Ok(t) => t,
        Err(e) => return names.iter().map(|&(n, t, tol)| Check::errored(n, t, tol, &e)).collect(),
    };
    let chi = match expected_chi {
        Some(x) => Check::measure("gauss_bonnet", tags::GAUSS_BONNET, (t.chi_m.value - x as f64).abs(), EULER_GAP_TOL)
            .note(format!("chi(M) = {}, catalog value {x}", t.chi_m.value)),
        None => Check::measure("gauss_bonnet", tags::GAUSS_BONNET, t.chi_m.gap, EULER_GAP_TOL)
            .note(format!("chi(M) = {}", t.chi_m.value)),
    };
    let chi_n = Check::measure("normal_euler_number", tags::NORMAL_EULER, t.chi_nf.gap, EULER_GAP_TOL)
        .note(format!("chi(Nf) = {}", t.chi_nf.value));
    let rel = match &t.euler_zero {
        EulerZeroCheck::Skipped { reason } => Check::skipped("euler_zero_relation", tags::EULER_ZERO, EULER_ZERO_TOL, *reason),
        r => Check::measure("euler_zero_relation", tags::EULER_ZERO, r.max_residual().unwrap_or(f64::NAN), EULER_ZERO_TOL),
    };
    vec![chi, chi_n, rel]
}

fn adapted_checks(a: &SurfaceAnalysis, h2: f64) -> Vec<Check> {
    let tol = 5.0 * h2;
    match build_adapted_frame(a) {
        Ok(aff) => {
            let cf = connection_forms(&aff);
            let (d12, d34) = cf.discrepancy();
            vec![
                Check::measure("connection_forms", tags::FORMS, d12.max(d34), tol)
                    .note(format!("{} of {} nodes evaluated", cf.valid_count(), cf.valid.values().len())),
                Check::measure("frame_derivative_identities", tags::FRAME_IDENTITIES, aff.identity_residual(), tol),
            ]
        }
        Err(Error::SuperminimalPatch) => vec![
            Check::skipped("connection_forms", tags::FORMS, tol, "superminimal"),
            Check::skipped("frame_derivative_identities", tags::FRAME_IDENTITIES, tol, "superminimal"),
        ],
        Err(e) => vec![
            Check::errored("connection_forms", tags::FORMS, tol, &e),
            Check::errored("frame_derivative_identities", tags::FRAME_IDENTITIES, tol, &e),
        ],
    }
}

fn closing_check(imm: &Immersion, a: &SurfaceAnalysis, flat: f64) -> Check {
    let tol = (10.0 * flat).max(1e-6);
    let p = imm.patch();
    let mut paths = Vec::new();
    if p.periodic_u() {
        paths.push(LoopPath::generator_u(p, (0, 0)));
    }
    if p.periodic_v() {
        paths.push(LoopPath::generator_v(p, (0, 0)));
    }
    if paths.is_empty() {
        return Check::skipped("original_closes", tags::MONODROMY, tol, "no periodic axis");
    }
    let seed = frame_field(a, imm.position()).at(0, 0);
    let d = assemble_maurer_cartan(&a.connection, 0.0).and_then(|mc| {
        let mut worst = 0.0f64;
        for path in paths {
            worst = worst.max(identity_distance(&generator_monodromy(&mc, &path?, &seed)?));
        }
        Ok(worst)
    });
    match d {
        Ok(d) => Check::measure("original_closes", tags::MONODROMY, d, tol),
        Err(e) => Check::errored("original_closes", tags::MONODROMY, tol, e),
    }
}

/// Runs the suite without writing anything.
pub fn verify(cfg: &RunConfig) -> Result<VerifyReport, Failure> {
    let loaded = load(cfg)?;
    let imm = &loaded.immersion;
    let a = analyze(imm)?;
    let s = &a.shape;
    let h = imm.patch().h_max();
    let h2 = h * h;
    let mut checks = Vec::new();

    let drift = imm.position().values().iter().map(|p| (p.norm() - 1.0).abs()).fold(0.0, f64::max);
    checks.push(Check::measure("unit_norm", tags::SPHERE, drift, UNIT_NORM_TOL));
    checks.push(Check::measure("minimality", tags::MINIMAL, minimality_residual(s), minimality_tolerance(s.jet_source)));
    if let Some(c) = loaded.catalog {
        checks.extend(ground_truth_checks(s, &c.ground_truth()));
    }

    match a.connection.intrinsic_curvatures() {
        Ok(ic) => {
            let none = Field::constant(*imm.patch(), false);
            checks.push(Check::measure("gauss_equation", tags::GAUSS, masked_max_diff(&ic.k, &s.k, &none), 5.0 * h2));
            checks.push(Check::measure(
                "normal_connection_curvature",
                tags::NORMAL_CURVATURE,
                masked_max_diff(&ic.kn, &s.kn, &a.connection.mask),
                5.0 * h2,
            ));
        }
        Err(e) => {
            checks.push(Check::errored("gauss_equation", tags::GAUSS, 5.0 * h2, &e));
            checks.push(Check::errored("normal_connection_curvature", tags::NORMAL_CURVATURE, 5.0 * h2, &e));
        }
    }
    let ellipse = s
        .kn
        .values()
        .iter()
        .zip(s.kappa.values().iter().zip(s.mu.values()))
        .map(|(kn, (k, m))| (kn.abs() - 2.0 * k * m).abs())
        .fold(0.0, f64::max);
    checks.push(Check::measure("ellipse_normal_curvature", tags::ELLIPSE, ellipse, ELLIPSE_TOL));

    let verdict = superminimality_test(s);
    checks.push(if verdict.is_superminimal() {
        Check::measure("hopf_vanishes", tags::HOPF, hopf_abs(s).max(), HOPF_TOL)
    } else {
        Check::skipped("hopf_vanishes", tags::HOPF, HOPF_TOL, format!("not superminimal ({})", verdict.as_str()))
    });

    match laplace_identity_residual(s, &a.tangent.metric) {
        Ok((plus, minus)) => {
            for (name, r) in [("laplace_log_a_plus", plus), ("laplace_log_a_minus", minus)] {
                checks.push(if r.evaluated == 0 {
                    Check::skipped(name, tags::LAPLACE, 5.0 * h2, "vanishes identically")
                } else {
                    Check::measure(name, tags::LAPLACE, r.max, 5.0 * h2)
                });
            }
        }
        Err(e) => {
            checks.push(Check::errored("laplace_log_a_plus", tags::LAPLACE, 5.0 * h2, &e));
            checks.push(Check::errored("laplace_log_a_minus", tags::LAPLACE, 5.0 * h2, &e));
        }
    }

    checks.extend(adapted_checks(&a, h2));

    let flat = flatness(&a);
    checks.push(match &flat {
        Ok(f) => Check::measure("flatness", tags::FLATNESS, *f, 5.0 * h2),
        Err(e) => Check::errored("flatness", tags::FLATNESS, 5.0 * h2, e),
    });
    checks.extend(reconstruction_and_isometry(imm, &a));

    checks.extend(topology_checks(&a, loaded.catalog.map(|c| c.ground_truth().chi_m)));
    checks.push(if !in_great_three_sphere(imm) {
        Check::skipped("ricci_condition", tags::RICCI, 5.0 * h2, "not in a great 3-sphere")
    } else {
        match ricci_condition_residual(s, &a.tangent.metric) {
            Ok(r) => match r.residual {
                Some(x) => Check::measure("ricci_condition", tags::RICCI, x, 5.0 * h2),
                None => Check::skipped("ricci_condition", tags::RICCI, 5.0 * h2, "1 - K vanishes identically"),
            },
            Err(e) => Check::errored("ricci_condition", tags::RICCI, 5.0 * h2, e),
        }
    });
    checks.push(closing_check(imm, &a, flat.as_ref().copied().unwrap_or(0.0)));

    let mut baseline = Vec::new();
    if let Some(orig) = &loaded.unperturbed {
        let b = analyze(orig)?;
        baseline.push(Quantity::new("minimality", minimality_residual(&b.shape), tags::MINIMAL));
        baseline.push(Quantity::new("flatness", flatness(&b)?, tags::FLATNESS));
    }

    let failed: Vec<&'static str> = checks.iter().filter(|c| c.failed()).map(|c| c.name).collect();
    Ok(VerifyReport { header: loaded.header, h_max: h, passed: failed.is_empty(), failed, checks, baseline })
}
