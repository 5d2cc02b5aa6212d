//! The four batch commands. Each one computes everything first and writes
//! its files at the end.

use std::fs;

use minsurf_core::family::{assemble_maurer_cartan, congruence_test, frame_field, integrate_frame, unwrap_field, IntegrationOptions};
use minsurf_core::grid::ScalarField;
use minsurf_core::monodromy::{dichotomy_report, scan_profile, ScanOptions, MIN_THETA_SAMPLES};
use minsurf_core::surface::{analyze, minimality_residual, JetSource, ShapeReport, SurfaceAnalysis};
use minsurf_core::topology::euler_numbers;
use minsurf_core::adapted::superminimality_test;
use minsurf_core::catalog::GroundTruth;
use minsurf_core::Error;
use serde::Serialize;

use crate::config::{load, Command, RunConfig};
use crate::error::{Failure, EXIT_OK, EXIT_VERIFY_FAILED};
use crate::manifest::export_fields;
use crate::report::{finite, fmt_f64, write_field_csv, write_json, Check, Header, Quantity};
use crate::tags;
use crate::verify::verify;

/// Residual above which a deformed member is reported as not congruent.
pub const NONCONGRUENT: f64 = 0.05;

/// Runs one command and writes its outputs into `cfg.out`. Returns the
/// process exit code on success.
pub fn run(cfg: &RunConfig) -> Result<i32, Failure> {
    cfg.validate()?;
    if let (Command::Monodromy, Some(n)) = (cfg.command, cfg.scan) {
        if n < MIN_THETA_SAMPLES {
            return Err(Error::ScanTooCoarse { min: MIN_THETA_SAMPLES, got: n }.into());
        }
    }
    match cfg.command {
        Command::Analyze => cmd_analyze(cfg).map(|_| EXIT_OK),
        Command::Deform => cmd_deform(cfg).map(|_| EXIT_OK),
        Command::Monodromy => cmd_monodromy(cfg).map(|_| EXIT_OK),
        Command::Verify => {
            let report = verify(cfg)?;
            create_out(cfg)?;
            write_json(&cfg.out, "report.json", &report)?;
            Ok(if report.passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
    }
}

fn create_out(cfg: &RunConfig) -> Result<(), Failure> {
    fs::create_dir_all(&cfg.out).map_err(|e| Failure::io(e, &cfg.out.display().to_string()))
}

/// `max |Φ| = ¼ max |H̄₃² + H̄₄²|`, pointwise.
pub fn hopf_abs(shape: &ShapeReport) -> ScalarField {
    shape.h3.zip_map(&shape.h4, |a, b| 0.25 * (a.conj() * a.conj() + b.conj() * b.conj()).norm())
}

/// Largest accepted minimality residual for a jet source.
pub fn minimality_tolerance(source: JetSource) -> f64 {
    match source {
        JetSource::Analytic => 1e-8,
        JetSource::FiniteDifference => 1e-6,
    }
}

/// Pointwise catalog values, judged at `1e-9` with exact jets and `1e-5`
/// with difference jets.
pub fn ground_truth_checks(shape: &ShapeReport, gt: &GroundTruth) -> Vec<Check> {
    let tol = match shape.jet_source {
        JetSource::Analytic => 1e-9,
        JetSource::FiniteDifference => 1e-5,
    };
    let dev = |f: &ScalarField, target: f64| f.map(|x| x - target).max_abs();
    let axes = dev(&shape.kappa, gt.kappa).max(dev(&shape.mu, gt.mu));
    // 1 − 1/3 − 2/3 rounds to 1e-16, whose root would be 1e-8.
    let root = |r: f64| if r < 1e-12 { 0.0 } else { r.sqrt() };
    let (a_plus, a_minus) = (root(1.0 - gt.k + gt.kn), root(1.0 - gt.k - gt.kn));
    let mut out = vec![
        Check::measure("catalog_gauss_curvature", tags::CATALOG, dev(&shape.k, gt.k), tol),
        Check::measure("catalog_normal_curvature", tags::CATALOG, dev(&shape.kn.map(f64::abs), gt.kn), tol),
        Check::measure("catalog_norm_b2", tags::CATALOG, dev(&shape.norm_b2, gt.norm_b2), tol),
    ];
    // κ and μ are square roots of a discriminant that vanishes on circle
    // points: a rounding error ε there becomes √ε.
    let axis_tol = if gt.superminimal || gt.mu == 0.0 { tol.max(1e-8) } else { tol };
    out.push(Check::measure("catalog_ellipse_axes", tags::CATALOG, axes, axis_tol));
    let a_tol = if a_minus == 0.0 || a_plus == 0.0 { tol.max(1e-8) } else { tol };
    out.push(Check::measure(
        "catalog_a_plus_minus",
        tags::A_PM,
        dev(&shape.a_plus, a_plus).max(dev(&shape.a_minus, a_minus)),
        a_tol,
    ));
    out
}

fn field_quantities(name: &str, f: &ScalarField, tag: &'static str) -> [Quantity; 3] {
    let (lo, hi) = (f.min(), f.max());
    [
        Quantity::new(format!("{name}.min"), lo, tag),
        Quantity::new(format!("{name}.max"), hi, tag),
        Quantity::new(format!("{name}.spread"), hi - lo, tag),
    ]
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    #[serde(flatten)]
    pub header: Header,
    pub superminimal: bool,
    pub superminimality_verdict: &'static str,
    pub quantities: Vec<Quantity>,
    pub checks: Vec<Check>,
}

pub fn analyze_report(cfg: &RunConfig) -> Result<(AnalyzeReport, SurfaceAnalysis), Failure> {
    let loaded = load(cfg)?;
    let a = analyze(&loaded.immersion)?;
    let s = &a.shape;
    let verdict = superminimality_test(s);
    let hopf = hopf_abs(s);
    let mut quantities = Vec::new();
    for (name, f, tag) in [
        ("K", &s.k, tags::GAUSS),
        ("K_N", &s.kn, tags::NORMAL_CURVATURE),
        ("norm_B2", &s.norm_b2, tags::GAUSS),
        ("kappa", &s.kappa, tags::ELLIPSE),
        ("mu", &s.mu, tags::ELLIPSE),
        ("a_plus", &s.a_plus, tags::A_PM),
        ("a_minus", &s.a_minus, tags::A_PM),
        ("hopf_abs", &hopf, tags::HOPF),
    ] {
        quantities.extend(field_quantities(name, f, tag));
    }
    if loaded.immersion.patch().is_closed() {
        let (chi_m, chi_nf) = euler_numbers(s, &a.tangent.metric)?;
        quantities.push(Quantity::new("chi_M", chi_m.value, tags::GAUSS_BONNET));
        quantities.push(Quantity::new("chi_Nf", chi_nf.value, tags::NORMAL_EULER));
    }
    let mut checks = vec![Check::measure(
        "minimality",
        tags::MINIMAL,
        minimality_residual(s),
        minimality_tolerance(s.jet_source),
    )];
    if let Some(c) = loaded.catalog {
        checks.extend(ground_truth_checks(s, &c.ground_truth()));
    }
    let report = AnalyzeReport {
        header: loaded.header,
        superminimal: verdict.is_superminimal(),
        superminimality_verdict: verdict.as_str(),
        quantities,
        checks,
    };
    Ok((report, a))
}

fn cmd_analyze(cfg: &RunConfig) -> Result<(), Failure> {
    let (report, a) = analyze_report(cfg)?;
    let s = &a.shape;
    create_out(cfg)?;
    for (name, f) in [
        ("K.csv", &s.k),
        ("K_N.csv", &s.kn),
        ("kappa.csv", &s.kappa),
        ("mu.csv", &s.mu),
        ("a_plus.csv", &s.a_plus),
        ("a_minus.csv", &s.a_minus),
        ("hopf_abs.csv", &hopf_abs(s)),
    ] {
        write_field_csv(&cfg.out, name, f)?;
    }
    write_json(&cfg.out, "report.json", &report)
}

#[derive(Debug, Clone, Serialize)]
pub struct CongruenceSummary {
    pub residual: Quantity,
    pub noncongruent: bool,
    pub determinant: f64,
    pub rank: usize,
    pub degenerate: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DeformReport {
    #[serde(flatten)]
    pub header: Header,
    pub theta: f64,
    pub deformed_manifest: &'static str,
    pub congruence: CongruenceSummary,
    pub path_discrepancy: Quantity,
    pub orthogonality: Quantity,
    pub flatness: Quantity,
}

fn cmd_deform(cfg: &RunConfig) -> Result<(), Failure> {
    let theta = cfg.theta.expect("validated");
    let loaded = load(cfg)?;
    let imm = &loaded.immersion;
    let a = analyze(imm)?;
    let frames = frame_field(&a, imm.position());
    let mc = assemble_maurer_cartan(&a.connection, theta)?;
    let opts = IntegrationOptions::for_patch(imm.patch());
    let def = integrate_frame(&mc, &frames.at(0, 0), opts)?;
    let c = congruence_test(&unwrap_field(imm.position()), &def.position)?;
    let h = imm.patch().h_max();
    let report = DeformReport {
        header: loaded.header,
        theta,
        deformed_manifest: "deformed.json",
        congruence: CongruenceSummary {
            residual: Quantity::new("congruence_residual", c.residual, tags::CONGRUENCE).with_tolerance(NONCONGRUENT),
            noncongruent: !(c.residual <= NONCONGRUENT),
            determinant: c.determinant,
            rank: c.rank,
            degenerate: c.degenerate,
        },
        path_discrepancy: Quantity::new("path_discrepancy", def.path_discrepancy, tags::FLATNESS).with_tolerance(opts.path_tol),
        orthogonality: Quantity::new("orthogonality", def.orthogonality, tags::RECONSTRUCTION).with_tolerance(1e-8),
        flatness: Quantity::new("flatness", def.flatness, tags::FLATNESS).with_tolerance(5.0 * h * h),
    };
    create_out(cfg)?;
    export_fields(&def.position, None, &cfg.out, "deformed").map_err(|e| Failure::io(e, "deformed patch"))?;
    write_json(&cfg.out, "report.json", &report)
}

#[derive(Debug, Clone, Serialize)]
pub struct Root {
    pub theta: f64,
    pub d: Option<f64>,
    pub tolerance: f64,
    pub tag: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct RootsDoc {
    pub verdict: &'static str,
    pub superminimal: bool,
    pub roots: Vec<Root>,
    pub quantities: Vec<Quantity>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonodromyReport {
    #[serde(flatten)]
    pub header: Header,
    #[serde(flatten)]
    pub roots: RootsDoc,
}

fn cmd_monodromy(cfg: &RunConfig) -> Result<(), Failure> {
    let loaded = load(cfg)?;
    let imm = &loaded.immersion;
    let a = analyze(imm)?;
    let opts = ScanOptions { n_theta: cfg.scan.expect("validated"), tol_close: cfg.tol_close, ..Default::default() };
    let profile = scan_profile(imm, &a, opts)?;
    let summary = dichotomy_report(&profile);
    let tol = profile.tol_close;
    let mut quantities = vec![
        Quantity::new("n_theta", summary.n_theta as f64, tags::CLOSING),
        Quantity::new("tol_close", tol, tags::CLOSING),
        Quantity::new("closed_fraction", summary.closed_fraction, tags::CLOSING),
        Quantity::new("d_min", summary.d_min, tags::MONODROMY),
        Quantity::new("d_max", summary.d_max, tags::MONODROMY),
        Quantity::new("max_commutator_defect", summary.max_commutator_defect, tags::MONODROMY).with_tolerance(tol),
        Quantity::new("flatness", profile.flatness, tags::FLATNESS).with_tolerance(5.0 * imm.patch().h_max().powi(2)),
    ];
    if let Some(c) = &profile.congruence {
        let worst = c.iter().copied().fold(0.0, f64::max);
        quantities.push(Quantity::new("max_congruence_residual", worst, tags::CONGRUENCE).with_tolerance(opts.congruence_tol));
    }
    let roots = profile
        .roots
        .iter()
        .zip(&profile.root_d)
        .map(|(&theta, &d)| Root { theta, d: finite(d), tolerance: tol, tag: tags::CLOSING })
        .collect();
    let doc = RootsDoc { verdict: summary.verdict.as_str(), superminimal: profile.superminimal, roots, quantities };

    create_out(cfg)?;
    let path = cfg.out.join("profile.csv");
    let io = |e: csv::Error| Failure::io(std::io::Error::other(e), "profile.csv");
    let mut w = csv::Writer::from_path(&path).map_err(io)?;
    w.write_record(["theta", "d", "comm_defect"]).map_err(io)?;
    for k in 0..profile.thetas.len() {
        w.write_record([fmt_f64(profile.thetas[k]), fmt_f64(profile.d[k]), fmt_f64(profile.commutator_defect[k])])
            .map_err(io)?;
    }
    w.flush().map_err(|e| Failure::io(e, "profile.csv"))?;
    write_json(&cfg.out, "roots.json", &doc)?;
    write_json(&cfg.out, "report.json", &MonodromyReport { header: loaded.header, roots: doc })
}
