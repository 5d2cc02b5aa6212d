use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use minsurf_core::catalog::{clifford_torus, geodesic_sphere, perturbed, veronese_sphere};
use minsurf_core::family::{assemble_maurer_cartan, frame_field};
use minsurf_core::grid::LoopPath;
use minsurf_core::linalg::{identity_distance, orthogonality_defect, Vec5};
use minsurf_core::monodromy::{
    centred_angle, dichotomy_report, generator_monodromy, scan_profile, ClosingVerdict, ScanOptions,
};
use minsurf_core::surface::analyze;
use minsurf_core::Error;

mod common;
use common::lawson;

#[test]
fn original_surface_closes() {
    let imm = clifford_torus(256, 256).unwrap();
    let a = analyze(&imm).unwrap();
    let seed = frame_field(&a, imm.position()).at(0, 0);
    let mc = assemble_maurer_cartan(&a.connection, 0.0).unwrap();
    for path in [LoopPath::generator_u(imm.patch(), (0, 0)).unwrap(), LoopPath::generator_v(imm.patch(), (0, 0)).unwrap()] {
        let m = generator_monodromy(&mc, &path, &seed).unwrap();
        assert!(identity_distance(&m) < 1e-8, "{:e}", identity_distance(&m));
        assert!(orthogonality_defect(&m) < 1e-8);
    }
}

#[test]
fn contractible_loops_have_trivial_holonomy() {
    let imm = lawson(2.0, 1.0, 128);
    let a = analyze(&imm).unwrap();
    let p = *imm.patch();
    let seed = frame_field(&a, imm.position()).at(10, 40);
    let path = LoopPath::rectangle(&p, (10, 40), 30, 50).unwrap();
    let length = 2.0 * (30.0 * p.hu() + 50.0 * p.hv());
    let h = p.h_max();
    for theta in [0.0, 0.9, 2.0] {
        let mc = assemble_maurer_cartan(&a.connection, theta).unwrap();
        let d = identity_distance(&generator_monodromy(&mc, &path, &seed).unwrap());
        assert!(d < h * h * length, "theta {theta}: {d:e}");
    }
}

#[test]
fn clifford_eighth_turn_does_not_close() {
    let imm = clifford_torus(128, 128).unwrap();
    let a = analyze(&imm).unwrap();
    let seed = frame_field(&a, imm.position()).at(0, 0);
    let mc = assemble_maurer_cartan(&a.connection, FRAC_PI_4).unwrap();
    let m = generator_monodromy(&mc, &LoopPath::generator_u(imm.patch(), (0, 0)).unwrap(), &seed).unwrap();
    assert!(identity_distance(&m) > 0.1);
}

#[test]
fn composite_loop_monodromy_is_the_product() {
    let imm = lawson(2.0, 1.0, 64);
    let p = *imm.patch();
    let a = analyze(&imm).unwrap();
    let seed = frame_field(&a, imm.position()).at(3, 5);
    let mc = assemble_maurer_cartan(&a.connection, 1.1).unwrap();
    let g1 = LoopPath::generator_u(&p, (3, 5)).unwrap();
    let g2 = LoopPath::generator_v(&p, (3, 5)).unwrap();
    let m1 = generator_monodromy(&mc, &g1, &seed).unwrap();
    let m2 = generator_monodromy(&mc, &g2, &seed).unwrap();
    let m12 = generator_monodromy(&mc, &g1.then(&p, &g2).unwrap(), &seed).unwrap();
    assert!((m12 - m1 * m2).norm() < 1e-7, "{:e}", (m12 - m1 * m2).norm());
    assert!(identity_distance(&m1) > 1e-3);
}

#[test]
fn monodromy_of_surfaces_in_a_great_three_sphere_fixes_the_fifth_axis() {
    let e5 = Vec5::new(0.0, 0.0, 0.0, 0.0, 1.0);
    for imm in [clifford_torus(64, 64).unwrap(), lawson(2.0, 1.0, 64)] {
        let p = *imm.patch();
        let a = analyze(&imm).unwrap();
        let seed = frame_field(&a, imm.position()).at(0, 0);
        for theta in [0.4, 1.3, 2.9] {
            let mc = assemble_maurer_cartan(&a.connection, theta).unwrap();
            for path in [LoopPath::generator_u(&p, (0, 0)).unwrap(), LoopPath::generator_v(&p, (0, 0)).unwrap()] {
                let m = generator_monodromy(&mc, &path, &seed).unwrap();
                assert!((m * e5 - e5).norm() < 1e-8);
            }
        }
    }
}

#[test]
fn clifford_closing_set_is_the_quarter_turns() {
    let imm = clifford_torus(256, 256).unwrap();
    let a = analyze(&imm).unwrap();
    let profile = scan_profile(&imm, &a, ScanOptions { n_theta: 720, tol_close: Some(1e-6), ..Default::default() }).unwrap();
    assert_eq!(profile.verdict, ClosingVerdict::Finite);
    assert_eq!(profile.roots.len(), 4, "{:?}", profile.roots);
    for (r, expect) in profile.roots.iter().zip([0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2]) {
        assert!((r - expect).abs() < 1e-6, "{r} vs {expect}");
    }
    assert!(profile.commutator_defect.iter().all(|&c| c < 1e-7));
    assert!(profile.d[0] < profile.tol_close);
    let eighth = profile.thetas.iter().position(|&t| (t - FRAC_PI_4).abs() < 1e-12).unwrap();
    assert!(profile.d[eighth] > 0.1);
    let report = dichotomy_report(&profile);
    assert_eq!(report.verdict.as_str(), "FINITE");
    assert!(report.closed_fraction < 0.1);
}

#[test]
fn distance_profile_does_not_depend_on_the_basepoint() {
    let imm = clifford_torus(128, 128).unwrap();
    let a = analyze(&imm).unwrap();
    let opts = ScanOptions { n_theta: 64, ..Default::default() };
    let x = scan_profile(&imm, &a, opts).unwrap();
    let y = scan_profile(&imm, &a, ScanOptions { basepoint: (37, 101), ..opts }).unwrap();
    for (dx, dy) in x.d.iter().zip(&y.d) {
        assert!((dx - dy).abs() < 1e-8, "{dx} vs {dy}");
    }
}

#[test]
fn lawson_torus_closes_at_zero_and_at_the_half_turn() {
    // e^{−2iπ} = 1, so Ω_π = Ω_0 and θ = π closes whenever θ = 0 does.
    let imm = lawson(2.0, 1.0, 128);
    let a = analyze(&imm).unwrap();
    let profile = scan_profile(&imm, &a, ScanOptions { n_theta: 64, ..Default::default() }).unwrap();
    assert!(!profile.superminimal);
    assert_eq!(profile.verdict, ClosingVerdict::Finite);
    for target in [0.0, PI] {
        assert!(profile.roots.iter().any(|&r| centred_angle(r - target).abs() < 1e-6), "{:?}", profile.roots);
    }
    // Difference jets: the commutator loop only sees discretization error.
    assert!(profile.commutator_defect.iter().all(|&c| c < profile.tol_close));
}

#[test]
fn superminimal_spheres_close_for_every_member() {
    for imm in [veronese_sphere(64, 128).unwrap(), geodesic_sphere(64, 128).unwrap()] {
        let a = analyze(&imm).unwrap();
        let profile = scan_profile(&imm, &a, ScanOptions { n_theta: 64, ..Default::default() }).unwrap();
        assert!(profile.superminimal);
        assert_eq!(profile.verdict, ClosingVerdict::Circle);
        assert!(profile.congruence.as_ref().unwrap().iter().all(|&c| c < 1e-4));
        assert!(profile.roots.is_empty());
    }
}

#[test]
fn coarse_scans_are_refused() {
    let imm = clifford_torus(32, 32).unwrap();
    let a = analyze(&imm).unwrap();
    let err = scan_profile(&imm, &a, ScanOptions { n_theta: 8, ..Default::default() }).unwrap_err();
    assert!(matches!(err, Error::ScanTooCoarse { min: 64, got: 8 }));
}

#[test]
fn non_minimal_input_is_never_classified() {
    // The perturbation leaves a flatness footprint near 1e-2 at any
    // resolution; the 5h² gate resolves it from n = 128 on.
    let imm = perturbed(&clifford_torus(128, 128).unwrap(), 1e-3, 7).unwrap();
    let a = analyze(&imm).unwrap();
    let err = scan_profile(&imm, &a, ScanOptions { n_theta: 64, ..Default::default() }).unwrap_err();
    assert!(matches!(err, Error::IntegrabilityBroken { .. }), "{err:?}");
}

#[test]
fn centred_angles() {
    assert!((centred_angle(TAU + 0.5) - 0.5).abs() < 1e-15);
    assert!((centred_angle(-0.5) + 0.5).abs() < 1e-15);
    assert!((centred_angle(3.0 * FRAC_PI_2) + FRAC_PI_2).abs() < 1e-15);
}
