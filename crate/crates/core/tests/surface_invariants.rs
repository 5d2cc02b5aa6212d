use std::f64::consts::PI;

use minsurf_core::catalog::{clifford_torus, geodesic_sphere, perturbed, veronese_sphere};
use minsurf_core::grid::{Field, ScalarField};
use minsurf_core::linalg::{Mat5, Vec5};
use minsurf_core::surface::{
    analyze, gauge_invariance_check, minimality_residual, second_fundamental_form, tangent_frame,
    Immersion, Orientation,
};

fn max_dev(f: &ScalarField, target: f64) -> f64 {
    f.map(|x| x - target).max_abs()
}

fn interior_max(f: &ScalarField, target: f64, margin: usize) -> f64 {
    let p = f.patch();
    let mut e: f64 = 0.0;
    for i in 0..p.nu() {
        for j in margin..p.nv() - margin {
            e = e.max((f.at(i, j) - target).abs());
        }
    }
    e
}

#[test]
fn clifford_invariants_with_exact_jets() {
    let imm = clifford_torus(64, 64).unwrap();
    let s = analyze(&imm).unwrap().shape;
    assert!(max_dev(&s.k, 0.0) < 1e-12);
    assert!(max_dev(&s.kn, 0.0) < 1e-12);
    assert!(max_dev(&s.norm_b2, 2.0) < 1e-12);
    assert!(max_dev(&s.kappa, 1.0) < 1e-12);
    assert!(max_dev(&s.mu, 0.0) < 1e-12);
    assert!(max_dev(&s.a_plus, 1.0) < 1e-12);
    assert!(max_dev(&s.a_minus, 1.0) < 1e-12);
    assert!(minimality_residual(&s) < 1e-12);
}

#[test]
fn clifford_invariants_with_difference_jets() {
    let imm = clifford_torus(256, 256).unwrap().without_jets();
    let s = analyze(&imm).unwrap().shape;
    for (f, t) in [(&s.k, 0.0), (&s.kn, 0.0), (&s.norm_b2, 2.0), (&s.kappa, 1.0), (&s.a_plus, 1.0)] {
        assert!(max_dev(f, t) < 1e-5);
    }
    assert!(minimality_residual(&s) < 1e-6);
}

#[test]
fn clifford_tangent_frame_is_coordinate_frame() {
    let imm = clifford_torus(32, 32).unwrap();
    let jets = imm.jets().unwrap();
    let tf = tangent_frame(&imm, &jets, Orientation::Positive).unwrap();
    for k in 0..imm.patch().len() {
        assert!((tf.e1.values()[k] - jets.fu.values()[k]).norm() < 1e-14);
        assert!((tf.e2.values()[k] - jets.fv.values()[k]).norm() < 1e-14);
    }
    let neg = tangent_frame(&imm, &jets, Orientation::Negative).unwrap();
    for k in 0..imm.patch().len() {
        assert_eq!(neg.e2.values()[k], -tf.e2.values()[k]);
    }
}

#[test]
fn frames_are_orthonormal_and_oriented() {
    for imm in [clifford_torus(64, 64).unwrap(), veronese_sphere(64, 64).unwrap(), geodesic_sphere(32, 32).unwrap()] {
        let a = analyze(&imm).unwrap();
        for k in 0..imm.patch().len() {
            let cols = [
                imm.position().values()[k],
                a.tangent.e1.values()[k],
                a.tangent.e2.values()[k],
                a.normal.e3.values()[k],
                a.normal.e4.values()[k],
            ];
            let m = Mat5::from_columns(&cols);
            assert!((m.transpose() * m - Mat5::identity()).norm() < 1e-10);
            assert!((m.determinant() - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn surface_in_hyperplane_keeps_fifth_axis_as_normal() {
    let imm = clifford_torus(64, 64).unwrap();
    let a = analyze(&imm).unwrap();
    let x5 = Vec5::new(0.0, 0.0, 0.0, 0.0, 1.0);
    for v in a.normal.e4.values() {
        assert!((v - x5).norm() < 1e-10);
    }
    assert!(a.normal.holonomy.is_trivial());
}

#[test]
fn veronese_invariants() {
    let imm = veronese_sphere(128, 128).unwrap();
    let s = analyze(&imm).unwrap().shape;
    assert!(max_dev(&s.k, 1.0 / 3.0) < 1e-10);
    assert!(max_dev(&s.kn, 2.0 / 3.0) < 1e-10, "K_N sign convention");
    assert!(max_dev(&s.kappa, 1.0 / 3.0f64.sqrt()) < 1e-8);
    assert!(s.kappa.zip_map(&s.mu, |a, b| a - b).max_abs() < 1e-8);
    assert!(max_dev(&s.a_minus, 0.0) < 1e-8);
    assert!(max_dev(&s.a_plus, (4.0f64 / 3.0).sqrt()) < 1e-10);
    assert!(minimality_residual(&s) < 1e-10);
}

#[test]
fn geodesic_sphere_has_no_second_fundamental_form() {
    let s = analyze(&geodesic_sphere(64, 64).unwrap()).unwrap().shape;
    assert!(max_dev(&s.norm_b2, 0.0) < 1e-20);
    assert!(max_dev(&s.k, 1.0) < 1e-12);
    assert!(max_dev(&s.a_plus, 0.0) < 1e-10);
    assert!(max_dev(&s.a_minus, 0.0) < 1e-10);
}

#[test]
fn invariant_identities_hold_pointwise() {
    for imm in [clifford_torus(64, 64).unwrap(), veronese_sphere(64, 64).unwrap()] {
        let s = analyze(&imm).unwrap().shape;
        for k in 0..imm.patch().len() {
            let (kk, kn) = (s.k.values()[k], s.kn.values()[k]);
            let (ap, am) = (s.a_plus.values()[k], s.a_minus.values()[k]);
            let (ka, mu) = (s.kappa.values()[k], s.mu.values()[k]);
            assert!((ap * ap - (1.0 - kk + kn)).abs() < 1e-10);
            assert!((am * am - (1.0 - kk - kn)).abs() < 1e-10);
            assert!((kn.abs() - 2.0 * ka * mu).abs() < 1e-10);
            assert!(ka >= mu && mu >= 0.0);
            let h = s.norm_b2.values()[k];
            assert!((h - 2.0 * (s.h3.values()[k].norm_sqr() + s.h4.values()[k].norm_sqr())).abs() < 1e-14);
        }
    }
}

#[test]
fn normal_gauge_changes_leave_invariants_alone() {
    let imm = veronese_sphere(128, 128).unwrap();
    let a = analyze(&imm).unwrap();
    let patch = *imm.patch();
    let constant = a.normal.rotated(&Field::constant(patch, 0.7));
    let d = gauge_invariance_check(&a.jets, &a.tangent, &a.normal, &constant).unwrap();
    assert!(d.max() < 1e-10, "{d:?}");
    let smooth = a.normal.rotated(&Field::from_fn(patch, |i, j| {
        let (u, v) = patch.coords(i, j);
        u.sin() * v.cos() + 0.3
    }));
    assert!(gauge_invariance_check(&a.jets, &a.tangent, &a.normal, &smooth).unwrap().max() < 1e-8);

    let flipped = a.normal.flipped();
    let s = second_fundamental_form(&a.jets, &a.tangent, &flipped).unwrap();
    assert!(s.kn.zip_map(&a.shape.kn, |x, y| x + y).max_abs() < 1e-12);
    let d = gauge_invariance_check(&a.jets, &a.tangent, &a.normal, &flipped).unwrap();
    assert!(d.k < 1e-12 && d.kn_abs < 1e-12 && d.kappa < 1e-12 && d.mu < 1e-12 && d.norm_b2 < 1e-12);
    assert!(d.kn > 1.0);
}

#[test]
fn tangent_rotation_leaves_invariants_alone() {
    let imm = veronese_sphere(64, 64).unwrap();
    let a = analyze(&imm).unwrap();
    let patch = *imm.patch();
    let rotated = a.tangent.rotated(&Field::from_fn(patch, |i, j| {
        let (u, v) = patch.coords(i, j);
        2.0 * v.sin() + (3.0 * u).cos()
    }));
    let s = second_fundamental_form(&a.jets, &rotated, &a.normal).unwrap();
    for (x, y) in [(&s.k, &a.shape.k), (&s.kn, &a.shape.kn), (&s.kappa, &a.shape.kappa), (&s.a_plus, &a.shape.a_plus)] {
        assert!(x.max_abs_diff(y) < 1e-12);
    }
}

#[test]
fn connection_forms_reproduce_curvatures() {
    let imm = veronese_sphere(256, 256).unwrap();
    let a = analyze(&imm).unwrap();
    let c = a.connection.intrinsic_curvatures().unwrap();
    assert!(interior_max(&c.k, 1.0 / 3.0, 32) < 1e-6);
    assert!(interior_max(&c.kn, 2.0 / 3.0, 32) < 1e-6);
}

#[test]
fn perturbation_breaks_minimality() {
    let imm = perturbed(&clifford_torus(128, 128).unwrap(), 1e-3, 7).unwrap();
    let s = analyze(&imm).unwrap().shape;
    assert!(minimality_residual(&s) > 1e-4);
}

#[test]
fn off_sphere_input_is_rejected() {
    let imm = clifford_torus(16, 16).unwrap();
    let mut p = imm.position().clone().into_values();
    p[37] *= 1.0 + 1e-9;
    let err = Immersion::new(Field::new(*imm.patch(), p).unwrap(), None).unwrap_err();
    assert!(matches!(err, minsurf_core::Error::OffSphere { index: (2, 5), .. }), "{err:?}");
    let _ = PI;
}
