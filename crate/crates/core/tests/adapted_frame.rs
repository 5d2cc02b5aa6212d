use std::f64::consts::PI;

use minsurf_core::adapted::{
    build_adapted_frame, connection_forms, closed_form_connection_forms, find_zero_candidates, frame_derivative_identity_residual,
    hopf_differential, superminimality_test, svd2, zero_orders, EvalFrame, IsothermalChart, SuperminimalityVerdict,
};
use minsurf_core::catalog::{clifford_torus, geodesic_sphere, veronese_sphere};
use minsurf_core::grid::{Field, GridPatch};
use minsurf_core::surface::{analyze, minimality_residual, Immersion};
use minsurf_core::{Complex64, Error};

mod common;
use common::lawson;

fn rot(a: f64) -> [[f64; 2]; 2] {
    let (s, c) = a.sin_cos();
    [[c, -s], [s, c]]
}

fn mul(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut o = [[0.0; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            o[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    o
}

#[test]
fn svd2_reconstructs_its_input() {
    let cases = [[[1.0, 0.3], [-0.2, 0.7]], [[0.0, 2.0], [1.0, 0.0]], [[1.0, 1.0], [1.0, 1.0]], [[-0.5, 0.1], [0.4, -0.9]]];
    for p in cases {
        let (s1, s2, th, ph) = svd2(p);
        assert!(s1 >= s2.abs() - 1e-15);
        let q = mul(mul(rot(ph), [[s1, 0.0], [0.0, s2]]), rot(th));
        for r in 0..2 {
            for c in 0..2 {
                assert!((q[r][c] - p[r][c]).abs() < 1e-14, "{p:?} -> {q:?}");
            }
        }
    }
}

#[test]
fn clifford_adapted_frame() {
    let a = analyze(&clifford_torus(48, 48).unwrap()).unwrap();
    let aff = build_adapted_frame(&a).unwrap();
    assert!(aff.circle_mask.values().iter().all(|&m| !m));
    assert!(aff.kappa1.map(|k| k.abs() - 1.0).max_abs() < 1e-12);
    assert!(aff.mu1.max_abs() < 1e-12);
    let cf = connection_forms(&aff);
    assert_eq!(cf.valid_count(), 48 * 48);
    for f in [&cf.formula12, &cf.formula34, &cf.direct12, &cf.direct34] {
        assert!(f.values().iter().all(|z| z.norm() < 1e-10));
    }
    assert!(aff.identity_residual() < 1e-10);
}

#[test]
fn circle_locus_surfaces_have_no_adapted_frame() {
    for imm in [veronese_sphere(48, 64).unwrap(), geodesic_sphere(32, 32).unwrap()] {
        let a = analyze(&imm).unwrap();
        assert_eq!(build_adapted_frame(&a).unwrap_err(), Error::SuperminimalPatch);
    }
}

#[test]
fn lawson_adapted_frame_is_axis_aligned() {
    let imm = lawson(2.0, 1.0, 128);
    let a = analyze(&imm).unwrap();
    assert!(minimality_residual(&a.shape) < 1e-6);
    let aff = build_adapted_frame(&a).unwrap();
    let p = *imm.patch();
    let mut worst = 0.0f64;
    for i in 0..p.nu() {
        for j in 0..p.nv() {
            if aff.circle_mask.at(i, j) {
                continue;
            }
            let (h3, h4) = aff.rotated_h(a.shape.h3.at(i, j), a.shape.h4.at(i, j), i, j);
            worst = worst
                .max((h3 - Complex64::new(aff.kappa1.at(i, j), 0.0)).norm())
                .max((h4 - Complex64::new(0.0, aff.mu1.at(i, j))).norm())
                .max((h3 * h4.conj()).re.abs());
            assert!(aff.kappa1.at(i, j).powi(2) - aff.mu1.at(i, j).powi(2) > 0.0);
            assert!((aff.kappa1.at(i, j).abs() - a.shape.kappa.at(i, j)).abs() < 1e-10);
        }
    }
    assert!(worst < 1e-10, "{worst}");
}

#[test]
fn lawson_connection_forms_agree() {
    // Errors drop by roughly h² per halving; compare against a fixed multiple.
    let mut errs = Vec::new();
    for n in [64, 128] {
        let a = analyze(&lawson(2.0, 1.0, n)).unwrap();
        let aff = build_adapted_frame(&a).unwrap();
        let cf = connection_forms(&aff);
        assert!(cf.valid_count() > n * n / 2);
        let (d12, d34) = cf.discrepancy();
        let h = 2.0 * PI / n as f64;
        assert!(d12 < 5.0 * h * h && d34 < 5.0 * h * h, "n={n}: {d12} {d34}");
        assert!(aff.identity_residual() < 5.0 * h * h);
        errs.push(d12);
    }
    assert!(errs[1] <= errs[0]);
}

/// `κ₁ = 2 + cos u`, `μ₁ = 1` on a flat chart: `*du = dv` gives
/// `ω₃₄ = sin u/(κ₁² − 1) dv` and `ω₁₂ = κ₁ sin u/(2(κ₁² − 1)) dv`.
fn synthetic(n: usize) -> (Field<f64>, Field<f64>, Field<Complex64>, Field<Complex64>, EvalFrame) {
    let p = GridPatch::torus(n, n, 2.0 * PI, 2.0 * PI).unwrap();
    let kappa1 = Field::from_fn(p, |i, j| 2.0 + p.coords(i, j).0.cos());
    let mu1 = Field::constant(p, 1.0);
    let w34 = Field::from_fn(p, |i, j| {
        let u = p.coords(i, j).0;
        let k = 2.0 + u.cos();
        Complex64::new(0.0, -u.sin() / (k * k - 1.0))
    });
    let w12 = Field::from_fn(p, |i, j| {
        let u = p.coords(i, j).0;
        let k = 2.0 + u.cos();
        Complex64::new(0.0, -k * u.sin() / (2.0 * (k * k - 1.0)))
    });
    (kappa1, mu1, w12, w34, EvalFrame::coordinate(p))
}

fn away_from_circle_point(kappa1: &Field<f64>) -> Field<bool> {
    kappa1.map(|k| k * k - 1.0 > 0.5)
}

#[test]
fn closed_forms_match_symbolic_oracle() {
    let n = 64;
    let h = 2.0 * PI / n as f64;
    let (k, m, w12, w34, frame) = synthetic(n);
    let (f12, f34, ok) = closed_form_connection_forms(&k, &m, &frame);
    // κ₁² − μ₁² vanishes at u = π; the floor must exclude exactly that node.
    assert_eq!(ok.values().iter().filter(|&&b| !b).count(), n);
    let keep = away_from_circle_point(&k);
    for idx in (0..w12.values().len()).filter(|&i| keep.values()[i]) {
        assert!((f12.values()[idx] - w12.values()[idx]).norm() < 5.0 * h * h);
        assert!((f34.values()[idx] - w34.values()[idx]).norm() < 5.0 * h * h);
    }
}

#[test]
fn identity_residual_accepts_oracle_and_rejects_doubled_normal_form() {
    let n = 64;
    let h = 2.0 * PI / n as f64;
    let (k, m, w12, w34, frame) = synthetic(n);
    let all = away_from_circle_point(&k);
    let r = frame_derivative_identity_residual(&k, &m, &w12, &w34, &frame, &all);
    assert!(r < 5.0 * h * h, "{r}");
    let doubled = w34.map(|z| z * 2.0);
    let scale = (0..w34.values().len()).filter(|&i| all.values()[i]).map(|i| (w34.values()[i] * m.values()[i]).norm()).fold(0.0, f64::max);
    let bad = frame_derivative_identity_residual(&k, &m, &w12, &doubled, &frame, &all);
    assert!(bad > 0.1 * scale, "{bad} vs {scale}");
}

#[test]
fn hopf_coefficients_of_catalog_surfaces() {
    let v = veronese_sphere(48, 64).unwrap();
    let a = analyze(&v).unwrap();
    let hf = hopf_differential(&a.shape, &a.tangent, &IsothermalChart::mercator(v.patch())).unwrap();
    assert!(hf.chart_coeff.values().iter().all(|z| z.norm() < 1e-10));
    assert!(hf.zero_list.is_empty());

    let g = geodesic_sphere(32, 32).unwrap();
    let a = analyze(&g).unwrap();
    let hf = hopf_differential(&a.shape, &a.tangent, &IsothermalChart::mercator(g.patch())).unwrap();
    assert!(hf.chart_coeff.values().iter().all(|z| z.norm() < 1e-12));

    let c = clifford_torus(64, 64).unwrap();
    let a = analyze(&c).unwrap();
    let chart = IsothermalChart::grid(&a.tangent).unwrap();
    let hf = hopf_differential(&a.shape, &a.tangent, &chart).unwrap();
    let c0 = hf.chart_coeff.values()[0];
    assert!(c0.norm() > 0.1);
    assert!(hf.chart_coeff.values().iter().all(|z| (z - c0).norm() < 1e-12));
    assert!(hf.holo_residual.max() < 1e-8);
    assert!(hf.zero_list.is_empty());
    for k in 0..c.patch().len() {
        let q = 0.25 * a.shape.a_plus.values()[k] * a.shape.a_minus.values()[k];
        assert!((hf.phi_coeff.values()[k].norm() - q).abs() < 1e-12);
    }
}

#[test]
fn lawson_hopf_coefficient_is_holomorphic() {
    // Conformal coordinate z = x + i∫dy/√E(y), E = m²cos²y + k²sin²y.
    let (m, k) = (2.0, 1.0);
    let n = 128;
    let imm = lawson(m, k, n);
    let a = analyze(&imm).unwrap();
    let p = *imm.patch();
    let jac = Field::from_fn(p, |_, j| {
        let y = p.v().coord(j as isize);
        let e = (m * y.cos()).powi(2) + (k * y.sin()).powi(2);
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0 / e.sqrt())]
    });
    let hf = hopf_differential(&a.shape, &a.tangent, &IsothermalChart::Jacobian(jac)).unwrap();
    // On a torus a holomorphic quartic differential has constant coefficient.
    let c0 = hf.chart_coeff.values()[0];
    let h = 2.0 * PI / n as f64;
    assert!(c0.norm() > 0.01);
    assert!(hf.chart_coeff.values().iter().all(|z| (z - c0).norm() < 1e-6), "{c0}");
    assert!(hf.holo_residual.max() < 10.0 * h * h);
    // Gauge invariance of |Φ|.
    for idx in 0..p.len() {
        let q = 0.25 * a.shape.a_plus.values()[idx] * a.shape.a_minus.values()[idx];
        assert!((hf.phi_coeff.values()[idx].norm() - q).abs() < 1e-10);
    }
    // The grid chart is not conformal here.
    assert!(IsothermalChart::grid(&a.tangent).is_none());
}

#[test]
fn adapted_chart_on_clifford_torus() {
    let c = clifford_torus(32, 32).unwrap();
    let a = analyze(&c).unwrap();
    let aff = build_adapted_frame(&a).unwrap();
    let chart = IsothermalChart::adapted(&aff).unwrap();
    let hf = hopf_differential(&a.shape, &a.tangent, &chart).unwrap();
    assert!(hf.holo_residual.max() < 1e-10);
}

fn synthetic_field(f: impl Fn(Complex64) -> Complex64) -> Field<Complex64> {
    let p = GridPatch::new(
        minsurf_core::grid::Axis::open(65, -1.0, 1.0),
        minsurf_core::grid::Axis::open(65, -1.0, 1.0),
    )
    .unwrap();
    Field::from_fn(p, |i, j| {
        let (u, v) = p.coords(i, j);
        f(Complex64::new(u, v))
    })
}

#[test]
fn zero_orders_recover_constructed_multiplicity() {
    for m in 1..=3 {
        let f = synthetic_field(|z| z.powi(m) * (2.0 + z.re.cos()));
        let cands = find_zero_candidates(&f.map(|z| z.norm() < 1e-9));
        assert_eq!(cands, vec![(32.0, 32.0)]);
        let r = zero_orders(&f, &cands, 4.0 * f.patch().h_max()).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].order, Some(m as i64));
        assert!(!r[0].non_holomorphic);
        assert!(r[0].location.0.abs() < 1e-12 && r[0].location.1.abs() < 1e-12);
    }
}

#[test]
fn zero_orders_flag_modulus_squared() {
    let f = synthetic_field(|z| z * z.conj());
    let r = zero_orders(&f, &[(32.0, 32.0)], 0.125).unwrap();
    assert_eq!(r[0].order, Some(0));
    assert!(r[0].non_holomorphic);
}

#[test]
fn zero_orders_without_zeros_is_empty() {
    let f = synthetic_field(|z| z.exp());
    let cands = find_zero_candidates(&f.map(|z| z.norm() < 1e-9));
    assert!(zero_orders(&f, &cands, 0.1).unwrap().is_empty());
}

#[test]
fn zero_orders_reject_circles_off_the_patch() {
    let f = synthetic_field(|z| z);
    assert!(zero_orders(&f, &[(1.0, 32.0)], 0.5).is_err());
}

#[test]
fn superminimality_verdicts() {
    let verdict = |imm: Immersion| superminimality_test(&analyze(&imm).unwrap().shape);
    assert_eq!(verdict(veronese_sphere(48, 64).unwrap()), SuperminimalityVerdict::Superminimal);
    assert_eq!(verdict(geodesic_sphere(32, 32).unwrap()), SuperminimalityVerdict::Superminimal);
    assert_eq!(verdict(clifford_torus(32, 32).unwrap()), SuperminimalityVerdict::Generic);
    assert_eq!(verdict(lawson(2.0, 1.0, 64)), SuperminimalityVerdict::Generic);
}
