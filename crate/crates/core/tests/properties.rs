use std::f64::consts::{PI, TAU};

use minsurf_core::catalog::clifford_torus;
use minsurf_core::family::{assemble_maurer_cartan, frame_field};
use minsurf_core::grid::{derivative, laplace_beltrami, Direction, Field, GridPatch, LoopPath, MetricField};
use minsurf_core::linalg::{identity_distance, orthogonality_defect, pairwise_sum, polar_orthonormalize, Mat5};
use minsurf_core::monodromy::generator_monodromy;
use minsurf_core::surface::{analyze, Immersion};
use minsurf_core::topology::IntegerEstimate;
use proptest::prelude::*;

mod common;
use common::{lawson, random_rotation};

fn rotation() -> impl Strategy<Value = Mat5> {
    prop::collection::vec(-3.0f64..3.0, 25).prop_map(|e| random_rotation(&e))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn periodic_derivatives_of_trig_polynomials(coeffs in prop::collection::vec(-1.0f64..1.0, 8)) {
        let p = GridPatch::torus(64, 48, TAU, TAU).unwrap();
        let f = |x: f64, y: f64| {
            (1..=4).map(|k| coeffs[k - 1] * (k as f64 * x).sin() + coeffs[k + 3] * (k as f64 * y).cos()).sum::<f64>()
        };
        // Central differences act on e^{ikx} by the modified wave number of
        // the 7-point stencil.
        let h = p.hu();
        let kstar = |k: f64| (45.0 * (k * h).sin() - 9.0 * (2.0 * k * h).sin() + (3.0 * k * h).sin()) / (30.0 * h);
        let fx = |x: f64| (1..=4).map(|k| coeffs[k - 1] * kstar(k as f64) * (k as f64 * x).cos()).sum::<f64>();
        let field = Field::from_fn(p, |i, j| { let (x, y) = p.coords(i, j); f(x, y) });
        let du = derivative(&field, Direction::U, 1).unwrap();
        for i in 0..p.nu() {
            let (x, _) = p.coords(i, 0);
            prop_assert!((du.at(i, 5) - fx(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn laplacian_kills_constants(c in -10.0f64..10.0) {
        let p = GridPatch::torus(32, 32, TAU, TAU).unwrap();
        let lap = laplace_beltrami(&Field::constant(p, c), &MetricField::flat(p)).unwrap();
        prop_assert!(lap.max_abs() < 1e-10);
    }

    #[test]
    fn polar_projection_returns_the_nearby_rotation(r in rotation(), noise in prop::collection::vec(-1e-3f64..1e-3, 25)) {
        let x = r + Mat5::from_iterator(noise.into_iter());
        let q = polar_orthonormalize(&x);
        prop_assert!(orthogonality_defect(&q) < 1e-13);
        prop_assert!((q - r).norm() < 1e-2);
    }

    #[test]
    fn identity_distance_is_conjugation_invariant(a in rotation(), m in rotation()) {
        prop_assert!((identity_distance(&(a * m * a.transpose())) - identity_distance(&m)).abs() < 1e-12);
    }

    #[test]
    fn pairwise_sum_agrees_with_naive_sum(v in prop::collection::vec(-1e3f64..1e3, 0..300)) {
        let naive: f64 = v.iter().sum();
        prop_assert!((pairwise_sum(&v) - naive).abs() < 1e-9);
    }

    #[test]
    fn integer_estimates_are_consistent(x in -100.0f64..100.0) {
        let e = IntegerEstimate::new(x);
        prop_assert!(e.gap <= 0.5);
        prop_assert!(((e.rounded as f64 - x).abs() - e.gap).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn invariants_are_unchanged_by_ambient_rotations(r in rotation()) {
        let imm = lawson(2.0, 1.0, 48);
        let moved = Immersion::new(imm.position().map(|p| r * p), None).unwrap();
        let (a, b) = (analyze(&imm).unwrap().shape, analyze(&moved).unwrap().shape);
        for (x, y) in [(&a.k, &b.k), (&a.kappa, &b.kappa), (&a.mu, &b.mu), (&a.norm_b2, &b.norm_b2)] {
            prop_assert!(x.max_abs_diff(y) < 1e-9);
        }
        // Orientation of R⁵ is preserved, so K_N keeps its sign.
        prop_assert!(a.kn.max_abs_diff(&b.kn) < 1e-9);
    }

    #[test]
    fn monodromy_has_period_pi(theta in 0.0f64..PI) {
        let imm = clifford_torus(32, 32).unwrap();
        let a = analyze(&imm).unwrap();
        let seed = frame_field(&a, imm.position()).at(0, 0);
        let path = LoopPath::generator_u(imm.patch(), (0, 0)).unwrap();
        let m = |t: f64| generator_monodromy(&assemble_maurer_cartan(&a.connection, t).unwrap(), &path, &seed).unwrap();
        prop_assert!((m(theta) - m(theta + PI)).norm() < 1e-12);
    }
}
