//! Small fixed-size linear algebra used throughout: vectors of `R^5`, frames
//! in `O(5)`, deterministic reductions.

use nalgebra::{SMatrix, SVector};
#[allow(unused_imports)]
use num_traits::Float;

pub type Vec5 = SVector<f64, 5>;
pub type Mat5 = SMatrix<f64, 5, 5>;

/// Sum with a fixed binary-tree order, so reported digits never depend on
/// how a reduction was scheduled.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        let mut s = 0.0;
        for v in values {
            s += v;
        }
        return s;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Maximum of a slice, ignoring nothing: NaN propagates as NaN.
pub fn max_of(values: &[f64]) -> f64 {
    let mut m = f64::NEG_INFINITY;
    for &v in values {
        if v.is_nan() {
            return f64::NAN;
        }
        if v > m {
            m = v;
        }
    }
    m
}

pub fn max_abs(values: &[f64]) -> f64 {
    let mut m = 0.0_f64;
    for &v in values {
        if v.is_nan() {
            return f64::NAN;
        }
        m = m.max(v.abs());
    }
    m
}

/// One Newton–Schulz step towards the orthogonal polar factor,
/// `X <- X (3I - XᵀX) / 2`. Converges quadratically for near-orthogonal `X`.
pub fn newton_schulz_step(x: &Mat5) -> Mat5 {
    let xtx = x.transpose() * x;
    x * (Mat5::identity() * 3.0 - xtx) * 0.5
}

/// Orthogonal polar factor of a near-orthogonal matrix.
///
/// Iterates Newton–Schulz until `‖XᵀX − I‖_F < 1e-15`; falls back to the SVD
/// factor `U Vᵀ` when the input is too far from `O(5)` to converge.
pub fn polar_orthonormalize(x: &Mat5) -> Mat5 {
    let mut y = *x;
    for _ in 0..8 {
        let defect = orthogonality_defect(&y);
        if defect < 1e-15 {
            return y;
        }
        if defect > 0.5 {
            break;
        }
        y = newton_schulz_step(&y);
    }
    if orthogonality_defect(&y) < 1e-13 {
        return y;
    }
    orthogonal_polar(x).0
}

/// Eigen-decomposition `S = V diag(λ) Vᵀ` of a symmetric matrix by cyclic
/// Jacobi rotations, eigenvalues in decreasing order.
pub fn symmetric_eigen(s: &Mat5) -> (Vec5, Mat5) {
    let mut a = (s + s.transpose()) * 0.5;
    let mut v = Mat5::identity();
    let scale = a.norm().max(f64::MIN_POSITIVE);
    for _ in 0..64 {
        let mut off = 0.0;
        for p in 0..5 {
            for q in (p + 1)..5 {
                off += a[(p, q)] * a[(p, q)];
            }
        }
        if off.sqrt() <= 1e-17 * scale {
            break;
        }
        for p in 0..5 {
            for q in (p + 1)..5 {
                let apq = a[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..5 {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - sn * akq;
                    a[(k, q)] = sn * akp + c * akq;
                }
                for k in 0..5 {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - sn * aqk;
                    a[(q, k)] = sn * apk + c * aqk;
                }
                for k in 0..5 {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + c * vkq;
                }
            }
        }
    }
    let mut order = [0usize, 1, 2, 3, 4];
    order.sort_by(|&x, &y| a[(y, y)].total_cmp(&a[(x, x)]));
    let vals = Vec5::from_fn(|k, _| a[(order[k], order[k])]);
    let vecs = Mat5::from_fn(|r, c| v[(r, order[c])]);
    (vals, vecs)
}

/// Orthogonal polar factor `U Vᵀ` of `c = U Σ Vᵀ` and the numerical rank of
/// `c`. On a rank-deficient `c` the factor is completed on the null space
/// so that its determinant is `+1`.
pub fn orthogonal_polar(c: &Mat5) -> (Mat5, usize) {
    let (lam, v) = symmetric_eigen(&(c.transpose() * c));
    let smax = lam[0].max(0.0).sqrt();
    let mut u = Mat5::zeros();
    let mut rank = 0;
    for k in 0..5 {
        let sigma = lam[k].max(0.0).sqrt();
        if sigma > 1e-10 * smax && smax > 0.0 {
            let col = c * v.column(k) / sigma;
            u.set_column(k, &col);
            rank += 1;
        }
    }
    // Complete U by Gram–Schmidt against the coordinate axes.
    let mut next_axis = 0;
    for k in rank..5 {
        loop {
            let mut w = Vec5::zeros();
            w[next_axis] = 1.0;
            next_axis += 1;
            for m in 0..k {
                let um = u.column(m).into_owned();
                w -= um * um.dot(&w);
            }
            if w.norm() > 1e-6 {
                u.set_column(k, &w.normalize());
                break;
            }
        }
    }
    let mut q = polar_cleanup(&(u * v.transpose()));
    if rank < 5 && q.determinant() < 0.0 {
        let last = u.column(4).into_owned();
        u.set_column(4, &(-last));
        q = polar_cleanup(&(u * v.transpose()));
    }
    (q, rank)
}

fn polar_cleanup(x: &Mat5) -> Mat5 {
    let mut y = *x;
    for _ in 0..3 {
        y = newton_schulz_step(&y);
    }
    y
}

/// `‖XᵀX − I‖_F`.
pub fn orthogonality_defect(x: &Mat5) -> f64 {
    (x.transpose() * x - Mat5::identity()).norm()
}

/// `‖M − I‖_F`. Invariant under `M -> A M Aᵀ` for orthogonal `A`.
pub fn identity_distance(m: &Mat5) -> f64 {
    (m - Mat5::identity()).norm()
}

/// Matrix whose columns are the five given vectors.
pub fn from_columns(cols: [&Vec5; 5]) -> Mat5 {
    Mat5::from_columns(&[*cols[0], *cols[1], *cols[2], *cols[3], *cols[4]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn rotation(seed: u64) -> Mat5 {
        // Product of plane rotations with deterministic angles.
        let mut m = Mat5::identity();
        let mut s = seed as f64 * 0.37 + 0.1;
        for a in 0..5 {
            for b in (a + 1)..5 {
                s = (s * 1.618_033_988_75 + 0.5).fract();
                let t = (s - 0.5) * 6.0;
                let mut r = Mat5::identity();
                r[(a, a)] = t.cos();
                r[(b, b)] = t.cos();
                r[(a, b)] = -t.sin();
                r[(b, a)] = t.sin();
                m *= r;
            }
        }
        m
    }

    #[test]
    fn pairwise_sum_matches_naive_on_integers() {
        let v: Vec<f64> = (0..1000).map(|k| k as f64).collect();
        assert_eq!(pairwise_sum(&v), 499_500.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn polar_recovers_rotation_from_perturbation() {
        let r = rotation(3);
        let mut noisy = r;
        noisy[(1, 2)] += 1e-6;
        noisy[(4, 0)] -= 2e-6;
        let q = polar_orthonormalize(&noisy);
        assert!(orthogonality_defect(&q) < 1e-14);
        assert!((q - r).norm() < 1e-5);
    }

    #[test]
    fn symmetric_eigen_reconstructs() {
        let r = rotation(5);
        let d = Mat5::from_diagonal(&Vec5::new(5.0, 3.0, 3.0, 1.0, -2.0));
        let s = r * d * r.transpose();
        let (lam, v) = symmetric_eigen(&s);
        assert!((v * Mat5::from_diagonal(&lam) * v.transpose() - s).norm() < 1e-12);
        assert!((lam[0] - 5.0).abs() < 1e-12 && (lam[4] + 2.0).abs() < 1e-12);
        assert!(orthogonality_defect(&v) < 1e-13);
    }

    #[test]
    fn polar_of_scaled_rotation_and_of_rank_deficient_input() {
        let r = rotation(9);
        let (q, rank) = orthogonal_polar(&(r * Mat5::from_diagonal(&Vec5::new(4.0, 3.0, 2.0, 1.0, 0.5))));
        assert_eq!(rank, 5);
        assert!((q - r).norm() < 1e-12);
        let mut p = Mat5::identity();
        p[(4, 4)] = 0.0;
        let (q, rank) = orthogonal_polar(&(r * p));
        assert_eq!(rank, 4);
        assert!(orthogonality_defect(&q) < 1e-13);
        assert!((q.determinant() - 1.0).abs() < 1e-12);
        for k in 0..4 {
            assert!((q.column(k) - r.column(k)).norm() < 1e-10);
        }
    }

    #[test]
    fn identity_distance_is_conjugation_invariant() {
        let m = rotation(7);
        let a = rotation(11);
        let conj = a * m * a.transpose();
        assert!((identity_distance(&m) - identity_distance(&conj)).abs() < 1e-13);
    }
}
