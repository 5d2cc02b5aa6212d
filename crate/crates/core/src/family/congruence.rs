use crate::grid::Field;
use crate::linalg::{orthogonal_polar, Mat5, Vec5};
use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Best ambient isometry carrying one sampled surface onto another.
#[derive(Debug, Clone, PartialEq)]
pub struct Congruence {
    /// `A ∈ O(5)` minimising `Σ |A a − b|²`.
    pub isometry: Mat5,
    /// Root mean square of `|A a − b|` over the nodes.
    pub residual: f64,
    /// `det A`: `+1` for a rotation, `−1` when a reflection is needed.
    pub determinant: f64,
    /// Numerical rank of the cross-covariance.
    pub rank: usize,
    /// Rank below five: `A` is only determined on the spanned subspace
    /// (e.g. both surfaces lie in a great `S³`).
    pub degenerate: bool,
}

/// Orthogonal Procrustes fit of `b ≈ A a` through the polar factor of the
/// cross-covariance `Σ b aᵀ`.
pub fn congruence_test(a: &Field<Vec5>, b: &Field<Vec5>) -> Result<Congruence> {
    if a.patch() != b.patch() {
        return Err(Error::ShapeMismatch { expected: a.values().len(), got: b.values().len() });
    }
    let mut c = Mat5::zeros();
    for (x, y) in a.values().iter().zip(b.values()) {
        c += y * x.transpose();
    }
    let (isometry, rank) = orthogonal_polar(&c);
    let mut sum = 0.0;
    for (x, y) in a.values().iter().zip(b.values()) {
        sum += (isometry * x - y).norm_squared();
    }
    let residual = (sum / a.values().len() as f64).sqrt();
    Ok(Congruence { determinant: isometry.determinant(), isometry, residual, rank, degenerate: rank < 5 })
}
