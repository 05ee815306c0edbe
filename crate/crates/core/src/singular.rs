//! Singular value decomposition through the symmetric eigenproblem of the
//! augmented matrix `[[0, A], [A^T, 0]]`, whose eigenpairs are
//! `(±σ_i, (u_i, ±v_i) / √2)`.
//!
//! The bidiagonal SVD shipped with nalgebra 0.35 returns wrong factors on a
//! few percent of rank-deficient inputs (recomposition errors of order one on
//! 10x4 matrices of rank 2), which are exactly the inputs rank tests and
//! orbit-tangent solves see. The augmented form keeps singular values to
//! absolute accuracy `eps |A|` without squaring them.

use alloc::vec::Vec;
use core::f64::consts::SQRT_2;

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, PartialEq)]
pub struct SingularTriplet {
    pub value: f64,
    pub left: DVector<f64>,
    pub right: DVector<f64>,
}

/// The `min(rows, cols)` largest singular triplets in decreasing order.
/// Vectors paired with (numerically) zero singular values are not meaningful.
pub fn singular_triplets(a: &DMatrix<f64>) -> Vec<SingularTriplet> {
    let (r, c) = a.shape();
    let mut aug = DMatrix::zeros(r + c, r + c);
    aug.view_mut((0, r), (r, c)).copy_from(a);
    aug.view_mut((r, 0), (c, r)).copy_from(&a.transpose());
    let eig = aug.symmetric_eigen();
    let mut order: Vec<usize> = (0..r + c).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    order
        .iter()
        .take(r.min(c))
        .map(|&i| {
            let w = eig.eigenvectors.column(i);
            SingularTriplet {
                value: eig.eigenvalues[i].max(0.0),
                left: w.rows(0, r) * SQRT_2,
                right: w.rows(r, c) * SQRT_2,
            }
        })
        .collect()
}

pub fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    singular_triplets(a).into_iter().map(|t| t.value).collect()
}

/// Number of singular values above `rel_tol` times the largest one.
pub fn numerical_rank(a: &DMatrix<f64>, rel_tol: f64) -> usize {
    let sv = singular_values(a);
    match sv.first() {
        Some(&max) if max > 0.0 => sv.iter().filter(|&&v| v > rel_tol * max).count(),
        _ => 0,
    }
}

/// Minimum-norm least-squares solution of `A x = b`, discarding singular
/// values at or below `rel_cut` times the largest. `None` for `A = 0`.
pub fn pseudo_solve(a: &DMatrix<f64>, b: &DVector<f64>, rel_cut: f64) -> Option<DVector<f64>> {
    let triplets = singular_triplets(a);
    let max = triplets.first()?.value;
    if max == 0.0 {
        return None;
    }
    let mut x = DVector::zeros(a.ncols());
    for t in triplets.iter().filter(|t| t.value > rel_cut * max) {
        x += &t.right * (t.left.dot(b) / t.value);
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_block_that_defeats_the_bidiagonal_svd() {
        let a = DMatrix::from_row_slice(
            3,
            2,
            &[
                0.023757532640028313,
                0.32910333130210895,
                -0.053228505232222494,
                -0.7373525970723571,
                -0.02114625290992911,
                -0.29293034687824104,
            ],
        );
        let t = singular_triplets(&a);
        assert!((t[0].value - a.norm()).abs() < 1e-15);
        assert!(t[1].value < 1e-15);
        let rec = &t[0].left * t[0].right.transpose() * t[0].value;
        assert!((rec - &a).norm() < 1e-15);
        assert_eq!(numerical_rank(&a, 1e-9), 1);
    }

    #[test]
    fn recomposes_full_rank_matrices() {
        let a = DMatrix::from_fn(5, 3, |i, j| {
            ((i * 7 + j * 3) % 5) as f64 - 1.5 + 0.1 * j as f64
        });
        let t = singular_triplets(&a);
        let mut rec = DMatrix::zeros(5, 3);
        for s in t.iter() {
            rec += &s.left * s.right.transpose() * s.value;
        }
        assert!((rec - &a).norm() < 1e-13);
        assert!(t.windows(2).all(|w| w[0].value >= w[1].value));
    }

    #[test]
    fn pseudo_solve_finds_the_minimum_norm_solution() {
        let a = DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        let b = DVector::from_vec(alloc::vec![2.0, -3.0]);
        let x = pseudo_solve(&a, &b, 1e-12).unwrap();
        assert!((x - DVector::from_vec(alloc::vec![2.0, -3.0, 0.0])).norm() < 1e-14);
        assert!(pseudo_solve(&DMatrix::zeros(2, 2), &b.rows(0, 2).into(), 1e-12).is_none());
    }
}
