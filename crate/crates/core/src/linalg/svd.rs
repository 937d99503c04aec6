use alloc::vec::Vec;

use super::eigen::rotate_columns;
use super::{jacobi_rotation, ComplexMatrix, C64, ZERO};

const MAX_SWEEPS: usize = 80;

/// Thin SVD `X = U diag(values) W^*` from one-sided Jacobi.
///
/// `values` is descending and has one entry per column of `X`; `left`
/// holds the normalized columns (zero where the singular value vanishes)
/// and `right` the accumulated unitary.
#[derive(Debug, Clone)]
pub struct Svd {
    pub values: Vec<f64>,
    pub left: ComplexMatrix,
    pub right: ComplexMatrix,
}

impl Svd {
    /// Columns of `right` whose singular value is at most `tol * sigma_max`:
    /// an orthonormal basis of the numerical kernel.
    pub fn kernel(&self, tol: f64) -> Vec<Vec<C64>> {
        let top = self.values.first().copied().unwrap_or(0.0);
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s <= tol * top || top == 0.0)
            .map(|(j, _)| self.right.column(j))
            .collect()
    }
}

/// One-sided (Hestenes) Jacobi SVD.
pub fn svd(x: &ComplexMatrix) -> Svd {
    let cols = x.cols();
    let mut a = x.clone();
    let mut w = ComplexMatrix::identity(cols);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        let mut sq: Vec<f64> = (0..cols).map(|j| column_sq(&a, j)).collect();
        for p in 0..cols.saturating_sub(1) {
            for q in p + 1..cols {
                let alpha = sq[p];
                let beta = sq[q];
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = column_dot(&a, p, q);
                if gamma.norm() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let g = jacobi_rotation(alpha, beta, gamma);
                rotate_columns(&mut a, p, q, &g);
                rotate_columns(&mut w, p, q, &g);
                sq[p] = column_sq(&a, p);
                sq[q] = column_sq(&a, q);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut values: Vec<(f64, usize)> = (0..cols).map(|j| (column_sq(&a, j).sqrt(), j)).collect();
    values.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
    let left = ComplexMatrix::from_fn(a.rows(), cols, |i, j| {
        let (s, src) = values[j];
        if s > 0.0 {
            a[(i, src)] / s
        } else {
            ZERO
        }
    });
    let right = ComplexMatrix::from_fn(cols, cols, |i, j| w[(i, values[j].1)]);
    Svd { values: values.into_iter().map(|(s, _)| s).collect(), left, right }
}

fn column_dot(a: &ComplexMatrix, p: usize, q: usize) -> C64 {
    (0..a.rows()).fold(ZERO, |acc, i| acc + a[(i, p)].conj() * a[(i, q)])
}

fn column_sq(a: &ComplexMatrix, p: usize) -> f64 {
    (0..a.rows()).map(|i| a[(i, p)].norm_sqr()).sum()
}

/// Singular values, descending, of any shape (runs on the thinner side).
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let mut s = if a.cols() <= a.rows() { svd(a).values } else { svd(&a.adjoint()).values };
    s.truncate(a.rows().min(a.cols()));
    s
}

/// Number of singular values above `tol * sigma_max`; zero for the zero matrix.
pub fn numerical_rank(a: &ComplexMatrix, tol: f64) -> usize {
    let s = singular_values(a);
    let top = s.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > tol * top).count()
}

/// Rank of the Gram matrix `<v_i, v_j>`, used as an independent oracle in tests.
#[cfg(test)]
pub(crate) fn gram_rank(vectors: &[Vec<C64>], tol: f64) -> usize {
    let k = vectors.len();
    let g = ComplexMatrix::from_fn(k, k, |i, j| super::dot(&vectors[i], &vectors[j]));
    let e = super::eigh(&super::HermitianMatrix::from_part(&g)).unwrap();
    let top = e.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    e.values.iter().filter(|&&v| v > tol * top).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{norm, ONE};
    use crate::rng::{random_matrix, random_unitary, stream};
    use proptest::prelude::*;

    #[test]
    fn zero_and_rank_one() {
        assert_eq!(numerical_rank(&ComplexMatrix::zeros(4, 4), 1e-10), 0);
        let v = [C64::new(1.0, 2.0), C64::new(-0.5, 0.0), C64::new(0.0, 3.0)];
        let outer = ComplexMatrix::from_fn(3, 3, |i, j| v[i] * v[j].conj());
        assert_eq!(numerical_rank(&outer, 1e-10), 1);
    }

    #[test]
    fn vectorized_span_of_identity_and_off_diagonal_units() {
        // columns: vec(I_2), vec(E_12), vec(E_21)
        let cols = [
            alloc::vec![ONE, ZERO, ZERO, ONE],
            alloc::vec![ZERO, ONE, ZERO, ZERO],
            alloc::vec![ZERO, ZERO, ONE, ZERO],
        ];
        let m = ComplexMatrix::from_columns(4, &cols).unwrap();
        assert_eq!(gram_rank(&cols, 1e-10), 3);
        assert_eq!(numerical_rank(&m, 1e-10), 3);
    }

    #[test]
    fn reconstructs_random_matrix() {
        let mut rng = stream(3, 0);
        let x = random_matrix(&mut rng, 6, 4);
        let s = svd(&x);
        let us = ComplexMatrix::from_fn(6, 4, |i, j| s.left[(i, j)] * s.values[j]);
        let rec = us.matmul(&s.right.adjoint());
        assert!(rec.sub(&x).frobenius_norm() < 1e-12 * x.frobenius_norm());
    }

    #[test]
    fn kernel_of_wide_matrix() {
        let mut rng = stream(4, 0);
        let x = random_matrix(&mut rng, 2, 5);
        let s = svd(&x);
        let ker = s.kernel(1e-10);
        assert_eq!(ker.len(), 3);
        for v in ker {
            assert!(norm(&x.mul_vec(&v)) < 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn rank_is_unitarily_invariant(seed in any::<u64>(), n in 1usize..=8, r in 0usize..=8) {
            let r = r.min(n);
            let mut rng = stream(seed, 0);
            let a = random_matrix(&mut rng, n, r);
            let b = random_matrix(&mut rng, r, n);
            let m = if r == 0 { ComplexMatrix::zeros(n, n) } else { a.matmul(&b) };
            let u = random_unitary(&mut rng, n);
            let w = random_unitary(&mut rng, n);
            let rotated = u.matmul(&m).matmul(&w);
            prop_assert_eq!(numerical_rank(&m, 1e-9), r);
            prop_assert_eq!(numerical_rank(&rotated, 1e-9), r);
        }
    }
}
