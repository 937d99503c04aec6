use alloc::vec::Vec;

use super::{ComplexMatrix, HermitianMatrix, OrthonormalFrame, C64};
use crate::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// Ascending eigenvalues with matching orthonormal eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: OrthonormalFrame,
}

/// Unitary `G = [[g00, g01], [g10, g11]]` with `G^* M G` diagonal for the
/// Hermitian `M = [[a, c], [conj(c), b]]`.
///
/// The phase of `c` is removed first, then a real Jacobi rotation finishes.
pub fn jacobi_rotation(a: f64, b: f64, c: C64) -> [C64; 4] {
    let r = c.norm();
    if r == 0.0 {
        return [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
    }
    let phase = (c / r).conj();
    let theta = (b - a) / (2.0 * r);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let cs = 1.0 / (t * t + 1.0).sqrt();
    let sn = t * cs;
    [C64::new(cs, 0.0), C64::new(sn, 0.0), phase * (-sn), phase * cs]
}

/// Hermitian eigendecomposition by cyclic complex Jacobi.
pub fn eigh(a: &HermitianMatrix) -> Result<EigenDecomposition> {
    let n = a.n();
    let mut m = a.matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm();
    let threshold = 1e-15 * scale / (n.max(1) as f64);

    let mut converged = n < 2 || scale == 0.0;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let c = m[(p, q)];
                if c.norm() <= threshold {
                    continue;
                }
                rotated = true;
                let g = jacobi_rotation(m[(p, p)].re, m[(q, q)].re, c);
                rotate_columns(&mut m, p, q, &g);
                rotate_rows_adjoint(&mut m, p, q, &g);
                m[(p, q)] = C64::new(0.0, 0.0);
                m[(q, p)] = C64::new(0.0, 0.0);
                m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
                rotate_columns(&mut v, p, q, &g);
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re).then(i.cmp(&j)));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(EigenDecomposition { values, vectors: OrthonormalFrame::from_trusted(vectors) })
}

/// `M <- M G` on columns `p`, `q`.
pub(crate) fn rotate_columns(m: &mut ComplexMatrix, p: usize, q: usize, g: &[C64; 4]) {
    for i in 0..m.rows() {
        let x = m[(i, p)];
        let y = m[(i, q)];
        m[(i, p)] = x * g[0] + y * g[2];
        m[(i, q)] = x * g[1] + y * g[3];
    }
}

/// `M <- G^* M` on rows `p`, `q`.
fn rotate_rows_adjoint(m: &mut ComplexMatrix, p: usize, q: usize, g: &[C64; 4]) {
    for j in 0..m.cols() {
        let x = m[(p, j)];
        let y = m[(q, j)];
        m[(p, j)] = g[0].conj() * x + g[2].conj() * y;
        m[(q, j)] = g[1].conj() * x + g[3].conj() * y;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{random_hermitian, stream};

    fn residual(a: &ComplexMatrix, e: &EigenDecomposition) -> f64 {
        let v = e.vectors.matrix();
        let av = a.matmul(v);
        let vl = ComplexMatrix::from_fn(v.rows(), v.cols(), |i, j| v[(i, j)] * e.values[j]);
        av.sub(&vl).frobenius_norm()
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let e = eigh(&HermitianMatrix::from_part(&ComplexMatrix::identity(3))).unwrap();
        assert_eq!(e.values, [1.0, 1.0, 1.0]);
        assert!(e.vectors.defect() < 1e-14);
    }

    #[test]
    fn diagonal_is_sorted_and_swapped() {
        let e = eigh(&HermitianMatrix::from_part(&ComplexMatrix::from_real_diag(&[2.0, -1.0]))).unwrap();
        assert_eq!(e.values, [-1.0, 2.0]);
        let v = e.vectors.matrix();
        assert!((v[(1, 0)].norm() - 1.0).abs() < 1e-15);
        assert!((v[(0, 1)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let mut rng = stream(7, 0);
        for n in [1, 2, 5, 9, 16] {
            let a = random_hermitian(&mut rng, n);
            let e = eigh(&a).unwrap();
            let scale = a.matrix().frobenius_norm();
            assert!(residual(a.matrix(), &e) < 1e-9 * scale, "n = {n}");
            assert!(e.vectors.defect() < 1e-10);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn repeated_eigenvalues_keep_an_orthonormal_frame() {
        let mut rng = stream(8, 0);
        let u = crate::rng::random_unitary(&mut rng, 6);
        let d = ComplexMatrix::from_real_diag(&[1.0, 1.0, 1.0, -2.0, -2.0, 0.5]);
        let a = HermitianMatrix::from_part(&u.matmul(&d).matmul(&u.adjoint()));
        let e = eigh(&a).unwrap();
        assert!(e.vectors.defect() < 1e-10);
        assert!(residual(a.matrix(), &e) < 1e-12);
        assert!((e.values[0] + 2.0).abs() < 1e-13 && (e.values[5] - 1.0).abs() < 1e-13);
    }
}
