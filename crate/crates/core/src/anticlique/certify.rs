use crate::linalg::{eigh, numerical_rank, ComplexMatrix, HermitianMatrix, Projection};
use crate::Tolerances;

/// Checks a no-`(k+1)`-anticlique certificate of the form
/// `span(P_1, ..., P_r)`: the projections sum to `I_n` and each has rank at
/// most `k`.
pub fn certify_no_anticlique_projsum(projections: &[Projection], k: usize, tol: &Tolerances) -> bool {
    let Some(first) = projections.first() else {
        return false;
    };
    let n = first.ambient_dim();
    if projections.iter().any(|p| p.ambient_dim() != n || p.rank() > k) {
        return false;
    }
    let mut total = ComplexMatrix::identity(n).scale_real(-1.0);
    for p in projections {
        total = total.add(&p.matrix());
    }
    total.frobenius_norm() <= tol.certify_tol
}

/// Checks a no-`(k+1)`-anticlique certificate of the form
/// `span(I_n, A_1, ..., A_r)`: each `A_i` is positive semidefinite of rank
/// at most `k` and `ker(sum A_i)` has dimension at most `k`.
pub fn certify_no_anticlique_generic(matrices: &[ComplexMatrix], k: usize, tol: &Tolerances) -> bool {
    let Some(first) = matrices.first() else {
        return false;
    };
    let n = first.rows();
    let mut total = ComplexMatrix::zeros(n, n);
    for a in matrices {
        if !a.is_square() || a.rows() != n {
            return false;
        }
        let Ok(h) = HermitianMatrix::new(a.clone(), tol.certify_tol) else {
            return false;
        };
        let Ok(eig) = eigh(&h) else {
            return false;
        };
        let scale = eig.values.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        if eig.values[0] < -tol.certify_tol * scale || numerical_rank(a, tol.certify_tol) > k {
            return false;
        }
        total = total.add(a);
    }
    n - numerical_rank(&total, tol.certify_tol) <= k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::OrthonormalFrame;
    use crate::rng::{random_matrix, random_unitary, stream};
    use alloc::vec;
    use alloc::vec::Vec;

    fn resolution(seed: u64, ranks: &[usize]) -> Vec<Projection> {
        let n: usize = ranks.iter().sum();
        let u = random_unitary(&mut stream(seed, 0), n);
        let mut start = 0;
        ranks
            .iter()
            .map(|&k| {
                start += k;
                Projection::new(OrthonormalFrame::new(u.column_range(start - k, start), 1e-10).unwrap())
            })
            .collect()
    }

    #[test]
    fn projsum_checks() {
        let tol = Tolerances::default();
        for (n, k) in [(6usize, 2usize), (7, 3), (5, 1)] {
            let r = n.div_ceil(k);
            let mut ranks = vec![k; r - 1];
            ranks.push(n - k * (r - 1));
            assert!(certify_no_anticlique_projsum(&resolution(n as u64, &ranks), k, &tol));
        }
        let mut ps = resolution(1, &[2, 2, 2]);
        ps.pop();
        assert!(!certify_no_anticlique_projsum(&ps, 2, &tol));
        assert!(!certify_no_anticlique_projsum(&resolution(2, &[3, 2, 1]), 2, &tol));
    }

    #[test]
    fn generic_checks() {
        let tol = Tolerances::default();
        let ps: Vec<ComplexMatrix> = resolution(3, &[2, 2, 2]).iter().map(Projection::matrix).collect();
        assert!(certify_no_anticlique_generic(&ps, 2, &tol));

        let mut bad = ps.clone();
        bad[0] = bad[0].scale_real(-1.0);
        assert!(!certify_no_anticlique_generic(&bad, 2, &tol));

        // two random rank-2 positives in M_6: kernel of the sum has dim 2
        let mut rng = stream(4, 0);
        let pos: Vec<ComplexMatrix> = (0..2)
            .map(|_| {
                let g = random_matrix(&mut rng, 6, 2);
                g.matmul(&g.adjoint())
            })
            .collect();
        assert!(certify_no_anticlique_generic(&pos, 2, &tol));
        assert!(!certify_no_anticlique_generic(&pos[..1], 2, &tol));
    }
}
