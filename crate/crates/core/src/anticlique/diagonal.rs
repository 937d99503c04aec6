use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::tverberg::tverberg_partition;
use super::{ceil_div, AnticliqueCertificate, AnticliqueMethod};
use crate::linalg::{complement_frame, eigh, orthonormalize, ComplexMatrix, HermitianMatrix, OrthonormalFrame, C64};
use crate::opsys::compress;
use crate::{CompressedSystem, Error, OperatorSystem, Result, Tolerances};

/// A rank-`k` anticlique for a system of diagonal matrices with
/// `(k-1) d + 1 <= n`.
///
/// The diagonals, with the identity direction projected out, give `n`
/// points in `R^m` (`m <= d - 1`); a Tverberg partition into `k` blocks
/// with weights `mu_j` yields `v_l = sum_{j in S_l} sqrt(mu_j) e_j`.
pub fn diagonal_anticlique(v: &OperatorSystem, k: usize, tol: &Tolerances) -> Result<AnticliqueCertificate> {
    let frame = diagonal_frame(v, k, tol)?;
    AnticliqueCertificate::issue(frame, v, tol, AnticliqueMethod::Diagonal)
}

fn diagonal_frame(v: &OperatorSystem, k: usize, tol: &Tolerances) -> Result<OrthonormalFrame> {
    let n = v.n();
    let d = v.dimension();
    let defect = v.off_diagonal_mass();
    if defect > tol.certify_tol {
        return Err(Error::NotDiagonal { defect });
    }
    if k == 0 || (k - 1) * d + 1 > n {
        return Err(Error::BoundViolated(format!("(k-1)d+1 = {} > n = {n}", (k.max(1) - 1) * d + 1)));
    }
    let ones = vec![C64::new(1.0, 0.0); n];
    let mut vecs = vec![ones];
    vecs.extend(v.basis().iter().map(|b| b.diagonal().iter().map(|z| C64::new(z.re, 0.0)).collect()));
    let span = orthonormalize(&vecs, 1e-10)?;
    let dirs: Vec<Vec<f64>> = span.columns()[1..].iter().map(|c| c.iter().map(|z| z.re).collect()).collect();
    let points: Vec<Vec<f64>> = (0..n).map(|j| dirs.iter().map(|x| x[j]).collect()).collect();
    let part = tverberg_partition(&points, k, tol.lp_tol)?;
    let cols: Vec<Vec<C64>> = part
        .blocks
        .iter()
        .map(|block| {
            let mut c = vec![C64::new(0.0, 0.0); n];
            block.iter().for_each(|&j| c[j] = C64::new(part.weights[j].max(0.0).sqrt(), 0.0));
            c
        })
        .collect();
    Ok(OrthonormalFrame::from_trusted(ComplexMatrix::from_columns(n, &cols)?))
}

/// Orthonormal `v_1, ..., v_r` with `<B v_i, v_j> = 0` for `i != j` and all
/// `B` in the system, so that compressing by them leaves only diagonal
/// matrices.
///
/// Each `v_{j+1}` is a lowest eigenvector of `A_2` compressed to the
/// orthogonal complement of `E_1 + ... + E_j`, `E_i = V v_i`; it then adds
/// at most `d - 1` new directions, so `r >= ceil(n/(d-1))`. `A_2` is the
/// basis element farthest from the scalars.
pub fn compress_to_diagonal(v: &OperatorSystem, tol: &Tolerances) -> Result<(OrthonormalFrame, CompressedSystem)> {
    let n = v.n();
    let d = v.dimension();
    if d < 2 {
        return Err(Error::DegenerateSystem { dim: d });
    }
    let a2 = v
        .basis()
        .iter()
        .map(|b| {
            let shift = b.trace() / n as f64;
            let mut c = b.clone();
            c.axpy(-shift, &ComplexMatrix::identity(n));
            c
        })
        .fold((ComplexMatrix::zeros(n, n), -1.0), |best, c| {
            let s = c.frobenius_norm();
            if s > best.1 {
                (c, s)
            } else {
                best
            }
        })
        .0;

    let mut chosen: Vec<Vec<C64>> = Vec::new();
    let mut covered: Option<OrthonormalFrame> = None;
    loop {
        let c = match &covered {
            None => OrthonormalFrame::coordinate(n, &(0..n).collect::<Vec<_>>()),
            Some(w) if w.rank() >= n => break,
            Some(w) => complement_frame(w)?,
        };
        let local = HermitianMatrix::from_part(&a2.congruence(c.matrix()));
        let y = eigh(&local)?.vectors.column(0);
        let vj = c.matrix().mul_vec(&y);
        let mut span = covered.as_ref().map(OrthonormalFrame::columns).unwrap_or_default();
        span.push(vj.clone());
        for b in v.basis() {
            let image = b.mul_vec(&vj);
            let coeffs = c.matrix().adjoint().mul_vec(&image);
            span.push(c.matrix().mul_vec(&coeffs));
        }
        covered = Some(orthonormalize(&span, 1e-10)?);
        chosen.push(vj);
    }
    let frame = OrthonormalFrame::from_trusted(ComplexMatrix::from_columns(n, &chosen)?);
    let compressed = compress(v, &frame, tol)?;
    Ok((frame, compressed))
}

/// A rank-`k` anticlique whenever `(k-1) d + 1 <= ceil(n/(d-1))`:
/// compress to a diagonal system, apply [`diagonal_anticlique`] there, and
/// lift back.
pub fn anticlique_pipeline(v: &OperatorSystem, k: usize, tol: &Tolerances) -> Result<AnticliqueCertificate> {
    let n = v.n();
    let d = v.dimension();
    if d < 2 {
        if k == 0 || k > n {
            return Err(Error::BoundViolated(format!("k = {k} in M_{n}")));
        }
        let frame = OrthonormalFrame::coordinate(n, &(0..k).collect::<Vec<_>>());
        return AnticliqueCertificate::issue(frame, v, tol, AnticliqueMethod::Pipeline);
    }
    let bound = ceil_div(n, d - 1);
    if k == 0 || (k - 1) * d + 1 > bound {
        return Err(Error::BoundViolated(format!("(k-1)d+1 = {} > ceil(n/(d-1)) = {bound}", (k.max(1) - 1) * d + 1)));
    }
    let (frame, compressed) = compress_to_diagonal(v, tol)?;
    let inner = diagonal_frame(&compressed.system, k, tol)?;
    AnticliqueCertificate::issue(frame.lift(&inner), v, tol, AnticliqueMethod::Pipeline)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anticlique::{frame_criterion, pencil_anticlique};
    use crate::opsys::{diagonal_system, make_system};
    use crate::rng::{gaussian, random_hermitian, stream};
    use proptest::prelude::*;

    fn diag_system(n: usize, rows: &[Vec<f64>]) -> OperatorSystem {
        make_system(n, rows.iter().map(|r| ComplexMatrix::from_real_diag(r)).collect(), "diag").unwrap()
    }

    #[test]
    fn scalars_accept_any_rank() {
        let v = make_system(4, vec![], "").unwrap();
        let c = diagonal_anticlique(&v, 4, &Tolerances::default()).unwrap();
        assert!(c.is_valid() && c.rank() == 4);
    }

    #[test]
    fn rank_one_from_three_diagonals() {
        let v = diag_system(4, &[vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 1.0, 0.0, 0.0]]);
        let c = diagonal_anticlique(&v, 1, &Tolerances::default()).unwrap();
        assert!(c.is_valid() && c.rank() == 1);
    }

    #[test]
    fn collinear_diagonal_matches_the_pencil() {
        let tol = Tolerances::default();
        let a = vec![0.0, 5.0, 10.0];
        let v = diag_system(3, core::slice::from_ref(&a));
        let c = diagonal_anticlique(&v, 2, &tol).unwrap();
        assert!(c.is_valid());
        let p = pencil_anticlique(&HermitianMatrix::from_part(&ComplexMatrix::from_real_diag(&a)), &tol).unwrap();
        let pa = c.frame.projection().matrix();
        let pb = p.frame.projection().matrix();
        assert!(pa.sub(&pb).frobenius_norm() < 1e-12);
    }

    #[test]
    fn errors() {
        let tol = Tolerances::default();
        assert!(matches!(diagonal_anticlique(&diagonal_system(4).unwrap(), 2, &tol), Err(Error::BoundViolated(_))));
        let mut rng = stream(3, 0);
        let v = make_system(3, vec![random_hermitian(&mut rng, 3).into_matrix()], "").unwrap();
        assert!(matches!(diagonal_anticlique(&v, 1, &tol), Err(Error::NotDiagonal { .. })));
        assert!(matches!(compress_to_diagonal(&make_system(3, vec![], "").unwrap(), &tol), Err(Error::DegenerateSystem { dim: 1 })));
    }

    #[test]
    fn distinct_diagonal_gives_singletons() {
        let tol = Tolerances::default();
        let v = diag_system(5, &[vec![0.3, -1.0, 2.0, 7.0, 4.5]]);
        let (f, c) = compress_to_diagonal(&v, &tol).unwrap();
        assert_eq!(f.rank(), 5);
        assert!(c.system.off_diagonal_mass() < 1e-10);
    }

    #[test]
    fn single_matrix_with_simple_spectrum() {
        let tol = Tolerances::default();
        let mut rng = stream(4, 0);
        let v = make_system(5, vec![random_hermitian(&mut rng, 5).into_matrix()], "").unwrap();
        let (f, c) = compress_to_diagonal(&v, &tol).unwrap();
        assert_eq!(f.rank(), 5);
        assert!(f.defect() < 1e-10);
        assert!(c.system.off_diagonal_mass() < tol.certify_tol);
    }

    #[test]
    fn pipeline_examples() {
        let tol = Tolerances::default();
        let mut rng = stream(5, 0);
        for (n, d, k) in [(3, 2, 2), (7, 2, 4), (25, 3, 2)] {
            let gens = (0..d - 1).map(|_| random_hermitian(&mut rng, n).into_matrix()).collect();
            let v = make_system(n, gens, "").unwrap();
            let c = anticlique_pipeline(&v, k, &tol).unwrap();
            assert!(c.is_valid() && c.residual <= 1e-8, "{n} {d} {k}: {:?}", c.check);
            assert_eq!(c.rank(), k);
            assert!(frame_criterion(&c.frame.columns(), &v, &tol).unwrap());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn compression_is_diagonal_and_long(seed in any::<u64>(), n in 2usize..=16, d in 2usize..=4) {
            let tol = Tolerances::default();
            let mut rng = stream(seed, 0);
            let gens = (0..d - 1).map(|_| random_hermitian(&mut rng, n).into_matrix()).collect();
            let v = make_system(n, gens, "").unwrap();
            let d = v.dimension();
            let (f, c) = compress_to_diagonal(&v, &tol).unwrap();
            prop_assert!(f.rank() >= n.div_ceil(d - 1));
            prop_assert!(c.system.off_diagonal_mass() <= tol.certify_tol);
        }

        #[test]
        fn random_diagonal_systems(seed in any::<u64>(), n in 1usize..=12, d in 1usize..=5, k in 1usize..=4) {
            let tol = Tolerances::default();
            let mut rng = stream(seed, 1);
            let rows: Vec<Vec<f64>> = (0..d - 1).map(|_| (0..n).map(|_| gaussian(&mut rng)).collect()).collect();
            let v = diag_system(n, &rows);
            prop_assume!((k - 1) * v.dimension() + 1 <= n);
            let c = diagonal_anticlique(&v, k, &tol).unwrap();
            prop_assert!(c.is_valid() && c.residual <= 1e-8);
        }
    }
}
