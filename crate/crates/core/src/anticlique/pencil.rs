use alloc::vec;
use alloc::vec::Vec;

use super::{AnticliqueCertificate, AnticliqueMethod};
use crate::linalg::{eigh, ComplexMatrix, HermitianMatrix, OrthonormalFrame, C64};
use crate::opsys::make_system;
use crate::{OperatorSystem, Result, Tolerances};

/// `span(I_n, A)`.
pub fn single_matrix_system(a: &HermitianMatrix) -> Result<OperatorSystem> {
    make_system(a.n(), vec![a.matrix().clone()], "span(I, A)")
}

/// An anticlique of rank at least `ceil(n/2)` for `span(I_n, A)`.
///
/// With eigenvalues sorted, a target value `mu` is chosen among them; every
/// eigenvector for `mu` is used on its own, and eigenvalues below and above
/// `mu` are paired into `sqrt(alpha) v_low + sqrt(1 - alpha) v_high` with
/// `alpha lambda_low + (1 - alpha) lambda_high = mu`. The target maximizes
/// the resulting rank, which is exactly `ceil(n/2)` when the spectrum is
/// simple and grows by one for each extra eigenvalue equal to `mu`.
pub fn pencil_anticlique(a: &HermitianMatrix, tol: &Tolerances) -> Result<AnticliqueCertificate> {
    let system = single_matrix_system(a)?;
    let frame = pencil_frame(a)?;
    AnticliqueCertificate::issue(frame, &system, tol, AnticliqueMethod::Pencil)
}

pub(crate) fn pencil_frame(a: &HermitianMatrix) -> Result<OrthonormalFrame> {
    let n = a.n();
    let eig = eigh(a)?;
    let lam = &eig.values;
    let scale = lam.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let same = 1e-12 * scale;

    let mut best = (0usize, 0usize);
    for (idx, &mu) in lam.iter().enumerate() {
        let eq = lam.iter().filter(|&&x| (x - mu).abs() <= same).count();
        let below = lam.iter().filter(|&&x| x < mu - same).count();
        let above = lam.iter().filter(|&&x| x > mu + same).count();
        let size = eq + below.min(above);
        if size > best.1 {
            best = (idx, size);
        }
    }
    let mu = lam[best.0];
    let vecs = eig.vectors.columns();
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(best.1);
    let low: Vec<usize> = (0..n).filter(|&i| lam[i] < mu - same).collect();
    let high: Vec<usize> = (0..n).filter(|&i| lam[i] > mu + same).collect();
    for i in (0..n).filter(|&i| (lam[i] - mu).abs() <= same) {
        cols.push(vecs[i].clone());
    }
    for (&l, &h) in low.iter().zip(&high) {
        let alpha = (lam[h] - mu) / (lam[h] - lam[l]);
        let (sa, sb) = (alpha.sqrt(), (1.0 - alpha).sqrt());
        cols.push(vecs[l].iter().zip(&vecs[h]).map(|(x, y)| x * sa + y * sb).collect());
    }
    Ok(OrthonormalFrame::from_trusted(ComplexMatrix::from_columns(n, &cols)?))
}
