use alloc::vec;
use alloc::vec::Vec;

use super::pencil::pencil_frame;
use super::{AnticliqueCertificate, AnticliqueMethod};
use crate::linalg::{eigh, ComplexMatrix, HermitianMatrix, OrthonormalFrame, C64};
use crate::opsys::make_system;
use crate::su2::{solve, Rank2Problem};
use crate::{Error, Result, Tolerances};

/// Which branch of the `M_4` construction produced a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum M4Case {
    /// Eigenvalue of multiplicity three: a pencil inside the eigenspace.
    Triple,
    /// The other two eigenvalues (relative to the repeated one) have
    /// opposite signs: a pencil on a 3-dimensional null compression of `A`.
    OppositeSigns,
    /// Same signs: the `SU(2)` solver.
    SameSign,
}

impl M4Case {
    pub fn as_str(self) -> &'static str {
        match self {
            M4Case::Triple => "triple",
            M4Case::OppositeSigns => "opposite-signs",
            M4Case::SameSign => "same-sign",
        }
    }
}

/// A quantum 2-anticlique for `span(I_4, A, B)` when the Hermitian `A` has a
/// repeated eigenvalue (gap at most `mult_tol * max(1, ||A||)`).
pub fn m4_anticlique(a: &HermitianMatrix, b: &HermitianMatrix, tol: &Tolerances) -> Result<(AnticliqueCertificate, M4Case)> {
    if a.n() != 4 || b.n() != 4 {
        return Err(Error::ShapeMismatch(alloc::string::String::from("A and B must be 4x4")));
    }
    let system = make_system(4, vec![a.matrix().clone(), b.matrix().clone()], "span(I, A, B)")?;
    let eig = eigh(a)?;
    let lam = &eig.values;
    let scale = lam.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let gaps: Vec<f64> = lam.windows(2).map(|w| w[1] - w[0]).collect();
    let (i, gap) = gaps
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (j, g)| if g < best.1 { (j, g) } else { best });
    if gap > tol.mult_tol * scale {
        return Err(Error::NoRepeatedEigenvalue);
    }
    let mu = 0.5 * (lam[i] + lam[i + 1]);
    let cols = eig.vectors.columns();
    let near = |j: usize| (lam[j] - mu).abs() <= tol.mult_tol * scale;
    let repeated: Vec<usize> = (0..4).filter(|&j| j == i || j == i + 1 || near(j)).collect();
    let others: Vec<usize> = (0..4).filter(|j| !repeated.contains(j)).collect();

    let (frame, case) = if repeated.len() >= 3 {
        let w = frame_of(&repeated.iter().take(3).map(|&j| cols[j].clone()).collect::<Vec<_>>())?;
        (through_pencil(&w, b)?, M4Case::Triple)
    } else {
        let (p, q) = (others[0], others[1]);
        let (x, y) = (lam[p] - mu, lam[q] - mu);
        if x * y < 0.0 {
            let (pos, neg, ap, bn) = if x > 0.0 { (p, q, x, -y) } else { (q, p, y, -x) };
            let (wp, wn) = ((bn / (ap + bn)).sqrt(), (ap / (ap + bn)).sqrt());
            let w0: Vec<C64> = cols[pos].iter().zip(&cols[neg]).map(|(u, v)| u * wp + v * wn).collect();
            let w = frame_of(&[w0, cols[repeated[0]].clone(), cols[repeated[1]].clone()])?;
            (through_pencil(&w, b)?, M4Case::OppositeSigns)
        } else {
            let (small, large) = if x.abs() <= y.abs() { (p, q) } else { (q, p) };
            let ratio = (lam[large] - mu) / (lam[small] - mu);
            let basis = frame_of(&[
                cols[small].clone(),
                cols[large].clone(),
                cols[repeated[0]].clone(),
                cols[repeated[1]].clone(),
            ])?;
            (same_sign_frame(&basis, b, ratio.max(1.0), tol)?, M4Case::SameSign)
        }
    };
    Ok((AnticliqueCertificate::issue(frame, &system, tol, AnticliqueMethod::M4)?, case))
}

fn frame_of(cols: &[Vec<C64>]) -> Result<OrthonormalFrame> {
    Ok(OrthonormalFrame::from_trusted(ComplexMatrix::from_columns(4, cols)?))
}

/// A rank-2 pencil anticlique of `W^* B W` lifted through `W`.
fn through_pencil(w: &OrthonormalFrame, b: &HermitianMatrix) -> Result<OrthonormalFrame> {
    let inner = pencil_frame(&HermitianMatrix::from_part(&b.matrix().congruence(w.matrix())))?;
    Ok(w.lift(&inner.truncate(2)))
}

/// In the basis `[u_small, u_large, u_0, u_0']`, where `A` becomes
/// `diag(1, a, 0, 0)` after shifting and scaling, the frame `[S; U^* C]`.
fn same_sign_frame(basis: &OrthonormalFrame, b: &HermitianMatrix, a: f64, tol: &Tolerances) -> Result<OrthonormalFrame> {
    let bb = b.matrix().congruence(basis.matrix());
    let block = |r: usize, c: usize| ComplexMatrix::from_fn(2, 2, |i, j| bb[(r + i, c + j)]);
    let problem = Rank2Problem::new(
        HermitianMatrix::from_part(&block(0, 0)),
        block(2, 0),
        HermitianMatrix::from_part(&block(2, 2)),
        a,
    )?;
    let sol = solve(&problem, tol.solver_tol)?;
    let l = sol.lambda;
    let s = [l.sqrt(), (l / a).sqrt()];
    let c = [(1.0 - l).sqrt(), (1.0 - l / a).max(0.0).sqrt()];
    let u = sol.u.matrix();
    // rows 0..2: S; rows 2..4: U^* C
    let x = ComplexMatrix::from_fn(4, 2, |i, j| {
        if i < 2 {
            if i == j {
                C64::new(s[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        } else {
            u[(j, i - 2)].conj() * c[j]
        }
    });
    Ok(basis.lift(&OrthonormalFrame::from_trusted(x)))
}
