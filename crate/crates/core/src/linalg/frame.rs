use alloc::format;
use alloc::vec::Vec;

use super::{dot, norm, ComplexMatrix, C64, ONE, ZERO};
use crate::{Error, Result};

/// An `n x k` isometry; its columns are an orthonormal basis of a
/// `k`-dimensional subspace of `C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalFrame {
    mat: ComplexMatrix,
}

impl OrthonormalFrame {
    /// Validates `||V^* V - I_k||_F <= frame_tol` and `k <= n`.
    pub fn new(mat: ComplexMatrix, frame_tol: f64) -> Result<Self> {
        if mat.cols() == 0 || mat.cols() > mat.rows() {
            return Err(Error::ShapeMismatch(format!(
                "frame of rank {} in C^{}",
                mat.cols(),
                mat.rows()
            )));
        }
        let frame = Self { mat };
        let defect = frame.defect();
        if defect > frame_tol {
            return Err(Error::NotOrthonormal { defect });
        }
        Ok(frame)
    }

    pub(crate) fn from_trusted(mat: ComplexMatrix) -> Self {
        Self { mat }
    }

    /// `||V^* V - I_k||_F`
    pub fn defect(&self) -> f64 {
        self.mat.adjoint_mul(&self.mat).sub(&ComplexMatrix::identity(self.rank())).frobenius_norm()
    }

    pub fn ambient_dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn rank(&self) -> usize {
        self.mat.cols()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        self.mat.column(j)
    }

    pub fn columns(&self) -> Vec<Vec<C64>> {
        self.mat.columns()
    }

    /// The first `k` columns.
    pub fn truncate(&self, k: usize) -> Self {
        Self { mat: self.mat.column_range(0, k.min(self.rank())) }
    }

    /// Composition `outer * inner`: lifts a frame of `C^m` living in the
    /// coordinates of this `n x m` frame back to `C^n`.
    pub fn lift(&self, inner: &OrthonormalFrame) -> Self {
        Self { mat: self.mat.matmul(&inner.mat) }
    }

    /// Concatenates two frames with mutually orthogonal ranges.
    pub fn join(&self, other: &OrthonormalFrame, frame_tol: f64) -> Result<Self> {
        Self::new(self.mat.hstack(&other.mat), frame_tol)
    }

    pub fn projection(&self) -> Projection {
        Projection { frame: self.clone() }
    }

    /// Standard basis vectors `e_i` for the given indices.
    pub fn coordinate(n: usize, indices: &[usize]) -> Self {
        Self::from_trusted(ComplexMatrix::from_fn(n, indices.len(), |i, j| {
            if indices[j] == i {
                ONE
            } else {
                ZERO
            }
        }))
    }
}

/// Orthogonal projection `P = F F^*` represented by its frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    frame: OrthonormalFrame,
}

impl Projection {
    pub fn new(frame: OrthonormalFrame) -> Self {
        Self { frame }
    }

    /// Projection onto the span of arbitrary vectors.
    pub fn onto_span(vectors: &[Vec<C64>], tol: f64) -> Result<Self> {
        Ok(Self { frame: orthonormalize(vectors, tol)? })
    }

    pub fn identity(n: usize) -> Self {
        Self { frame: OrthonormalFrame::from_trusted(ComplexMatrix::identity(n)) }
    }

    pub fn frame(&self) -> &OrthonormalFrame {
        &self.frame
    }

    pub fn rank(&self) -> usize {
        self.frame.rank()
    }

    pub fn ambient_dim(&self) -> usize {
        self.frame.ambient_dim()
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let f = self.frame.matrix();
        f.matmul(&f.adjoint())
    }
}

impl From<OrthonormalFrame> for Projection {
    fn from(frame: OrthonormalFrame) -> Self {
        Self { frame }
    }
}

/// Modified Gram-Schmidt with one re-orthogonalization pass.
///
/// A vector is dropped when its residual falls below `tol` times the
/// largest input norm.
pub fn orthonormalize(vectors: &[Vec<C64>], tol: f64) -> Result<OrthonormalFrame> {
    let Some(first) = vectors.first() else {
        return Err(Error::EmptySpan);
    };
    let n = first.len();
    if let Some(bad) = vectors.iter().find(|v| v.len() != n) {
        return Err(Error::ShapeMismatch(format!("vector of length {} among C^{n}", bad.len())));
    }
    let scale = vectors.iter().map(|v| norm(v)).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::EmptySpan);
    }
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for v in vectors {
        if basis.len() == n {
            break;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            project_out(&mut w, &basis);
        }
        let r = norm(&w);
        if r > tol * scale {
            w.iter_mut().for_each(|x| *x /= r);
            basis.push(w);
        }
    }
    if basis.is_empty() {
        return Err(Error::EmptySpan);
    }
    Ok(OrthonormalFrame::from_trusted(ComplexMatrix::from_columns(n, &basis)?))
}

pub(crate) fn project_out(w: &mut [C64], basis: &[Vec<C64>]) {
    for b in basis {
        let c = dot(b, w);
        for (x, y) in w.iter_mut().zip(b) {
            *x -= c * y;
        }
    }
}

/// Orthonormal basis of the orthogonal complement of the frame's range.
///
/// Standard basis vectors are added greedily by largest residual, which
/// keeps the result well conditioned and deterministic.
pub fn complement_frame(frame: &OrthonormalFrame) -> Result<OrthonormalFrame> {
    let n = frame.ambient_dim();
    let k = frame.rank();
    if k >= n {
        return Err(Error::FullSpace);
    }
    let mut basis = frame.columns();
    let mut residuals: Vec<Vec<C64>> = (0..n)
        .map(|i| {
            let mut e = alloc::vec![ZERO; n];
            e[i] = ONE;
            project_out(&mut e, &basis);
            e
        })
        .collect();
    let mut added = Vec::with_capacity(n - k);
    for _ in 0..n - k {
        let (best, _) = residuals
            .iter()
            .enumerate()
            .map(|(i, r)| (i, norm(r)))
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        let mut w = residuals[best].clone();
        for _ in 0..2 {
            project_out(&mut w, &basis);
        }
        let r = norm(&w);
        w.iter_mut().for_each(|x| *x /= r);
        for res in residuals.iter_mut() {
            project_out(res, core::slice::from_ref(&w));
        }
        basis.push(w.clone());
        added.push(w);
    }
    Ok(OrthonormalFrame::from_trusted(ComplexMatrix::from_columns(n, &added)?))
}
