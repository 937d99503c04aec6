use alloc::vec::Vec;

use crate::linalg::{dot, norm, numerical_rank, orthonormalize, svd, ComplexMatrix, C64};
use crate::rng::{random_unit_vector, stream};
use crate::{Error, OperatorSystem, Result, Tolerances};

/// Vectors `v_1, ..., v_r` with operators `A_1, ..., A_{r-1}` in `V` such
/// that `v_{j+1} = A_j v_j` is orthogonal to `v_1` and to every `A_i v_l`,
/// `A_i^* v_l` with `i < j`, `l <= j`.
#[derive(Debug, Clone)]
pub struct ChainState {
    pub vectors: Vec<Vec<C64>>,
    pub operators: Vec<ComplexMatrix>,
    /// Dimension of the span each new vector had to avoid, per step.
    pub forbidden_dims: Vec<usize>,
    /// Minimum `dim(V v_r)` demanded before a step is attempted.
    pub span_budget: usize,
}

impl ChainState {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Largest `|<A_i v_r, v_s>|` over `max(r, s) > i + 1`, `r != s`
    /// (one-based), together with the worst deviation of `||v_r||` from one.
    pub fn invariant_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for v in &self.vectors {
            worst = worst.max((norm(v) - 1.0).abs());
        }
        for (i, a) in self.operators.iter().enumerate() {
            let i1 = i + 1;
            for (r, vr) in self.vectors.iter().enumerate() {
                let image = a.mul_vec(vr);
                for (s, vs) in self.vectors.iter().enumerate() {
                    if r != s && (r + 1).max(s + 1) > i1 + 1 {
                        worst = worst.max(dot(vs, &image).norm());
                    }
                }
            }
        }
        worst
    }
}

#[derive(Debug, Clone)]
pub enum ChainOutcome {
    Complete(ChainState),
    /// No admissible next vector: either `dim(V v_r)` fell below the budget
    /// or every image of `v_r` lies in the forbidden span.
    Stuck { state: ChainState, image_dim: usize, forbidden_dim: usize },
}

impl ChainOutcome {
    pub fn state(&self) -> &ChainState {
        match self {
            ChainOutcome::Complete(s) | ChainOutcome::Stuck { state: s, .. } => s,
        }
    }

    pub fn is_complete(&self) -> bool {
        matches!(self, ChainOutcome::Complete(_))
    }
}

/// [`greedy_chain_from`] starting at a random unit vector drawn from
/// stream 0 of `seed`.
pub fn greedy_chain(
    v: &OperatorSystem,
    target_len: usize,
    dim_threshold: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<ChainOutcome> {
    let v1 = random_unit_vector(&mut stream(seed, 0), v.n());
    greedy_chain_from(v, &v1, target_len, dim_threshold, tol)
}

/// Grows the chain one vector at a time. The next operator is the
/// combination `A = sum c_i B_i` whose image `A v_r` avoids the forbidden
/// span exactly and has the largest norm; it is rescaled so that
/// `||A v_r|| = 1`. A step is accepted when that norm exceeds
/// `10 certify_tol`.
pub fn greedy_chain_from(
    v: &OperatorSystem,
    v1: &[C64],
    target_len: usize,
    dim_threshold: usize,
    tol: &Tolerances,
) -> Result<ChainOutcome> {
    let n = v.n();
    if v1.len() != n {
        return Err(Error::ShapeMismatch(alloc::format!("start vector of length {} in C^{n}", v1.len())));
    }
    let r = norm(v1);
    if r == 0.0 || !r.is_finite() {
        return Err(Error::EmptySpan);
    }
    let mut state = ChainState {
        vectors: alloc::vec![v1.iter().map(|x| x / r).collect()],
        operators: Vec::new(),
        forbidden_dims: Vec::new(),
        span_budget: dim_threshold,
    };
    let basis = v.basis();
    while state.len() < target_len {
        let current = state.vectors.last().expect("chain is never empty");
        let images: Vec<Vec<C64>> = basis.iter().map(|b| b.mul_vec(current)).collect();
        let m = ComplexMatrix::from_columns(n, &images)?;
        let image_dim = numerical_rank(&m, tol.certify_tol);

        let mut forbidden = alloc::vec![state.vectors[0].clone()];
        for a in &state.operators {
            let adj = a.adjoint();
            for vj in &state.vectors {
                forbidden.push(a.mul_vec(vj));
                forbidden.push(adj.mul_vec(vj));
            }
        }
        let w = orthonormalize(&forbidden, tol.frame_tol)?;
        let forbidden_dim = w.rank();
        if image_dim < dim_threshold || forbidden_dim >= n {
            return Ok(ChainOutcome::Stuck { state, image_dim, forbidden_dim });
        }

        let constraint = w.matrix().adjoint_mul(&m);
        let dec = svd(&constraint);
        let top = dec.values.first().copied().unwrap_or(0.0);
        let cut = tol.frame_tol * top.max(1.0);
        let kernel: Vec<Vec<C64>> = dec
            .values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s <= cut)
            .map(|(j, _)| dec.right.column(j))
            .collect();
        if kernel.is_empty() {
            return Ok(ChainOutcome::Stuck { state, image_dim, forbidden_dim });
        }
        let k = ComplexMatrix::from_columns(basis.len(), &kernel)?;
        let reach = svd(&m.matmul(&k));
        let sigma = reach.values.first().copied().unwrap_or(0.0);
        if sigma <= 10.0 * tol.certify_tol {
            return Ok(ChainOutcome::Stuck { state, image_dim, forbidden_dim });
        }
        let c = k.mul_vec(&reach.right.column(0));
        let mut a = ComplexMatrix::zeros(n, n);
        for (ci, b) in c.iter().zip(basis) {
            a.axpy(*ci / sigma, b);
        }
        let mut next = a.mul_vec(current);
        let len = norm(&next);
        next.iter_mut().for_each(|x| *x /= len);
        if next.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        state.operators.push(a);
        state.vectors.push(next);
        state.forbidden_dims.push(forbidden_dim);
    }
    Ok(ChainOutcome::Complete(state))
}
