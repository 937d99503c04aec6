use alloc::vec::Vec;

use super::chain::{greedy_chain, ChainOutcome};
use super::{clique_search_random, CliqueCertificate, CliqueMethod};
use crate::linalg::{complement_frame, eigh, numerical_rank, orthonormalize, ComplexMatrix, HermitianMatrix, OrthonormalFrame, C64};
use crate::opsys::compress;
use crate::rng::{gaussian, stream};
use crate::{OperatorSystem, Result, Tolerances};

const RANDOM_COMBINATIONS: usize = 4;

/// One restriction of the working system to the complement of a vector
/// with a small image.
#[derive(Debug, Clone)]
pub struct PeelStep {
    /// The removed vector, in ambient coordinates.
    pub vector: Vec<C64>,
    /// `dim(W v)` for the working system `W` before the step.
    pub image_dim: usize,
    pub dim_before: usize,
    pub dim_after: usize,
    /// `dim_after >= dim_before - 2 * threshold`.
    pub bound_holds: bool,
}

#[derive(Debug, Clone)]
pub struct DimensionOutcome {
    pub certificate: Option<CliqueCertificate>,
    pub peels: Vec<PeelStep>,
    /// The subspace left after peeling, in ambient coordinates.
    pub remaining: OrthonormalFrame,
    pub chain: Option<ChainOutcome>,
}

/// Looks for a `k`-clique by dimension counting.
///
/// While some vector `x` has `dim(W x) < threshold`, the working system is
/// compressed to `x^perp`. Candidates for `x` are the eigenvectors of the
/// basis elements, of a few random combinations, and the standard basis.
/// Once every candidate has a large image, a greedy chain is grown and a
/// clique is searched for among frames of its span (`trials` random
/// frames), then in the whole remaining space.
pub fn clique_via_dimension(
    v: &OperatorSystem,
    k: usize,
    threshold: usize,
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<DimensionOutcome> {
    let n = v.n();
    let mut remaining = OrthonormalFrame::coordinate(n, &(0..n).collect::<Vec<_>>());
    let mut work = v.clone();
    let mut peels = Vec::new();
    while remaining.rank() > k {
        let m = remaining.rank();
        let (x, image_dim) = smallest_image(&work, seed, peels.len() as u64, tol)?;
        if image_dim >= threshold {
            break;
        }
        let xf = OrthonormalFrame::new(ComplexMatrix::from_columns(m, core::slice::from_ref(&x))?, tol.frame_tol)?;
        let rest = complement_frame(&xf)?;
        let next = compress(&work, &rest, tol)?.system;
        let (before, after) = (work.dimension(), next.dimension());
        peels.push(PeelStep {
            vector: remaining.matrix().mul_vec(&x),
            image_dim,
            dim_before: before,
            dim_after: after,
            bound_holds: after + 2 * threshold >= before,
        });
        remaining = remaining.lift(&rest);
        work = next;
    }
    if remaining.rank() < k {
        return Ok(DimensionOutcome { certificate: None, peels, remaining, chain: None });
    }

    let target = (k.pow(4) + k.pow(3) + k - 1).min(remaining.rank());
    let chain = greedy_chain(&work, target, 0, seed, tol)?;
    let mut found = None;
    if chain.state().len() >= k {
        let span = orthonormalize(&chain.state().vectors, tol.frame_tol)?;
        if span.rank() >= k {
            let inner = compress(&work, &span, tol)?.system;
            if let Some((c, _)) = clique_search_random(&inner, k, trials, seed, tol)? {
                found = Some(span.lift(&c.frame));
            }
        }
    }
    if found.is_none() {
        if let Some((c, _)) = clique_search_random(&work, k, trials, seed.wrapping_add(1), tol)? {
            found = Some(c.frame);
        }
    }
    let certificate = match found {
        Some(f) => {
            let cert = CliqueCertificate::issue(remaining.lift(&f), v, tol, CliqueMethod::Dimension)?;
            cert.is_valid().then_some(cert)
        }
        None => None,
    };
    Ok(DimensionOutcome { certificate, peels, remaining, chain: Some(chain) })
}

/// The candidate with the smallest `dim(W x)`; the first one wins ties.
fn smallest_image(w: &OperatorSystem, seed: u64, round: u64, tol: &Tolerances) -> Result<(Vec<C64>, usize)> {
    let m = w.n();
    let mut sources: Vec<ComplexMatrix> = w.basis().to_vec();
    let mut rng = stream(seed, 1000 + round);
    for _ in 0..RANDOM_COMBINATIONS {
        let mut a = ComplexMatrix::zeros(m, m);
        for b in w.basis() {
            a.axpy(C64::new(gaussian(&mut rng), 0.0), b);
        }
        sources.push(a);
    }
    let mut candidates: Vec<Vec<C64>> = Vec::new();
    for s in &sources {
        candidates.extend(eigh(&HermitianMatrix::from_part(s))?.vectors.columns());
    }
    candidates.extend(OrthonormalFrame::coordinate(m, &(0..m).collect::<Vec<_>>()).columns());

    let mut best: Option<(Vec<C64>, usize)> = None;
    for x in candidates {
        let images: Vec<Vec<C64>> = w.basis().iter().map(|b| b.mul_vec(&x)).collect();
        let d = numerical_rank(&ComplexMatrix::from_columns(m, &images)?, tol.certify_tol);
        if best.as_ref().is_none_or(|(_, bd)| d < *bd) {
            best = Some((x, d));
        }
    }
    Ok(best.expect("at least one candidate"))
}
