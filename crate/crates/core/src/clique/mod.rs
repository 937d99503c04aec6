//! Quantum cliques: projections `P` of rank `k` with `dim(PVP) = k^2`.

use alloc::format;
use alloc::vec::Vec;

use crate::linalg::{complement_frame, ComplexMatrix, OrthonormalFrame, Projection, C64};
use crate::opsys::{bipartite_system, compress, is_clique, vq_system};
use crate::rng::{random_frame, stream};
use crate::{CertResult, Error, OperatorSystem, Result, Tolerances};

mod chain;
mod peel;

pub use chain::{greedy_chain, greedy_chain_from, ChainOutcome, ChainState};
pub use peel::{clique_via_dimension, DimensionOutcome, PeelStep};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CliqueMethod {
    RandomSearch,
    Bipartite,
    Extension,
    Dimension,
}

impl CliqueMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            CliqueMethod::RandomSearch => "random-search",
            CliqueMethod::Bipartite => "bipartite",
            CliqueMethod::Extension => "extension",
            CliqueMethod::Dimension => "dimension",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CliqueCertificate {
    pub frame: OrthonormalFrame,
    /// Certified `dim(PVP)`, when the rank rule was conclusive.
    pub compressed_dim: Option<usize>,
    pub method: CliqueMethod,
    pub check: CertResult,
}

impl CliqueCertificate {
    pub fn rank(&self) -> usize {
        self.frame.rank()
    }

    pub fn is_valid(&self) -> bool {
        self.check.passed()
    }

    pub(crate) fn issue(frame: OrthonormalFrame, v: &OperatorSystem, tol: &Tolerances, method: CliqueMethod) -> Result<Self> {
        let check = is_clique(&frame, v, tol)?;
        Ok(Self { frame, compressed_dim: check.rank.exact(), method, check })
    }
}

/// Haar-random rank-`k` frames, trial `t` drawn from stream `t` of `seed`;
/// the first that certifies as a clique is returned together with its
/// trial index.
pub fn clique_search_random(
    v: &OperatorSystem,
    k: usize,
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Option<(CliqueCertificate, usize)>> {
    if k == 0 || k > v.n() {
        return Err(Error::ShapeMismatch(format!("rank {k} in C^{}", v.n())));
    }
    if v.dimension() < k * k {
        return Ok(None);
    }
    for t in 0..trials {
        let f = random_frame(&mut stream(seed, t as u64), v.n(), k);
        let cert = CliqueCertificate::issue(f, v, tol, CliqueMethod::RandomSearch)?;
        if cert.is_valid() {
            return Ok(Some((cert, t)));
        }
    }
    Ok(None)
}

/// The frame `(e_i + e_{k+i}) / sqrt(2)` of the diagonal subspace
/// `{x + x}` of `C^k + C^k`, a `k`-clique of [`bipartite_system`].
pub fn bipartite_clique(k: usize, tol: &Tolerances) -> Result<CliqueCertificate> {
    let n = 2 * k;
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let f = ComplexMatrix::from_fn(n, k, |i, j| if i == j || i == j + k { C64::new(s, 0.0) } else { C64::new(0.0, 0.0) });
    let v = bipartite_system(k)?;
    CliqueCertificate::issue(OrthonormalFrame::from_trusted(f), &v, tol, CliqueMethod::Bipartite)
}

/// A `(k+1)`-clique for a three-dimensional extension `vqq` of `V_Q`, where
/// `rank(Q) = n - k + 1`: a 2-clique `Q_0` of the compression `Q vqq Q`
/// (found by random search with `trials` frames) assembled into
/// `P = (I - Q) + Q_0`.
pub fn vq_extension_clique(
    vqq: &OperatorSystem,
    q: &Projection,
    k: usize,
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<CliqueCertificate> {
    let n = vqq.n();
    if q.ambient_dim() != n || k == 0 || q.rank() + k != n + 1 || q.rank() < 2 {
        return Err(Error::ExtensionInvalid(format!("rank(Q) = {} with n = {n}, k = {k}", q.rank())));
    }
    let vq = vq_system(q)?;
    if vqq.dimension() != vq.dimension() + 3 {
        return Err(Error::ExtensionInvalid(format!(
            "dimension {} is not dim(V_Q) + 3 = {}",
            vqq.dimension(),
            vq.dimension() + 3
        )));
    }
    if let Some(b) = vq.basis().iter().find(|b| !vqq.contains(b, tol.certify_tol)) {
        return Err(Error::ExtensionInvalid(format!("V_Q element at distance {:.3e}", vqq.distance(b))));
    }
    let inner = compress(vqq, q.frame(), tol)?;
    let (q0, _) = clique_search_random(&inner.system, 2, trials, seed, tol)?.ok_or(Error::SearchExhausted)?;
    let lifted = q.frame().lift(&q0.frame);
    let frame = match complement_frame(q.frame()) {
        Ok(rest) => rest.join(&lifted, tol.frame_tol)?,
        Err(Error::FullSpace) => lifted,
        Err(e) => return Err(e),
    };
    CliqueCertificate::issue(frame, vqq, tol, CliqueMethod::Extension)
}

/// The linear span of `generators(V_Q)` plus `extra` Hermitian directions.
pub fn vq_extension(q: &Projection, extra: Vec<ComplexMatrix>) -> Result<OperatorSystem> {
    let vq = vq_system(q)?;
    let mut gens = vq.generators().to_vec();
    let count = extra.len();
    gens.extend(extra);
    crate::opsys::make_system(q.ambient_dim(), gens, format!("{} + {count} directions", vq.label()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opsys::{full_system, make_system};
    use crate::rng::{random_hermitian, random_unitary};
    use alloc::vec;

    fn projection_of_rank(seed: u64, n: usize, m: usize) -> Projection {
        let u = random_unitary(&mut stream(seed, 0), n);
        Projection::new(OrthonormalFrame::new(u.column_range(0, m), 1e-10).unwrap())
    }

    #[test]
    fn full_algebra_succeeds_at_once() {
        let v = full_system(4).unwrap();
        let (c, t) = clique_search_random(&v, 3, 5, 1, &Tolerances::default()).unwrap().unwrap();
        assert_eq!((t, c.compressed_dim), (0, Some(9)));
    }

    #[test]
    fn scalars_have_no_pairs() {
        let v = make_system(4, vec![], "").unwrap();
        assert!(clique_search_random(&v, 2, 20, 1, &Tolerances::default()).unwrap().is_none());
    }

    #[test]
    fn four_dimensional_systems_have_pairs() {
        let mut rng = stream(2, 0);
        let gens = (0..3).map(|_| random_hermitian(&mut rng, 5).into_matrix()).collect();
        let v = make_system(5, gens, "").unwrap();
        assert!(clique_search_random(&v, 2, 200, 3, &Tolerances::default()).unwrap().is_some());
    }

    #[test]
    fn bipartite_cliques_are_exact() {
        for k in 1..=6 {
            let c = bipartite_clique(k, &Tolerances::default()).unwrap();
            assert_eq!(c.compressed_dim, Some(k * k));
            assert!(c.is_valid());
        }
    }

    #[test]
    fn extension_with_full_rank_q() {
        // n = 4, k = 1: V_Q = C I and the clique is Q_0 itself
        let tol = Tolerances::default();
        let mut rng = stream(4, 0);
        let q = Projection::identity(4);
        let vqq = vq_extension(&q, (0..3).map(|_| random_hermitian(&mut rng, 4).into_matrix()).collect()).unwrap();
        let c = vq_extension_clique(&vqq, &q, 1, 200, 5, &tol).unwrap();
        assert_eq!(c.rank(), 2);
        assert!(c.is_valid());
    }

    #[test]
    fn extension_clique_in_m5() {
        let tol = Tolerances::default();
        let mut rng = stream(6, 0);
        let q = projection_of_rank(6, 5, 4);
        let vqq = vq_extension(&q, (0..3).map(|_| random_hermitian(&mut rng, 5).into_matrix()).collect()).unwrap();
        let c = vq_extension_clique(&vqq, &q, 2, 200, 7, &tol).unwrap();
        assert_eq!((c.rank(), c.compressed_dim), (3, Some(9)));
    }

    #[test]
    fn invalid_extensions() {
        let tol = Tolerances::default();
        let mut rng = stream(8, 0);
        let q = projection_of_rank(8, 5, 4);
        let two = vq_extension(&q, (0..2).map(|_| random_hermitian(&mut rng, 5).into_matrix()).collect()).unwrap();
        assert!(matches!(vq_extension_clique(&two, &q, 2, 10, 0, &tol), Err(Error::ExtensionInvalid(_))));
        assert!(matches!(vq_extension_clique(&two, &q, 3, 10, 0, &tol), Err(Error::ExtensionInvalid(_))));
        let unrelated = make_system(5, (0..12).map(|_| random_hermitian(&mut rng, 5).into_matrix()).collect(), "").unwrap();
        let vq_dim = vq_system(&q).unwrap().dimension();
        assert_eq!(unrelated.dimension(), vq_dim + 3);
        assert!(matches!(vq_extension_clique(&unrelated, &q, 2, 10, 0, &tol), Err(Error::ExtensionInvalid(_))));
    }

    #[test]
    fn two_dimensional_extensions_have_no_larger_cliques() {
        let tol = Tolerances::default();
        let mut rng = stream(9, 0);
        let q = projection_of_rank(9, 5, 4);
        let two = vq_extension(&q, (0..2).map(|_| random_hermitian(&mut rng, 5).into_matrix()).collect()).unwrap();
        assert!(clique_search_random(&two, 3, 100, 10, &tol).unwrap().is_none());
    }
}
