//! Quantum anticliques: projections `P` with `dim(PVP) = 1`.
//!
//! Constructors follow the explicit recipes (matrix pencils, projection
//! resolutions, Tverberg partitions of diagonal data, compression to a
//! diagonal system, the `M_4` case analysis); certificates of
//! non-existence are validity checks on the input, and
//! [`anticlique_search`] is a numerical fallback over the Grassmannian.

use alloc::vec::Vec;

use crate::linalg::{dot, ComplexMatrix, OrthonormalFrame, C64};
use crate::opsys::{is_anticlique, scalar_residual};
use crate::{CertResult, OperatorSystem, Result, Tolerances};

mod certify;
mod diagonal;
mod m4;
mod pencil;
mod search;
mod subsystem;
mod tverberg;

pub use certify::{certify_no_anticlique_generic, certify_no_anticlique_projsum};
pub use diagonal::{anticlique_pipeline, compress_to_diagonal, diagonal_anticlique};
pub use m4::{m4_anticlique, M4Case};
pub use pencil::{pencil_anticlique, single_matrix_system};
pub use search::{anticlique_search, search_objective, SearchBudget, SearchOutcome};
pub use subsystem::{subsystem_anticlique, subsystem_of_resolution};
pub use tverberg::{tverberg_partition, TverbergPartition};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnticliqueMethod {
    Pencil,
    Subsystem,
    Diagonal,
    Pipeline,
    M4,
    Search,
}

impl AnticliqueMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            AnticliqueMethod::Pencil => "pencil",
            AnticliqueMethod::Subsystem => "subsystem",
            AnticliqueMethod::Diagonal => "diagonal",
            AnticliqueMethod::Pipeline => "pipeline",
            AnticliqueMethod::M4 => "m4",
            AnticliqueMethod::Search => "search",
        }
    }
}

/// A frame together with its check against the system it was built for.
#[derive(Debug, Clone)]
pub struct AnticliqueCertificate {
    pub frame: OrthonormalFrame,
    /// `max_i ||F^* B_i F - lambda_i I_k||_F` over the system's basis.
    pub residual: f64,
    pub method: AnticliqueMethod,
    pub check: CertResult,
}

impl AnticliqueCertificate {
    pub fn rank(&self) -> usize {
        self.frame.rank()
    }

    pub fn is_valid(&self) -> bool {
        self.check.passed()
    }

    pub(crate) fn issue(
        frame: OrthonormalFrame,
        v: &OperatorSystem,
        tol: &Tolerances,
        method: AnticliqueMethod,
    ) -> Result<Self> {
        let check = is_anticlique(&frame, v, tol)?;
        let residual = scalar_residual(v, &frame);
        Ok(Self { frame, residual, method, check })
    }
}

/// The vector form of the anticlique condition: for every Hermitian basis
/// element `B`, `<B v_i, v_j> = 0` for `i != j` and all `<B v_i, v_i>` agree,
/// each within `certify_tol`.
pub fn frame_criterion(vectors: &[Vec<C64>], v: &OperatorSystem, tol: &Tolerances) -> Result<bool> {
    let frame = OrthonormalFrame::new(ComplexMatrix::from_columns(v.n(), vectors)?, tol.frame_tol)?;
    let cols = frame.columns();
    for b in v.basis() {
        let images: Vec<Vec<C64>> = cols.iter().map(|c| b.mul_vec(c)).collect();
        let first = dot(&cols[0], &images[0]);
        for (i, bi) in images.iter().enumerate() {
            for (j, vj) in cols.iter().enumerate() {
                let ip = dot(vj, bi);
                let bad = if i == j { (ip - first).norm() } else { ip.norm() };
                if bad > tol.certify_tol {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

pub(crate) fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;
    use crate::Error;
    use crate::opsys::{dagger, diagonal_system, is_clique, make_system};
    use crate::rng::{random_frame, random_hermitian, random_unit_vector, stream};
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn single_vector_is_always_an_anticlique() {
        let tol = Tolerances::default();
        let mut rng = stream(1, 0);
        let v = make_system(4, vec![random_hermitian(&mut rng, 4).into_matrix()], "").unwrap();
        assert!(frame_criterion(&[random_unit_vector(&mut rng, 4)], &v, &tol).unwrap());
    }

    #[test]
    fn coordinate_pair_fails_for_diagonals() {
        let tol = Tolerances::default();
        let d2 = diagonal_system(2).unwrap();
        let e = OrthonormalFrame::coordinate(2, &[0, 1]).columns();
        assert!(!frame_criterion(&e, &d2, &tol).unwrap());
    }

    #[test]
    fn non_orthonormal_input_is_rejected() {
        let tol = Tolerances::default();
        let d2 = diagonal_system(2).unwrap();
        let v = vec![vec![ONE, ONE]];
        assert!(matches!(frame_criterion(&v, &d2, &tol), Err(Error::NotOrthonormal { .. })));
    }

    /// A system whose non-identity generators are all scalar on the range of
    /// `f`: `A = c P + (I - P) X (I - P)` plus cross terms that vanish
    /// after compression.
    fn planted_system(rng: &mut crate::rng::SeededRng, f: &OrthonormalFrame, count: usize) -> OperatorSystem {
        let n = f.ambient_dim();
        let p = f.projection().matrix();
        let q = ComplexMatrix::identity(n).sub(&p);
        let gens = (0..count)
            .map(|t| {
                let x = random_hermitian(rng, n).into_matrix();
                let mut a = q.matmul(&x).matmul(&q).add(&q.matmul(&x).matmul(&p)).add(&p.matmul(&x).matmul(&q));
                a.axpy(C64::new(t as f64 - 0.5, 0.0), &p);
                a
            })
            .collect();
        make_system(n, gens, "planted").unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn criterion_matches_compression(seed in any::<u64>(), n in 2usize..=6, k in 1usize..=3, planted in any::<bool>()) {
            let k = k.min(n);
            let tol = Tolerances::default();
            let mut rng = stream(seed, 0);
            let f = random_frame(&mut rng, n, k);
            let v = if planted {
                planted_system(&mut rng, &f, 2)
            } else {
                make_system(n, vec![random_hermitian(&mut rng, n).into_matrix()], "").unwrap()
            };
            let by_vectors = frame_criterion(&f.columns(), &v, &tol).unwrap();
            let by_rank = is_anticlique(&f, &v, &tol).unwrap().passed();
            prop_assert_eq!(by_vectors, by_rank);
            if planted {
                prop_assert!(by_rank);
            }
        }

        #[test]
        fn anticliques_become_cliques_of_the_dagger(seed in any::<u64>(), n in 2usize..=6, k in 2usize..=3) {
            let k = k.min(n);
            let tol = Tolerances::default();
            let mut rng = stream(seed, 1);
            let f = random_frame(&mut rng, n, k);
            let v = planted_system(&mut rng, &f, 2);
            prop_assert!(is_anticlique(&f, &v, &tol).unwrap().passed());
            prop_assert!(is_clique(&f, &dagger(&v).unwrap(), &tol).unwrap().passed());
        }
    }
}
