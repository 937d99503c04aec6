//! Seeded generators for the random inputs the drivers and tests use.
//!
//! Each generator takes a `(seed, subtask)` pair and draws from
//! [`stream`], so results depend only on those two numbers.

use opsys_turan_core::anticlique::M4Case;
use opsys_turan_core::opsys::{make_system, projection_span_system, vq_system};
use opsys_turan_core::rng::{gaussian, random_hermitian, random_unitary, stream, SeededRng};
use opsys_turan_core::{ComplexMatrix, Error, HermitianMatrix, OperatorSystem, OrthonormalFrame, Projection};

fn rng(seed: u64, subtask: u64) -> SeededRng {
    stream(seed, subtask)
}

/// `span(I, H_1, ..., H_{d-1})` for independent GUE-like `H_i`.
pub fn random_system(n: usize, d: usize, seed: u64, subtask: u64) -> Result<OperatorSystem, Error> {
    let mut r = rng(seed, subtask);
    let gens = (1..d).map(|_| random_hermitian(&mut r, n).into_matrix()).collect();
    make_system(n, gens, format!("random(n={n}, d={d})"))
}

/// `span(I, D_1, ..., D_{d-1})` for random real diagonal `D_i`.
pub fn random_diagonal_system(n: usize, d: usize, seed: u64, subtask: u64) -> Result<OperatorSystem, Error> {
    let mut r = rng(seed, subtask);
    let gens = (1..d)
        .map(|_| {
            let diag: Vec<f64> = (0..n).map(|_| gaussian(&mut r)).collect();
            ComplexMatrix::from_real_diag(&diag)
        })
        .collect();
    make_system(n, gens, format!("diagonal(n={n}, d={d})"))
}

pub fn random_hermitian_matrix(n: usize, seed: u64, subtask: u64) -> HermitianMatrix {
    random_hermitian(&mut rng(seed, subtask), n)
}

/// Mutually orthogonal projections with the given ranks summing to `I`,
/// taken from consecutive columns of a Haar unitary.
pub fn random_resolution(ranks: &[usize], seed: u64, subtask: u64) -> Result<Vec<Projection>, Error> {
    let n: usize = ranks.iter().sum();
    let u = random_unitary(&mut rng(seed, subtask), n);
    let mut start = 0;
    ranks
        .iter()
        .map(|&k| {
            start += k;
            Ok(Projection::new(OrthonormalFrame::new(u.column_range(start - k, start), 1e-10)?))
        })
        .collect()
}

/// Ranks for the `ceil(n/k)`-term resolution: all `k` except a smaller last one.
pub fn projsum_ranks(n: usize, k: usize) -> Vec<usize> {
    let r = n.div_ceil(k);
    let mut ranks = vec![k; r - 1];
    ranks.push(n - k * (r - 1));
    ranks
}

/// `span(P_1, ..., P_r)` for a random resolution into `ceil(n/k)` pieces.
pub fn projsum_system(n: usize, k: usize, seed: u64, subtask: u64) -> Result<(OperatorSystem, Vec<Projection>), Error> {
    let ps = random_resolution(&projsum_ranks(n, k), seed, subtask)?;
    let v = projection_span_system(&ps)?.with_label(format!("projsum(n={n}, k={k})"));
    Ok((v, ps))
}

/// A Haar-random projection of rank `rank` in `C^n`.
pub fn random_projection(n: usize, rank: usize, seed: u64, subtask: u64) -> Result<Projection, Error> {
    let u = random_unitary(&mut rng(seed, subtask), n);
    Ok(Projection::new(OrthonormalFrame::new(u.column_range(0, rank), 1e-10)?))
}

/// `V_Q` for a random `Q` of rank `n - k + 1` plus `extra` random Hermitian
/// directions.
pub fn vq_with_extension(
    n: usize,
    k: usize,
    extra: usize,
    seed: u64,
    subtask: u64,
) -> Result<(OperatorSystem, Projection), Error> {
    let q = random_projection(n, n + 1 - k, seed, subtask)?;
    if extra == 0 {
        return Ok((vq_system(&q)?, q));
    }
    let mut r = rng(seed, subtask ^ 0x5eed);
    let dirs = (0..extra).map(|_| random_hermitian(&mut r, n).into_matrix()).collect();
    Ok((opsys_turan_core::clique::vq_extension(&q, dirs)?, q))
}

/// Hermitian `A` in `M_4` with a planted repeated eigenvalue arranged for
/// the requested case, and a random Hermitian `B`.
pub fn planted_m4(case: M4Case, seed: u64, subtask: u64) -> (HermitianMatrix, HermitianMatrix) {
    let mut r = rng(seed, subtask);
    let mu = gaussian(&mut r);
    let mut gap = || 0.2 + gaussian(&mut r).abs();
    let diag = match case {
        M4Case::Triple => [mu, mu, mu, mu + gap()],
        M4Case::OppositeSigns => [mu - gap(), mu, mu, mu + gap()],
        M4Case::SameSign => {
            let (a, b) = (gap(), gap());
            [mu, mu, mu + a, mu + a + b]
        }
    };
    let sign = if gaussian(&mut r) < 0.0 { -1.0 } else { 1.0 };
    let diag: Vec<f64> = diag.iter().map(|x| sign * x).collect();
    let u = random_unitary(&mut r, 4);
    let a = u.matmul(&ComplexMatrix::from_real_diag(&diag)).matmul(&u.adjoint());
    let b = random_hermitian(&mut r, 4);
    (HermitianMatrix::from_part(&a), b)
}

pub fn m4_system(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<OperatorSystem, Error> {
    make_system(4, vec![a.matrix().clone(), b.matrix().clone()], "span(I_4, A, B)")
}

pub const ALL_M4_CASES: [M4Case; 3] = [M4Case::Triple, M4Case::OppositeSigns, M4Case::SameSign];

