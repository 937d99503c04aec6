//! Seeded randomness.
//!
//! Every randomized routine takes a `(seed, subtask)` pair. The seed picks
//! the ChaCha key; the subtask index is hashed (splitmix64) into the
//! ChaCha stream id, so parallel subtasks draw from disjoint streams and
//! results never depend on scheduling.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{orthonormalize, ComplexMatrix, HermitianMatrix, OrthonormalFrame, C64};

pub type SeededRng = ChaCha8Rng;

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Generator for subtask `subtask` of a run seeded with `seed`.
pub fn stream(seed: u64, subtask: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(splitmix64(subtask));
    rng
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Standard complex Gaussian entry (`E|z|^2 = 1`).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    C64::new(s * gaussian(rng), s * gaussian(rng))
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    let v = random_vector(rng, n);
    let r = crate::linalg::norm(&v);
    v.into_iter().map(|x| x / r).collect()
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// GUE-like random Hermitian matrix.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianMatrix {
    HermitianMatrix::from_part(&random_matrix(rng, n, n))
}

/// Haar-distributed rank-`k` frame (Gram-Schmidt of a Gaussian matrix).
pub fn random_frame<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> OrthonormalFrame {
    loop {
        let g = random_matrix(rng, n, k);
        if let Ok(f) = orthonormalize(&g.columns(), 1e-8) {
            if f.rank() == k {
                return f;
            }
        }
    }
}

pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    random_frame(rng, n, n).matrix().clone()
}
