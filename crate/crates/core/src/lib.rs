//! Operator systems in `M_n(C)` viewed as quantum graphs.
//!
//! The crate builds operator systems from generators, graphs, projection
//! resolutions and block patterns, compresses them by projections, and
//! produces or certifies quantum cliques (`dim(PVP) = k^2`) and quantum
//! anticliques (`dim(PVP) = 1`).
//!
//! Everything here is pure computation over `alloc`; file formats, the CLI
//! and experiment drivers live in the `opsys-turan` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod anticlique;
pub mod clique;
mod error;
pub mod linalg;
pub mod lp;
pub mod opsys;
pub mod rng;
pub mod su2;
mod tol;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianMatrix, OrthonormalFrame, Projection, C64};
pub use opsys::{CertResult, CompressedSystem, OperatorSystem, RankCert, Verdict};
pub use tol::Tolerances;
