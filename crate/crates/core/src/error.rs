use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not Hermitian (relative defect {defect:.3e})")]
    NonHermitian { defect: f64 },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("all input vectors are below the dependency tolerance")]
    EmptySpan,
    #[error("frame already spans the whole space")]
    FullSpace,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("non-finite matrix entry")]
    NonFinite,
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vectors are not orthonormal (defect {defect:.3e})")]
    NotOrthonormal { defect: f64 },
    #[error("projections do not sum to the identity (defect {defect:.3e})")]
    NotResolution { defect: f64 },
    #[error("coefficient subspace is not proper or does not contain (1, ..., 1)")]
    NotProper,
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("search exhausted without a witness")]
    SearchExhausted,
    #[error("system is not diagonal (off-diagonal mass {defect:.3e})")]
    NotDiagonal { defect: f64 },
    #[error("dimension bound violated: {0}")]
    BoundViolated(String),
    #[error("system of dimension {dim} has nothing to diagonalize")]
    DegenerateSystem { dim: usize },
    #[error("matrix has no repeated eigenvalue")]
    NoRepeatedEigenvalue,
    #[error("SU(2) solver failed (best residual {residual:.3e})")]
    SolverFailed { residual: f64 },
    #[error("invalid extension: {0}")]
    ExtensionInvalid(String),
}
