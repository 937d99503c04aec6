//! Operator systems: subspaces of `M_n(C)` containing `I_n` and closed
//! under adjoint.
//!
//! A system is stored as a Hilbert-Schmidt orthonormal list of Hermitian
//! matrices. Because every basis element is Hermitian, the complex span of
//! the basis equals the complexification of its real span, so all subspace
//! computations run on the real coordinates of [`ComplexMatrix::hermitian_coords`].

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{
    complement_frame, orthonormalize, svd, ComplexMatrix, OrthonormalFrame, Projection, C64,
};
use crate::{Error, Result, Tolerances};

/// Relative tolerance for dropping dependent generators while building a basis.
pub const BUILD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSystem {
    n: usize,
    basis: Vec<ComplexMatrix>,
    generators: Vec<ComplexMatrix>,
    label: String,
}

impl OperatorSystem {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Hilbert-Schmidt orthonormal Hermitian basis; element 0 is `I_n / sqrt(n)`
    /// for systems built by [`make_system`].
    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    /// The generators the system was built from (what gets serialized).
    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Real coordinates of the basis, one row per basis element.
    pub fn coords(&self) -> Vec<Vec<f64>> {
        self.basis.iter().map(ComplexMatrix::hermitian_coords).collect()
    }

    /// Relative distance `||A - proj_V(A)||_F / ||A||_F` of `a` from the system.
    pub fn distance(&self, a: &ComplexMatrix) -> f64 {
        let scale = a.frobenius_norm();
        if scale == 0.0 {
            return 0.0;
        }
        let coords = self.coords();
        let mut total = 0.0;
        for part in [a.hermitian_part(), a.skew_hermitian_part()] {
            let mut x = part.hermitian_coords();
            for c in &coords {
                let ip: f64 = c.iter().zip(&x).map(|(p, q)| p * q).sum();
                x.iter_mut().zip(c).for_each(|(v, w)| *v -= ip * w);
            }
            total += x.iter().map(|v| v * v).sum::<f64>();
        }
        total.sqrt() / scale
    }

    pub fn contains(&self, a: &ComplexMatrix, tol: f64) -> bool {
        self.distance(a) <= tol
    }

    /// Whether `other` spans the same subspace (mutual containment).
    pub fn same_span(&self, other: &OperatorSystem, tol: f64) -> bool {
        self.n == other.n
            && self.dimension() == other.dimension()
            && other.basis.iter().all(|b| self.contains(b, tol))
    }

    /// Whether every basis element is diagonal within `tol`; returns the
    /// largest off-diagonal magnitude.
    pub fn off_diagonal_mass(&self) -> f64 {
        self.basis.iter().map(ComplexMatrix::off_diagonal_max).fold(0.0, f64::max)
    }

    fn from_orthonormal(n: usize, basis: Vec<ComplexMatrix>, generators: Vec<ComplexMatrix>, label: String) -> Self {
        Self { n, basis, generators, label }
    }
}

/// The smallest operator system containing `generators`: adjoin `I_n`, split
/// each generator into Hermitian parts, orthonormalize.
pub fn make_system(n: usize, generators: Vec<ComplexMatrix>, label: impl Into<String>) -> Result<OperatorSystem> {
    if n == 0 {
        return Err(Error::ShapeMismatch("ambient dimension 0".to_string()));
    }
    if let Some(g) = generators.iter().find(|g| g.rows() != n || g.cols() != n) {
        return Err(Error::ShapeMismatch(format!("{}x{} generator in M_{n}", g.rows(), g.cols())));
    }
    let mut parts = Vec::with_capacity(2 * generators.len() + 1);
    parts.push(ComplexMatrix::identity(n));
    for g in &generators {
        parts.push(g.hermitian_part());
        parts.push(g.skew_hermitian_part());
    }
    let basis = orthonormal_hermitian(n, &parts)?;
    Ok(OperatorSystem::from_orthonormal(n, basis, generators, label.into()))
}

fn orthonormal_hermitian(n: usize, parts: &[ComplexMatrix]) -> Result<Vec<ComplexMatrix>> {
    let vecs: Vec<Vec<C64>> = parts
        .iter()
        .map(|p| p.hermitian_coords().into_iter().map(|x| C64::new(x, 0.0)).collect())
        .collect();
    let frame = orthonormalize(&vecs, BUILD_TOL)?;
    Ok(frame
        .columns()
        .into_iter()
        .map(|c| {
            let re: Vec<f64> = c.iter().map(|z| z.re).collect();
            ComplexMatrix::from_hermitian_coords(n, &re)
        })
        .collect())
}

/// `V_G = span{E_ij : i = j or i ~ j}` with 0-based vertices.
pub fn graph_system(n: usize, edges: &[(usize, usize)]) -> Result<OperatorSystem> {
    let mut gens: Vec<ComplexMatrix> = (0..n).map(|i| ComplexMatrix::unit(n, i, i)).collect();
    let mut seen = Vec::new();
    for &(a, b) in edges {
        for v in [a, b] {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
        }
        let key = (a.min(b), a.max(b));
        if a == b || seen.contains(&key) {
            continue;
        }
        seen.push(key);
        gens.push(ComplexMatrix::unit(n, a, b));
        gens.push(ComplexMatrix::unit(n, b, a));
    }
    make_system(n, gens, format!("graph(n={n}, edges={})", seen.len()))
}

/// The diagonal system `D_n`.
pub fn diagonal_system(n: usize) -> Result<OperatorSystem> {
    graph_system(n, &[]).map(|v| v.with_label(format!("D_{n}")))
}

/// The full matrix algebra `M_n`.
pub fn full_system(n: usize) -> Result<OperatorSystem> {
    let gens = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| ComplexMatrix::unit(n, i, j)).collect();
    make_system(n, gens, format!("M_{n}"))
}

/// `span(P_1, ..., P_r)` with `I_n` adjoined.
pub fn projection_span_system(projections: &[Projection]) -> Result<OperatorSystem> {
    let Some(first) = projections.first() else {
        return Err(Error::ShapeMismatch("no projections".to_string()));
    };
    let n = first.ambient_dim();
    if projections.iter().any(|p| p.ambient_dim() != n) {
        return Err(Error::ShapeMismatch("projections of different sizes".to_string()));
    }
    let ranks: Vec<String> = projections.iter().map(|p| p.rank().to_string()).collect();
    make_system(n, projections.iter().map(Projection::matrix).collect(), format!("projsum(ranks={})", ranks.join(",")))
}

/// `V_Q = {A : QAQ is a scalar multiple of Q}`.
///
/// In a unitary basis `[complement of Q | range of Q]` these are the
/// matrices that are arbitrary on the leading `n - rank(Q)` rows and
/// columns and scalar on the trailing block.
pub fn vq_system(q: &Projection) -> Result<OperatorSystem> {
    let n = q.ambient_dim();
    let m = q.rank();
    let label = format!("V_Q(n={n}, rank={m})");
    if m == n {
        return make_system(n, Vec::new(), label);
    }
    let comp = complement_frame(q.frame())?;
    let u = comp.matrix().hstack(q.frame().matrix());
    let strip = n - m;
    let cols = u.columns();
    let mut gens = Vec::with_capacity(n * n - m * m);
    for i in 0..n {
        for j in 0..n {
            if i < strip || j < strip {
                gens.push(ComplexMatrix::from_fn(n, n, |r, c| cols[i][r] * cols[j][c].conj()));
            }
        }
    }
    make_system(n, gens, label)
}

/// `[[0, A], [B, 0]] + C I_{2k}` in `M_{2k}`.
pub fn bipartite_system(k: usize) -> Result<OperatorSystem> {
    let n = 2 * k;
    let mut gens = Vec::with_capacity(2 * k * k);
    for i in 0..k {
        for j in 0..k {
            gens.push(ComplexMatrix::unit(n, i, k + j));
            gens.push(ComplexMatrix::unit(n, k + j, i));
        }
    }
    make_system(n, gens, format!("bipartite(k={k})"))
}

/// Hilbert-Schmidt complement plus scalars: `V^dagger = V^perp + C I_n`.
pub fn dagger(v: &OperatorSystem) -> Result<OperatorSystem> {
    let n = v.n;
    let label = format!("dagger({})", v.label);
    let vecs: Vec<Vec<C64>> =
        v.coords().into_iter().map(|c| c.into_iter().map(|x| C64::new(x, 0.0)).collect()).collect();
    let frame = orthonormalize(&vecs, BUILD_TOL)?;
    let gens = match complement_frame(&frame) {
        Ok(comp) => comp
            .columns()
            .into_iter()
            .map(|c| {
                let re: Vec<f64> = c.iter().map(|z| z.re).collect();
                ComplexMatrix::from_hermitian_coords(n, &re)
            })
            .collect(),
        Err(Error::FullSpace) => Vec::new(),
        Err(e) => return Err(e),
    };
    make_system(n, gens, label)
}

/// Outcome of the two-threshold rank rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankCert {
    Exact(usize),
    /// Some singular value fell between the thresholds.
    Indeterminate { lower: usize, upper: usize },
}

impl RankCert {
    pub fn exact(self) -> Option<usize> {
        match self {
            RankCert::Exact(r) => Some(r),
            RankCert::Indeterminate { .. } => None,
        }
    }
}

/// Accepts rank `r` only if `s_r / s_1 > 10 tol` and `s_{r+1} / s_1 < tol`.
pub fn certify_rank(singular_values: &[f64], tol: f64) -> RankCert {
    let top = singular_values.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return RankCert::Exact(0);
    }
    let lower = singular_values.iter().filter(|&&s| s / top > 10.0 * tol).count();
    let upper = singular_values.iter().filter(|&&s| s / top >= tol).count();
    if lower == upper {
        RankCert::Exact(lower)
    } else {
        RankCert::Indeterminate { lower, upper }
    }
}

/// `PVP` identified with an operator system in `M_k`.
#[derive(Debug, Clone)]
pub struct CompressedSystem {
    pub frame: OrthonormalFrame,
    pub system: OperatorSystem,
    /// Certified `dim(PVP)`.
    pub rank: RankCert,
    /// Singular values of the stacked compressions, relative to the largest.
    pub relative_singular_values: Vec<f64>,
}

impl CompressedSystem {
    pub fn dimension(&self) -> Option<usize> {
        self.rank.exact()
    }
}

/// Compresses `v` by the projection with the given frame: the span of
/// `F^* B F` over the basis, with its dimension certified at `certify_tol`.
pub fn compress(v: &OperatorSystem, frame: &OrthonormalFrame, tol: &Tolerances) -> Result<CompressedSystem> {
    if frame.ambient_dim() != v.n {
        return Err(Error::ShapeMismatch(format!(
            "frame in C^{} for a system in M_{}",
            frame.ambient_dim(),
            v.n
        )));
    }
    let k = frame.rank();
    let f = frame.matrix();
    let compressed: Vec<Vec<f64>> = v.basis.iter().map(|b| b.congruence(f).hermitian_coords()).collect();
    let (values, left) = column_space(&compressed, k * k);
    let top = values.first().copied().unwrap_or(0.0);
    let rank = certify_rank(&values, tol.certify_tol);
    let keep = values.iter().filter(|&&s| top > 0.0 && s / top >= tol.certify_tol).count().max(1);
    let mut basis: Vec<ComplexMatrix> =
        left.iter().take(keep).map(|c| ComplexMatrix::from_hermitian_coords(k, c)).collect();
    if top == 0.0 {
        basis = vec![ComplexMatrix::identity(k).scale_real(1.0 / (k as f64).sqrt())];
    }
    let system = OperatorSystem::from_orthonormal(
        k,
        basis.clone(),
        basis,
        format!("compress({}, rank {k})", v.label),
    );
    let rel = values.iter().map(|s| if top > 0.0 { s / top } else { 0.0 }).collect();
    Ok(CompressedSystem { frame: frame.clone(), system, rank, relative_singular_values: rel })
}

/// Singular values (descending) and left singular vectors of the real
/// matrix whose columns are `cols` (each of length `len`).
fn column_space(cols: &[Vec<f64>], len: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    let d = cols.len();
    let x = ComplexMatrix::from_fn(len, d, |i, j| C64::new(cols[j][i], 0.0));
    let (values, left) = if d <= len {
        let s = svd(&x);
        (s.values, s.left)
    } else {
        let s = svd(&x.adjoint());
        (s.values, s.right)
    };
    let r = len.min(d);
    let vectors = (0..r).map(|j| (0..len).map(|i| left[(i, j)].re).collect()).collect();
    (values.into_iter().take(r).collect(), vectors)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
}

/// Result of a clique or anticlique check.
#[derive(Debug, Clone, PartialEq)]
pub struct CertResult {
    pub verdict: Verdict,
    pub rank: RankCert,
    /// `max_i ||F^* B_i F - lambda_i I_k||_F` with `lambda_i = tr(F^* B_i F) / k`.
    pub residual: f64,
}

impl CertResult {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Least-squares scalar-fit residual of the compressions.
pub fn scalar_residual(v: &OperatorSystem, frame: &OrthonormalFrame) -> f64 {
    let k = frame.rank() as f64;
    v.basis
        .iter()
        .map(|b| {
            let m = b.congruence(frame.matrix());
            let lambda = m.trace() / k;
            m.sub(&ComplexMatrix::identity(frame.rank()).scale(lambda)).frobenius_norm()
        })
        .fold(0.0, f64::max)
}

fn verdict_for(rank: RankCert, target: usize) -> Verdict {
    match rank {
        RankCert::Exact(r) if r == target => Verdict::Pass,
        RankCert::Exact(_) => Verdict::Fail,
        RankCert::Indeterminate { lower, upper } if target < lower || target > upper => Verdict::Fail,
        RankCert::Indeterminate { .. } => Verdict::Indeterminate,
    }
}

/// `dim(PVP) = 1`.
pub fn is_anticlique(frame: &OrthonormalFrame, v: &OperatorSystem, tol: &Tolerances) -> Result<CertResult> {
    let c = compress(v, frame, tol)?;
    Ok(CertResult { verdict: verdict_for(c.rank, 1), rank: c.rank, residual: scalar_residual(v, frame) })
}

/// `dim(PVP) = k^2`.
pub fn is_clique(frame: &OrthonormalFrame, v: &OperatorSystem, tol: &Tolerances) -> Result<CertResult> {
    let c = compress(v, frame, tol)?;
    let k = frame.rank();
    Ok(CertResult { verdict: verdict_for(c.rank, k * k), rank: c.rank, residual: scalar_residual(v, frame) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{numerical_rank, ZERO};
    use crate::rng::{random_frame, random_hermitian, random_matrix, stream};
    use proptest::prelude::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    /// Independent dimension oracle: Gram rank of all generators' Hermitian
    /// parts together with the identity.
    fn gram_dimension(n: usize, gens: &[ComplexMatrix]) -> usize {
        let mut cols: Vec<Vec<C64>> = vec![ComplexMatrix::identity(n).as_slice().to_vec()];
        for g in gens {
            cols.push(g.as_slice().to_vec());
            cols.push(g.adjoint().as_slice().to_vec());
        }
        crate::linalg::gram_rank(&cols, 1e-10)
    }

    #[test]
    fn make_system_examples() {
        assert_eq!(make_system(3, vec![], "").unwrap().dimension(), 1);
        let v = make_system(2, vec![ComplexMatrix::unit(2, 0, 1)], "").unwrap();
        assert_eq!(v.dimension(), 3);
        assert!(v.contains(&ComplexMatrix::unit(2, 1, 0), 1e-12));
        assert_eq!(full_system(4).unwrap().dimension(), 16);
        assert!(matches!(
            make_system(3, vec![ComplexMatrix::identity(2)], ""),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn graph_system_examples() {
        assert_eq!(graph_system(3, &[]).unwrap().dimension(), 3);
        let complete: Vec<(usize, usize)> =
            (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).collect();
        assert_eq!(graph_system(4, &complete).unwrap().dimension(), 16);
        let gens = [ComplexMatrix::unit(4, 0, 1)];
        let mut all: Vec<ComplexMatrix> = (0..4).map(|i| ComplexMatrix::unit(4, i, i)).collect();
        all.extend(gens);
        assert_eq!(gram_dimension(4, &all), 6);
        assert_eq!(graph_system(4, &[(0, 1)]).unwrap().dimension(), 6);
        assert_eq!(graph_system(3, &[(0, 3)]), Err(Error::VertexOutOfRange { vertex: 3, n: 3 }));
    }

    #[test]
    fn identity_reconstructs_from_basis() {
        let mut rng = stream(1, 0);
        let v = make_system(5, vec![random_matrix(&mut rng, 5, 5), random_matrix(&mut rng, 5, 5)], "").unwrap();
        assert_eq!(v.dimension(), 5);
        assert!(v.distance(&ComplexMatrix::identity(5)) < 1e-9);
        let herm = v.basis().iter().all(|b| b.hermitian_defect() < 1e-14);
        assert!(herm);
        for (i, a) in v.basis().iter().enumerate() {
            for (j, b) in v.basis().iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((a.hs_inner(b).re - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn projection_span_dimensions() {
        let mut rng = stream(2, 0);
        let u = crate::rng::random_unitary(&mut rng, 6);
        let block = |cols: &[usize]| {
            Projection::new(OrthonormalFrame::new(
                ComplexMatrix::from_fn(6, cols.len(), |i, j| u[(i, cols[j])]),
                1e-10,
            ).unwrap())
        };
        assert_eq!(projection_span_system(&[Projection::identity(6)]).unwrap().dimension(), 1);
        let two = [block(&[0, 1, 2]), block(&[3, 4, 5])];
        assert_eq!(projection_span_system(&two).unwrap().dimension(), 2);
        let three = [block(&[0, 1]), block(&[2, 3]), block(&[4, 5])];
        assert_eq!(projection_span_system(&three).unwrap().dimension(), 3);
    }

    #[test]
    fn vq_dimension_by_block_count() {
        // n = 6, rank(Q) = 4: strips of width 2 give 36 - 16 entries plus the scalar corner
        let mut rng = stream(3, 0);
        let q = random_frame(&mut rng, 6, 4).projection();
        let v = vq_system(&q).unwrap();
        let strip_entries = (0..6).flat_map(|i| (0..6).map(move |j| (i, j))).filter(|&(i, j)| i < 2 || j < 2).count();
        assert_eq!(strip_entries + 1, 21);
        assert_eq!(v.dimension(), 21);
        // Q V_Q Q is scalar
        let p = q.matrix();
        for b in v.basis() {
            let c = p.matmul(b).matmul(&p);
            let lambda = c.trace() / 4.0;
            assert!(c.sub(&p.scale(lambda)).frobenius_norm() < 1e-10);
        }
        assert_eq!(vq_system(&Projection::identity(4)).unwrap().dimension(), 1);
    }

    #[test]
    fn bipartite_dimensions() {
        assert_eq!(bipartite_system(1).unwrap().dimension(), 3);
        for k in 2..=3 {
            let n = 2 * k;
            let gens: Vec<ComplexMatrix> = (0..k)
                .flat_map(|i| (0..k).flat_map(move |j| [ComplexMatrix::unit(n, i, k + j), ComplexMatrix::unit(n, k + j, i)]))
                .collect();
            let oracle = gram_dimension(n, &gens);
            assert_eq!(oracle, 2 * k * k + 1);
            assert_eq!(bipartite_system(k).unwrap().dimension(), oracle);
        }
    }

    #[test]
    fn compress_examples() {
        let mut rng = stream(4, 0);
        let scalar = make_system(5, vec![], "").unwrap();
        let f = random_frame(&mut rng, 5, 3);
        assert_eq!(compress(&scalar, &f, &tol()).unwrap().dimension(), Some(1));

        let m2 = full_system(2).unwrap();
        let id = OrthonormalFrame::coordinate(2, &[0, 1]);
        assert_eq!(compress(&m2, &id, &tol()).unwrap().dimension(), Some(4));

        let d4 = diagonal_system(4).unwrap();
        let top = OrthonormalFrame::coordinate(4, &[0, 1]);
        let c = compress(&d4, &top, &tol()).unwrap();
        assert_eq!(c.dimension(), Some(2));
        assert!(c.system.off_diagonal_mass() < 1e-12);
    }

    #[test]
    fn dagger_examples() {
        assert_eq!(dagger(&make_system(3, vec![], "").unwrap()).unwrap().dimension(), 9);
        assert_eq!(dagger(&full_system(3).unwrap()).unwrap().dimension(), 1);
        let dd = dagger(&diagonal_system(4).unwrap()).unwrap();
        assert_eq!(dd.dimension(), 16 - 4 + 1);
        // off-diagonal units are all present
        assert!(dd.contains(&ComplexMatrix::unit(4, 0, 3), 1e-10));
        assert!(!dd.contains(&ComplexMatrix::unit(4, 0, 0), 1e-3));
    }

    #[test]
    fn clique_and_anticlique_examples() {
        let mut rng = stream(5, 0);
        let v = make_system(4, vec![random_matrix(&mut rng, 4, 4)], "").unwrap();
        let r1 = random_frame(&mut rng, 4, 1);
        assert!(is_anticlique(&r1, &v, &tol()).unwrap().passed());
        assert!(is_clique(&r1, &v, &tol()).unwrap().passed());

        let m3 = full_system(3).unwrap();
        let id = OrthonormalFrame::coordinate(3, &[0, 1, 2]);
        assert_eq!(is_anticlique(&id, &m3, &tol()).unwrap().verdict, Verdict::Fail);

        let scalar = make_system(4, vec![], "").unwrap();
        assert_eq!(is_clique(&random_frame(&mut rng, 4, 2), &scalar, &tol()).unwrap().verdict, Verdict::Fail);

        let b = bipartite_system(2).unwrap();
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let diag = OrthonormalFrame::new(
            ComplexMatrix::from_fn(4, 2, |i, j| if i % 2 == j { C64::new(s, 0.0) } else { ZERO }),
            1e-12,
        )
        .unwrap();
        assert!(is_clique(&diag, &b, &tol()).unwrap().passed());
    }

    #[test]
    fn rank_rule_thresholds() {
        assert_eq!(certify_rank(&[1.0, 1e-3, 1e-12], 1e-8), RankCert::Exact(2));
        assert_eq!(certify_rank(&[1.0, 5e-8], 1e-8), RankCert::Indeterminate { lower: 1, upper: 2 });
        assert_eq!(certify_rank(&[0.0, 0.0], 1e-8), RankCert::Exact(0));
    }

    fn random_system(seed: u64, n: usize, extra: usize) -> OperatorSystem {
        let mut rng = stream(seed, 7);
        let gens = (0..extra).map(|_| random_hermitian(&mut rng, n).into_matrix()).collect();
        make_system(n, gens, "random").unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn dimension_is_bounded(seed in any::<u64>(), n in 1usize..=5, extra in 0usize..=30) {
            let v = random_system(seed, n, extra);
            prop_assert!(v.dimension() >= 1 && v.dimension() <= n * n);
            prop_assert!(v.distance(&ComplexMatrix::identity(n)) < 1e-9);
        }

        #[test]
        fn double_dagger_is_identity(seed in any::<u64>(), n in 1usize..=6, extra in 0usize..=12) {
            let v = random_system(seed, n, extra);
            let dd = dagger(&dagger(&v).unwrap()).unwrap();
            prop_assert!(v.same_span(&dd, 1e-8));
        }

        #[test]
        fn compression_is_monotone(seed in any::<u64>(), n in 2usize..=6, k in 1usize..=6, extra in 0usize..=8) {
            let k = k.min(n);
            let v = random_system(seed, n, extra);
            let mut rng = stream(seed, 9);
            let f = random_frame(&mut rng, n, k);
            let c = compress(&v, &f, &tol()).unwrap();
            if let Some(d) = c.dimension() {
                prop_assert!(d <= v.dimension().min(k * k));
            }
            let full = OrthonormalFrame::coordinate(n, &(0..n).collect::<Vec<_>>());
            let whole = compress(&v, &full, &tol()).unwrap();
            prop_assert!(v.same_span(&whole.system, 1e-8));
        }

        #[test]
        fn vq_dimension_formula(seed in any::<u64>(), n in 1usize..=8, k in 1usize..=8) {
            let k = k.min(n);
            let mut rng = stream(seed, 3);
            let q = random_frame(&mut rng, n, n - k + 1).projection();
            let want = 2 * (k - 1) * n - (k - 1) * (k - 1) + 1;
            prop_assert_eq!(vq_system(&q).unwrap().dimension(), want);
        }

        #[test]
        fn small_systems_have_no_big_cliques(seed in any::<u64>(), n in 3usize..=6, extra in 0usize..=2) {
            // dim V <= 3 < (k+1)^2 for k = 1
            let v = random_system(seed, n, extra);
            let mut rng = stream(seed, 4);
            for _ in 0..8 {
                let f = random_frame(&mut rng, n, 2);
                prop_assert!(!is_clique(&f, &v, &tol()).unwrap().passed());
            }
        }
    }

    #[test]
    fn numerical_rank_of_stacked_system() {
        let v = bipartite_system(2).unwrap();
        let cols: Vec<Vec<C64>> = v.basis().iter().map(|b| b.as_slice().to_vec()).collect();
        let m = ComplexMatrix::from_columns(16, &cols).unwrap();
        assert_eq!(numerical_rank(&m, 1e-10), 9);
    }
}
