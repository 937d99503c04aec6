use alloc::vec;
use alloc::vec::Vec;

use super::{AnticliqueCertificate, AnticliqueMethod};
use crate::linalg::{complement_frame, orthonormalize, svd, ComplexMatrix, OrthonormalFrame, C64};
use crate::rng::{random_frame, stream};
use crate::{OperatorSystem, Result, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub restarts: usize,
    pub iterations: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self { restarts: 32, iterations: 500 }
    }
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found { certificate: AnticliqueCertificate, restart: usize },
    NotFound { best_objective: f64, best_residual: f64, best_frame: OrthonormalFrame },
}

impl SearchOutcome {
    pub fn certificate(&self) -> Option<&AnticliqueCertificate> {
        match self {
            SearchOutcome::Found { certificate, .. } => Some(certificate),
            SearchOutcome::NotFound { .. } => None,
        }
    }
}

/// `sum_i ||F^* B_i F - (tr(F^* B_i F)/k) I_k||_F^2` over the basis.
pub fn search_objective(v: &OperatorSystem, frame: &OrthonormalFrame) -> f64 {
    traceless_parts(v, frame.matrix()).iter().map(|r| r.frobenius_norm().powi(2)).sum()
}

fn traceless_parts(v: &OperatorSystem, f: &ComplexMatrix) -> Vec<ComplexMatrix> {
    let k = f.cols();
    v.basis()
        .iter()
        .map(|b| {
            let mut m = b.congruence(f);
            let shift = m.trace() / k as f64;
            (0..k).for_each(|i| m[(i, i)] -= shift);
            m
        })
        .collect()
}

/// Multi-start Riemannian gradient descent for a rank-`k` anticlique.
///
/// Each restart draws a Haar frame from its own stream of `seed`, follows
/// the Grassmann gradient `(I - F F^*) 4 sum_i B_i F R_i` with a QR
/// retraction, halves the step after a non-decrease and lengthens it by half
/// after a success. A restart that ends below `1e-3` without reaching the
/// target is finished by a Levenberg-Marquardt polish, which handles the
/// slow descent near degenerate minima. Restarts run in index order; the
/// first that reaches an
/// objective below `certify_tol^2` and passes [`crate::opsys::is_anticlique`]
/// is returned.
pub fn anticlique_search(
    v: &OperatorSystem,
    k: usize,
    budget: SearchBudget,
    seed: u64,
    tol: &Tolerances,
) -> Result<SearchOutcome> {
    let n = v.n();
    let target = tol.certify_tol * tol.certify_tol;
    let mut best: Option<(f64, OrthonormalFrame)> = None;
    for restart in 0..budget.restarts.max(1) {
        let mut rng = stream(seed, restart as u64);
        let mut f = random_frame(&mut rng, n, k);
        let mut obj = search_objective(v, &f);
        let mut step = 0.25;
        for _ in 0..budget.iterations {
            if obj < target * 1e-4 {
                break;
            }
            let g = riemannian_gradient(v, f.matrix());
            let trial = f.matrix().sub(&g.scale_real(step));
            let Ok(next) = orthonormalize(&trial.columns(), 1e-12) else {
                step *= 0.5;
                continue;
            };
            if next.rank() < k {
                step *= 0.5;
                continue;
            }
            let next_obj = search_objective(v, &next);
            if next_obj < obj {
                f = next;
                obj = next_obj;
                step = (step * 1.5).min(4.0);
            } else {
                step *= 0.5;
                if step < 1e-16 {
                    break;
                }
            }
        }
        if obj >= target && obj < POLISH_BELOW {
            (f, obj) = polish(v, f, obj, target * 1e-4)?;
        }
        if obj < target {
            let cert = AnticliqueCertificate::issue(f.clone(), v, tol, AnticliqueMethod::Search)?;
            if cert.is_valid() {
                return Ok(SearchOutcome::Found { certificate: cert, restart });
            }
        }
        if best.as_ref().is_none_or(|(b, _)| obj < *b) {
            best = Some((obj, f));
        }
    }
    let (best_objective, best_frame) = best.expect("at least one restart");
    Ok(SearchOutcome::NotFound {
        best_objective,
        best_residual: crate::opsys::scalar_residual(v, &best_frame),
        best_frame,
    })
}

const POLISH_BELOW: f64 = 1e-3;
const POLISH_ITERATIONS: usize = 40;
const FD_STEP: f64 = 1e-7;

fn residual_vector(v: &OperatorSystem, f: &ComplexMatrix) -> Vec<f64> {
    traceless_parts(v, f).iter().flat_map(ComplexMatrix::hermitian_coords).collect()
}

/// `orthonormalize(F + C X)` for the real coordinates `x` of the
/// `(n-k) x k` complex matrix `X`.
fn chart(f: &ComplexMatrix, c: &ComplexMatrix, x: &[f64]) -> Option<ComplexMatrix> {
    let m = c.cols();
    let k = f.cols();
    let xm = ComplexMatrix::from_fn(m, k, |i, j| C64::new(x[2 * (i * k + j)], x[2 * (i * k + j) + 1]));
    let moved = f.add(&c.matmul(&xm));
    orthonormalize(&moved.columns(), 1e-12).ok().filter(|g| g.rank() == k).map(|g| g.matrix().clone())
}

/// Levenberg-Marquardt on the traceless parts in the chart
/// `X -> orthonormalize(F + C X)` around the current frame, with a
/// central-difference Jacobian and damped minimum-norm steps.
fn polish(v: &OperatorSystem, frame: OrthonormalFrame, obj: f64, stop: f64) -> Result<(OrthonormalFrame, f64)> {
    let n = frame.ambient_dim();
    let k = frame.rank();
    if k >= n {
        return Ok((frame, obj));
    }
    let mut f = frame.matrix().clone();
    let mut obj = obj;
    let mut lambda = 1e-3;
    for _ in 0..POLISH_ITERATIONS {
        if obj < stop {
            break;
        }
        let c = complement_frame(&OrthonormalFrame::from_trusted(f.clone()))?.matrix().clone();
        let p = 2 * c.cols() * k;
        let r = residual_vector(v, &f);
        let mut jac = ComplexMatrix::zeros(r.len(), p);
        let mut x = vec![0.0; p];
        for j in 0..p {
            x[j] = FD_STEP;
            let plus = chart(&f, &c, &x).map(|g| residual_vector(v, &g));
            x[j] = -FD_STEP;
            let minus = chart(&f, &c, &x).map(|g| residual_vector(v, &g));
            x[j] = 0.0;
            let (Some(plus), Some(minus)) = (plus, minus) else {
                return Ok((OrthonormalFrame::from_trusted(f), obj));
            };
            for i in 0..r.len() {
                jac[(i, j)] = C64::new((plus[i] - minus[i]) / (2.0 * FD_STEP), 0.0);
            }
        }
        let dec = svd(&jac);
        let ur: Vec<f64> = (0..dec.values.len())
            .map(|s| (0..r.len()).map(|i| dec.left[(i, s)].re * r[i]).sum())
            .collect();
        let mut improved = false;
        for _ in 0..8 {
            let mut step = vec![0.0; p];
            for (s, &sigma) in dec.values.iter().enumerate() {
                let w = sigma / (sigma * sigma + lambda);
                for (j, x) in step.iter_mut().enumerate() {
                    *x -= w * ur[s] * dec.right[(j, s)].re;
                }
            }
            if let Some(g) = chart(&f, &c, &step) {
                let next = residual_vector(v, &g).iter().map(|x| x * x).sum::<f64>();
                if next < obj {
                    f = g;
                    obj = next;
                    lambda = (lambda * 0.3).max(1e-15);
                    improved = true;
                    break;
                }
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    Ok((OrthonormalFrame::from_trusted(f), obj))
}

fn riemannian_gradient(v: &OperatorSystem, f: &ComplexMatrix) -> ComplexMatrix {
    let n = f.rows();
    let k = f.cols();
    let mut g = ComplexMatrix::zeros(n, k);
    for (b, r) in v.basis().iter().zip(traceless_parts(v, f)) {
        g.axpy(C64::new(4.0, 0.0), &b.matmul(&f.matmul(&r)));
    }
    let ffg = f.matmul(&f.adjoint_mul(&g));
    g.sub(&ffg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opsys::{diagonal_system, make_system};
    use crate::rng::random_frame;
    use alloc::vec;

    #[test]
    fn scalars_are_found_immediately() {
        let v = make_system(4, vec![], "").unwrap();
        let out = anticlique_search(&v, 3, SearchBudget { restarts: 1, iterations: 1 }, 0, &Tolerances::default()).unwrap();
        assert!(out.certificate().is_some_and(|c| c.is_valid() && c.rank() == 3));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = stream(9, 0);
        let v = make_system(4, vec![crate::rng::random_hermitian(&mut rng, 4).into_matrix()], "").unwrap();
        let f = random_frame(&mut rng, 4, 2);
        let dir = crate::rng::random_matrix(&mut rng, 4, 2);
        let euclid = {
            let mut g = ComplexMatrix::zeros(4, 2);
            for (b, r) in v.basis().iter().zip(traceless_parts(&v, f.matrix())) {
                g.axpy(C64::new(4.0, 0.0), &b.matmul(&f.matrix().matmul(&r)));
            }
            g
        };
        let h = 1e-6;
        let obj = |m: &ComplexMatrix| -> f64 {
            traceless_parts(&v, m).iter().map(|r| r.frobenius_norm().powi(2)).sum()
        };
        let fd = (obj(&f.matrix().add(&dir.scale_real(h))) - obj(&f.matrix().sub(&dir.scale_real(h)))) / (2.0 * h);
        let analytic = euclid.hs_inner(&dir).re;
        assert!((fd - analytic).abs() < 1e-6 * analytic.abs().max(1.0), "{fd} vs {analytic}");
    }

    #[test]
    fn diagonal_systems_have_no_pairs() {
        let tol = Tolerances::default();
        for n in 2..=4 {
            let v = diagonal_system(n).unwrap();
            let out = anticlique_search(&v, 2, SearchBudget { restarts: 4, iterations: 200 }, 7, &tol).unwrap();
            match out {
                SearchOutcome::NotFound { best_objective, best_residual, .. } => {
                    // on D_n every rank-2 frame has objective at least 2/n
                    assert!(best_objective >= 2.0 / n as f64 - 1e-9, "{best_objective}");
                    assert!(best_residual > 1e-4);
                }
                SearchOutcome::Found { .. } => panic!("D_{n} has no quantum 2-anticlique"),
            }
        }
    }

    #[test]
    fn single_matrix_pairs_are_found() {
        let tol = Tolerances::default();
        let mut rng = stream(10, 0);
        let v = make_system(4, vec![crate::rng::random_hermitian(&mut rng, 4).into_matrix()], "").unwrap();
        let out = anticlique_search(&v, 2, SearchBudget::default(), 3, &tol).unwrap();
        let c = out.certificate().expect("span(I, A) in M_4 has a 2-anticlique");
        assert!(c.residual <= 1e-8);
    }
}
