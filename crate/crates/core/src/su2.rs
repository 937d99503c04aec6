//! Finding `lambda in [0, 1]` and `U in SU(2)` with
//! `S B_1 S + C U B_2 S + S B_2^* U^* C + C U B_3 U^* C` scalar, where
//! `S = diag(sqrt(lambda), sqrt(lambda/a))` and
//! `C = diag(sqrt(1 - lambda), sqrt(1 - lambda/a))`.
//!
//! Existence is a topological fact (at `lambda = 0` the defect map is the
//! Hopf fibration up to a rotation), not an algorithm, so the solver samples
//! a grid over `lambda x S^3` and refines the best cells with
//! Levenberg-Marquardt. `lambda = sin^2(theta)` keeps `lambda` in range and
//! `U` moves by right multiplication with `exp(i t . sigma)`.

use alloc::vec::Vec;

use crate::linalg::{eigh, ComplexMatrix, HermitianMatrix, C64};
use crate::rng::{gaussian, stream};
use crate::{Error, Result};

/// Unit quaternion `(z0, z1)`, materialized as `[[z0, -conj(z1)], [z1, conj(z0)]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2Point {
    pub z0: C64,
    pub z1: C64,
}

impl Su2Point {
    pub const IDENTITY: Su2Point = Su2Point { z0: C64::new(1.0, 0.0), z1: C64::new(0.0, 0.0) };

    /// Normalizes `(z0, z1)`; `None` for the zero vector.
    pub fn new(z0: C64, z1: C64) -> Option<Self> {
        let r = (z0.norm_sqr() + z1.norm_sqr()).sqrt();
        (r > 0.0 && r.is_finite()).then(|| Self { z0: z0 / r, z1: z1 / r })
    }

    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => self.z0,
            (0, 1) => -self.z1.conj(),
            (1, 0) => self.z1,
            _ => self.z0.conj(),
        })
    }

    /// Reads the first column of an `SU(2)` matrix.
    pub fn from_matrix(u: &ComplexMatrix) -> Option<Self> {
        Self::new(u[(0, 0)], u[(1, 0)])
    }

    /// `U exp(i (t_1 sigma_x + t_2 sigma_y + t_3 sigma_z))`.
    fn step(&self, t: [f64; 3]) -> Self {
        let r = (t[0] * t[0] + t[1] * t[1] + t[2] * t[2]).sqrt();
        let (c, s) = (r.cos(), if r > 0.0 { r.sin() / r } else { 1.0 });
        let i = C64::new(0.0, 1.0);
        // exp(i t.sigma) = cos r I + i sin r (t/r).sigma
        let e = ComplexMatrix::from_fn(2, 2, |a, b| match (a, b) {
            (0, 0) => C64::new(c, 0.0) + i * s * t[2],
            (1, 1) => C64::new(c, 0.0) - i * s * t[2],
            (0, 1) => i * s * t[0] + C64::new(s * t[1], 0.0),
            _ => i * s * t[0] - C64::new(s * t[1], 0.0),
        });
        Self::from_matrix(&self.matrix().matmul(&e)).unwrap_or(*self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rank2Problem {
    pub b1: HermitianMatrix,
    pub b2: ComplexMatrix,
    pub b3: HermitianMatrix,
    pub a: f64,
}

impl Rank2Problem {
    pub fn new(b1: HermitianMatrix, b2: ComplexMatrix, b3: HermitianMatrix, a: f64) -> Result<Self> {
        if b1.n() != 2 || b3.n() != 2 || b2.rows() != 2 || b2.cols() != 2 {
            return Err(Error::ShapeMismatch(alloc::string::String::from("blocks must be 2x2")));
        }
        if !(a >= 1.0 && a.is_finite()) {
            return Err(Error::ShapeMismatch(alloc::format!("a = {a} must be at least 1")));
        }
        Ok(Self { b1, b2, b3, a })
    }

    fn scale(&self) -> f64 {
        self.b1.matrix().frobenius_norm().max(self.b2.frobenius_norm()).max(self.b3.matrix().frobenius_norm())
    }
}

fn s_and_c(lambda: f64, a: f64) -> (ComplexMatrix, ComplexMatrix) {
    let l = lambda.clamp(0.0, 1.0);
    let s = ComplexMatrix::from_real_diag(&[l.sqrt(), (l / a).sqrt()]);
    let c = ComplexMatrix::from_real_diag(&[(1.0 - l).sqrt(), (1.0 - l / a).max(0.0).sqrt()]);
    (s, c)
}

/// `f_lambda(U)`.
pub fn f_lambda(p: &Rank2Problem, lambda: f64, u: &Su2Point) -> HermitianMatrix {
    let (s, c) = s_and_c(lambda, p.a);
    let um = u.matrix();
    let cu = c.matmul(&um);
    let cross = cu.matmul(&p.b2).matmul(&s);
    let value = s
        .matmul(p.b1.matrix())
        .matmul(&s)
        .add(&cross)
        .add(&cross.adjoint())
        .add(&cu.matmul(p.b3.matrix()).matmul(&cu.adjoint()));
    debug_assert!(value.hermitian_defect() <= 1e-12 * value.frobenius_norm().max(1.0));
    HermitianMatrix::from_part(&value)
}

/// `g(A) = (a_11 - a_22, 2 a_12)`, which vanishes exactly on scalars.
pub fn g(a: &HermitianMatrix) -> (f64, C64) {
    let m = a.matrix();
    (m[(0, 0)].re - m[(1, 1)].re, m[(0, 1)] * 2.0)
}

/// `g(f_lambda(U))`.
pub fn defect(p: &Rank2Problem, lambda: f64, u: &Su2Point) -> (f64, C64) {
    g(&f_lambda(p, lambda, u))
}

fn defect_norm(d: (f64, C64)) -> f64 {
    (d.0 * d.0 + d.1.norm_sqr()).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2Solution {
    pub lambda: f64,
    pub u: Su2Point,
    /// `|defect|` at the returned point.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridConfig {
    pub thetas: usize,
    pub sphere_points: usize,
    pub starts: usize,
    pub seed: u64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { thetas: 16, sphere_points: 512, starts: 12, seed: 0x5eed_0002 }
    }
}

const LM_ITERATIONS: usize = 100;

/// Solves with the default grid, retrying twice on a denser one.
pub fn solve(p: &Rank2Problem, solver_tol: f64) -> Result<Su2Solution> {
    let base = GridConfig::default();
    let mut best = f64::INFINITY;
    for level in 0..3u64 {
        let cfg = GridConfig {
            thetas: base.thetas << level,
            sphere_points: base.sphere_points << (2 * level),
            starts: base.starts << level,
            seed: base.seed.wrapping_add(level),
        };
        match solve_with(p, solver_tol, cfg) {
            Ok(s) => return Ok(s),
            Err(Error::SolverFailed { residual }) => best = best.min(residual),
            Err(e) => return Err(e),
        }
    }
    Err(Error::SolverFailed { residual: best })
}

/// Grid search over `theta x S^3` followed by Levenberg-Marquardt from the
/// best `starts` cells (ordered by residual, then grid index).
pub fn solve_with(p: &Rank2Problem, solver_tol: f64, cfg: GridConfig) -> Result<Su2Solution> {
    let b3 = p.b3.matrix();
    let gap = {
        let e = eigh(&p.b3)?;
        e.values[1] - e.values[0]
    };
    if gap < 1e-10 * (1.0 + b3.frobenius_norm()) {
        let residual = defect_norm(defect(p, 0.0, &Su2Point::IDENTITY));
        return Ok(Su2Solution { lambda: 0.0, u: Su2Point::IDENTITY, residual });
    }
    // the defect is linear in the blocks, so solve the unit-scale problem
    let scale = p.scale();
    let unit = Rank2Problem {
        b1: HermitianMatrix::from_part(&p.b1.matrix().scale_real(1.0 / scale)),
        b2: p.b2.scale_real(1.0 / scale),
        b3: HermitianMatrix::from_part(&b3.scale_real(1.0 / scale)),
        a: p.a,
    };
    let tol = solver_tol / scale;

    let mut rng = stream(cfg.seed, 0);
    let sphere: Vec<Su2Point> = (0..cfg.sphere_points)
        .filter_map(|_| {
            Su2Point::new(
                C64::new(gaussian(&mut rng), gaussian(&mut rng)),
                C64::new(gaussian(&mut rng), gaussian(&mut rng)),
            )
        })
        .collect();
    let mut cells: Vec<(f64, usize, f64, Su2Point)> = Vec::with_capacity(cfg.thetas * sphere.len());
    for ti in 0..cfg.thetas {
        let theta = core::f64::consts::FRAC_PI_2 * (ti as f64 + 0.5) / cfg.thetas as f64;
        let lambda = theta.sin().powi(2);
        for (si, u) in sphere.iter().enumerate() {
            let r = defect_norm(defect(&unit, lambda, u));
            cells.push((r, ti * sphere.len() + si, theta, *u));
        }
    }
    cells.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));

    let mut best = f64::INFINITY;
    for &(_, _, theta, u) in cells.iter().take(cfg.starts) {
        let (theta, u, r) = levenberg_marquardt(&unit, theta, u, tol);
        let lambda = theta.sin().powi(2).clamp(0.0, 1.0);
        let residual = defect_norm(defect(p, lambda, &u));
        if residual <= solver_tol {
            return Ok(Su2Solution { lambda, u, residual });
        }
        best = best.min(r * scale);
    }
    Err(Error::SolverFailed { residual: best })
}

fn residual_vec(p: &Rank2Problem, theta: f64, u: &Su2Point) -> [f64; 3] {
    let (d0, d1) = defect(p, theta.sin().powi(2), u);
    [d0, d1.re, d1.im]
}

fn evaluate(p: &Rank2Problem, x: &[f64; 4], theta: f64, u: &Su2Point) -> [f64; 3] {
    residual_vec(p, theta + x[0], &u.step([x[1], x[2], x[3]]))
}

fn levenberg_marquardt(p: &Rank2Problem, mut theta: f64, mut u: Su2Point, tol: f64) -> (f64, Su2Point, f64) {
    let norm3 = |r: &[f64; 3]| (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    let mut r = residual_vec(p, theta, &u);
    let mut rn = norm3(&r);
    let mut mu = 1e-3;
    let h = 1e-7;
    for _ in 0..LM_ITERATIONS {
        if rn <= tol * 0.1 {
            break;
        }
        // central-difference Jacobian, 3 x 4
        let mut jac = [[0.0f64; 4]; 3];
        for k in 0..4 {
            let mut xp = [0.0; 4];
            xp[k] = h;
            let mut xm = [0.0; 4];
            xm[k] = -h;
            let fp = evaluate(p, &xp, theta, &u);
            let fm = evaluate(p, &xm, theta, &u);
            for i in 0..3 {
                jac[i][k] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let mut improved = false;
        for _ in 0..12 {
            // minimum-norm damped step: delta = -J^T (J J^T + mu I)^{-1} r
            let mut m = [[0.0f64; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    m[i][j] = (0..4).map(|k| jac[i][k] * jac[j][k]).sum::<f64>() + if i == j { mu } else { 0.0 };
                }
            }
            let Some(y) = solve3(m, r) else {
                mu *= 10.0;
                continue;
            };
            let mut x = [0.0; 4];
            for (k, xk) in x.iter_mut().enumerate() {
                *xk = -(0..3).map(|i| jac[i][k] * y[i]).sum::<f64>();
            }
            let cand_theta = theta + x[0];
            let cand_u = u.step([x[1], x[2], x[3]]);
            let cand_r = residual_vec(p, cand_theta, &cand_u);
            let cand_n = norm3(&cand_r);
            if cand_n < rn {
                theta = cand_theta;
                u = cand_u;
                r = cand_r;
                rn = cand_n;
                mu = (mu / 3.0).max(1e-15);
                improved = true;
                break;
            }
            mu *= 4.0;
        }
        if !improved {
            break;
        }
    }
    (theta, u, rn)
}

fn solve3(mut m: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let s: f64 = (row + 1..3).map(|k| m[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / m[row][row];
    }
    Some(x)
}
