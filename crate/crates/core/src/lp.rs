//! Dense phase-one simplex for feasibility of `A x = b, x >= 0`.
//!
//! Pivoting follows Bland's rule (lowest-index entering column, lowest-index
//! basic variable among ratio ties), so the method cannot cycle and the
//! result is a deterministic function of the input.

use alloc::vec;
use alloc::vec::Vec;

const PIVOT_EPS: f64 = 1e-12;
const MAX_PIVOTS: usize = 50_000;

/// Returns some `x >= 0` with `||A x - b||_inf <= tol`, or `None` when the
/// system is infeasible at that tolerance.
pub fn feasible_point(a: &[Vec<f64>], b: &[f64], tol: f64) -> Option<Vec<f64>> {
    let m = a.len();
    assert_eq!(m, b.len(), "row count mismatch");
    let n = a.first().map_or(0, Vec::len);
    if m == 0 {
        return Some(vec![0.0; n]);
    }
    let width = n + m + 1;
    let rhs = width - 1;

    let mut t: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    for (i, (row, &bi)) in a.iter().zip(b).enumerate() {
        assert_eq!(row.len(), n, "ragged constraint matrix");
        let sign = if bi < 0.0 { -1.0 } else { 1.0 };
        let mut r = vec![0.0; width];
        for (dst, &v) in r.iter_mut().zip(row) {
            *dst = sign * v;
        }
        r[n + i] = 1.0;
        r[rhs] = sign * bi;
        t.push(r);
    }
    let mut obj = vec![0.0; width];
    for r in &t {
        for j in 0..n {
            obj[j] -= r[j];
        }
        obj[rhs] -= r[rhs];
    }
    t.push(obj);
    let mut basis: Vec<usize> = (n..n + m).collect();

    for _ in 0..MAX_PIVOTS {
        let Some(enter) = (0..n + m).find(|&j| t[m][j] < -PIVOT_EPS) else {
            break;
        };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let piv = t[i][enter];
            if piv <= PIVOT_EPS {
                continue;
            }
            let ratio = t[i][rhs] / piv;
            leave = match leave {
                None => Some((i, ratio)),
                Some((li, lr)) => {
                    if ratio < lr - PIVOT_EPS || (ratio <= lr + PIVOT_EPS && basis[i] < basis[li]) {
                        Some((i, ratio))
                    } else {
                        Some((li, lr))
                    }
                }
            };
        }
        // phase one is bounded below by zero, so an entering column always has a pivot
        let Some((row, _)) = leave else { break };
        pivot(&mut t, row, enter);
        basis[row] = enter;
    }

    if -t[m][rhs] > tol {
        return None;
    }
    let mut x = vec![0.0; n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][rhs].max(0.0);
        }
    }
    let residual = a
        .iter()
        .zip(b)
        .map(|(row, bi)| (row.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>() - bi).abs())
        .fold(0.0, f64::max);
    (residual <= tol).then_some(x)
}

fn pivot(t: &mut [Vec<f64>], row: usize, col: usize) {
    let p = t[row][col];
    t[row].iter_mut().for_each(|v| *v /= p);
    let pivot_row = t[row].clone();
    for (i, r) in t.iter_mut().enumerate() {
        if i == row {
            continue;
        }
        let f = r[col];
        if f != 0.0 {
            for (dst, src) in r.iter_mut().zip(&pivot_row) {
                *dst -= f * src;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_feasible() {
        // x + y = 1, x - y = 0.5
        let x = feasible_point(&[vec![1.0, 1.0], vec![1.0, -1.0]], &[1.0, 0.5], 1e-10).unwrap();
        assert!((x[0] - 0.75).abs() < 1e-12 && (x[1] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn infeasible_by_sign() {
        // x + y = -1 with x, y >= 0
        assert!(feasible_point(&[vec![1.0, 1.0]], &[-1.0], 1e-10).is_none());
    }

    #[test]
    fn degenerate_redundant_rows() {
        let a = [vec![1.0, 1.0, 0.0], vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 1.0]];
        let x = feasible_point(&a, &[1.0, 1.0, 0.0], 1e-10).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12 && x[1].abs() < 1e-12 && x[2].abs() < 1e-12);
    }

    #[test]
    fn brute_force_agreement_on_segments() {
        // is 0.3 a convex combination of points p_j? compare with min/max
        let pts: [[f64; 2]; 4] = [[0.5, 0.9], [-1.0, 2.0], [0.31, 0.4], [0.2, 0.25]];
        for p in pts {
            let a = [vec![1.0, 1.0], p.to_vec()];
            let lo = p[0].min(p[1]);
            let hi = p[0].max(p[1]);
            let expect = lo <= 0.3 && 0.3 <= hi;
            assert_eq!(feasible_point(&a, &[1.0, 0.3], 1e-10).is_some(), expect, "{p:?}");
        }
    }
}
