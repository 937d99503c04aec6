use alloc::vec;
use alloc::vec::Vec;

use crate::lp::feasible_point;
use crate::{Error, Result};

/// Blocks `S_1, ..., S_k` of point indices with convex weights whose
/// block-wise combinations all equal `point`.
#[derive(Debug, Clone, PartialEq)]
pub struct TverbergPartition {
    pub blocks: Vec<Vec<usize>>,
    /// One weight per point index; weights within a block sum to one.
    pub weights: Vec<f64>,
    pub point: Vec<f64>,
}

impl TverbergPartition {
    /// Largest violation of the partition invariants: block sums, weight
    /// signs, and distance of each block's combination from `point`.
    pub fn defect(&self, points: &[Vec<f64>]) -> f64 {
        let mut worst = 0.0f64;
        let mut seen = vec![false; points.len()];
        for block in &self.blocks {
            if block.is_empty() {
                return f64::INFINITY;
            }
            let mut sum = 0.0;
            let mut combo = vec![0.0; self.point.len()];
            for &j in block {
                if j >= points.len() || seen[j] {
                    return f64::INFINITY;
                }
                seen[j] = true;
                let w = self.weights[j];
                worst = worst.max(-w);
                sum += w;
                combo.iter_mut().zip(&points[j]).for_each(|(c, p)| *c += w * p);
            }
            worst = worst.max((sum - 1.0).abs());
            for (c, b) in combo.iter().zip(&self.point) {
                worst = worst.max((c - b).abs());
            }
        }
        if seen.iter().any(|s| !s) {
            return f64::INFINITY;
        }
        worst
    }
}

/// A Tverberg partition of `points` (all of the same dimension `m`) into
/// `k` blocks.
///
/// Only the first `(k-1)(m+1)+1` points take part in the search, which is
/// exactly the number Tverberg's theorem needs; partitions of those are
/// enumerated as restricted-growth strings and each is tested by a
/// phase-one simplex. Remaining points join the last block with weight 0.
pub fn tverberg_partition(points: &[Vec<f64>], k: usize, lp_tol: f64) -> Result<TverbergPartition> {
    let m = points.first().map_or(0, Vec::len);
    if points.iter().any(|p| p.len() != m) {
        return Err(Error::ShapeMismatch(alloc::string::String::from("points of different dimensions")));
    }
    let needed = (k.max(1) - 1) * (m + 1) + 1;
    if k == 0 || points.len() < needed {
        return Err(Error::TooFewPoints { needed, got: points.len() });
    }
    let active = &points[..needed];
    let mut labels = vec![0usize; needed];
    let found = search(active, k, lp_tol, &mut labels, 0, 0);
    let Some((mut blocks, mut weights)) = found else {
        return Err(Error::SearchExhausted);
    };
    weights.resize(points.len(), 0.0);
    blocks[k - 1].extend(needed..points.len());
    let point = combination(points, &blocks[0], &weights, m);
    let part = TverbergPartition { blocks, weights, point };
    if part.defect(points) > lp_tol {
        return Err(Error::SearchExhausted);
    }
    Ok(part)
}

type Found = Option<(Vec<Vec<usize>>, Vec<f64>)>;

fn search(points: &[Vec<f64>], k: usize, tol: f64, labels: &mut [usize], pos: usize, used: usize) -> Found {
    let n = labels.len();
    if pos == n {
        return if used == k { try_partition(points, k, labels, tol) } else { None };
    }
    if used + (n - pos) < k {
        return None;
    }
    let top = if pos == 0 { 1 } else { (used + 1).min(k) };
    for label in 0..top {
        labels[pos] = label;
        let next_used = used.max(label + 1);
        if let Some(hit) = search(points, k, tol, labels, pos + 1, next_used) {
            return Some(hit);
        }
    }
    None
}

fn try_partition(points: &[Vec<f64>], k: usize, labels: &[usize], tol: f64) -> Found {
    let n = labels.len();
    let m = points[0].len();
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (j, &l) in labels.iter().enumerate() {
        blocks[l].push(j);
    }
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(k + (k - 1) * m);
    let mut rhs = Vec::with_capacity(rows.capacity());
    for block in &blocks {
        let mut row = vec![0.0; n];
        block.iter().for_each(|&j| row[j] = 1.0);
        rows.push(row);
        rhs.push(1.0);
    }
    for l in 1..k {
        for c in 0..m {
            let mut row = vec![0.0; n];
            for &j in &blocks[l] {
                row[j] += points[j][c];
            }
            for &j in &blocks[0] {
                row[j] -= points[j][c];
            }
            rows.push(row);
            rhs.push(0.0);
        }
    }
    let mu = feasible_point(&rows, &rhs, tol * 0.1)?;
    let part = TverbergPartition { blocks: blocks.clone(), weights: mu.clone(), point: combination(points, &blocks[0], &mu, m) };
    (part.defect(points) <= tol).then_some((blocks, mu))
}

fn combination(points: &[Vec<f64>], block: &[usize], weights: &[f64], m: usize) -> Vec<f64> {
    let mut b = vec![0.0; m];
    for &j in block {
        b.iter_mut().zip(&points[j]).for_each(|(x, p)| *x += weights[j] * p);
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{gaussian, stream};

    #[test]
    fn median_of_three_collinear_points() {
        let pts = vec![vec![0.0], vec![5.0], vec![10.0]];
        let t = tverberg_partition(&pts, 2, 1e-8).unwrap();
        assert_eq!(t.blocks, vec![vec![0, 2], vec![1]]);
        assert!((t.point[0] - 5.0).abs() < 1e-12);
        for (w, e) in t.weights.iter().zip([0.5, 1.0, 0.5]) {
            assert!((w - e).abs() < 1e-12);
        }
    }

    #[test]
    fn identical_points() {
        let pts = vec![vec![1.5, -2.0]; 7];
        let t = tverberg_partition(&pts, 3, 1e-8).unwrap();
        assert_eq!(t.blocks.len(), 3);
        assert!((t.point[0] - 1.5).abs() < 1e-12 && (t.point[1] + 2.0).abs() < 1e-12);
        assert!(t.defect(&pts) < 1e-12);
    }

    #[test]
    fn too_few_points() {
        let pts = vec![vec![0.0, 0.0]; 3];
        assert_eq!(tverberg_partition(&pts, 2, 1e-8), Err(Error::TooFewPoints { needed: 4, got: 3 }));
    }

    /// Whether conv(a) and conv(b) meet, by the LP in the weights alone.
    fn hulls_meet(pts: &[Vec<f64>], a: &[usize], b: &[usize]) -> bool {
        let n = pts.len();
        let m = pts[0].len();
        let mut rows = vec![vec![0.0; n], vec![0.0; n]];
        a.iter().for_each(|&j| rows[0][j] = 1.0);
        b.iter().for_each(|&j| rows[1][j] = 1.0);
        for c in 0..m {
            let mut row = vec![0.0; n];
            a.iter().for_each(|&j| row[j] = pts[j][c]);
            b.iter().for_each(|&j| row[j] = -pts[j][c]);
            rows.push(row);
        }
        let mut rhs = vec![1.0, 1.0];
        rhs.extend(core::iter::repeat_n(0.0, m));
        feasible_point(&rows, &rhs, 1e-9).is_some()
    }

    #[test]
    fn radon_partitions_in_the_plane_agree_with_brute_force() {
        let mut rng = stream(21, 0);
        for _ in 0..50 {
            let pts: Vec<Vec<f64>> = (0..4).map(|_| vec![gaussian(&mut rng), gaussian(&mut rng)]).collect();
            let t = tverberg_partition(&pts, 2, 1e-8).unwrap();
            assert!(hulls_meet(&pts, &t.blocks[0], &t.blocks[1]));
            // brute force over all 7 bipartitions: at least one meets, and
            // the first one in restricted-growth order is the one returned
            let mut first = None;
            for mask in 1u32..8 {
                let mut lab = [0usize; 4];
                (1..4).for_each(|j| lab[j] = ((mask >> (3 - j)) & 1) as usize);
                let a: Vec<usize> = (0..4).filter(|&j| lab[j] == 0).collect();
                let b: Vec<usize> = (0..4).filter(|&j| lab[j] == 1).collect();
                if hulls_meet(&pts, &a, &b) {
                    first = Some((a, b));
                    break;
                }
            }
            let (a, b) = first.expect("Radon's theorem");
            assert_eq!(t.blocks, vec![a, b]);
        }
    }

    #[test]
    fn leftover_points_get_zero_weight() {
        let pts: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64]).collect();
        let t = tverberg_partition(&pts, 2, 1e-8).unwrap();
        assert_eq!(t.blocks.iter().map(Vec::len).sum::<usize>(), 6);
        assert_eq!(&t.weights[3..], &[0.0, 0.0, 0.0]);
        assert!(t.defect(&pts) < 1e-12);
    }
}
