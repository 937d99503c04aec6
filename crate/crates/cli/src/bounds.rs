//! Desk-scale table of evidence for `T_down(n, k)` and `T_up(n, k)`.
//!
//! `T_down(n, k)` is the smallest dimension forcing no quantum
//! `(k+1)`-anticlique and `T_up(n, k)` the largest dimension admitting no
//! quantum `(k+1)`-clique. For every `(n, k)` with `k < n` the table lists
//! witnesses for known bounds together with the bracket they imply.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use opsys_turan_core::anticlique::{anticlique_pipeline, certify_no_anticlique_projsum};
use opsys_turan_core::clique::vq_extension_clique;
use opsys_turan_core::opsys::compress;
use opsys_turan_core::rng::{random_frame, splitmix64, stream};
use opsys_turan_core::{ComplexMatrix, OperatorSystem, RankCert, Tolerances};

use crate::config::{ExperimentConfig, OutputFormat};
use crate::generate::{projsum_system, random_system, vq_with_extension};
use crate::report::{render_table, sci, usage, InputError, Report};

/// Largest `n` accepted by [`cmd_bounds`].
pub const N_LIMIT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    /// The system has no quantum `(k+1)`-anticlique.
    NoAnticliqueK1,
    /// The system has no quantum `(k+1)`-clique.
    NoCliqueK1,
    AnticliqueFound,
    CliqueFound,
}

impl Claim {
    fn as_str(self) -> &'static str {
        match self {
            Claim::NoAnticliqueK1 => "no_anticlique_k1",
            Claim::NoCliqueK1 => "no_clique_k1",
            Claim::AnticliqueFound => "anticlique_found",
            Claim::CliqueFound => "clique_found",
        }
    }
}

/// One line of the bounds table.
///
/// `residual` depends on the claim: the scalar-fit residual of a found
/// anticlique; `||sum P_i - I||_F` for a projection-sum certificate; for
/// sampled no-clique evidence the largest `s_{(k+1)^2} / s_1` seen over the
/// sampled frames; for a found clique its own `s_{(k+1)^2} / s_1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub n: usize,
    pub k: usize,
    pub construction: String,
    pub dimension: usize,
    pub claim: Claim,
    pub residual: f64,
    pub paper_bound: f64,
    /// The witness checked out (or, for bracket rows, the bracket is
    /// consistent).
    pub certified: bool,
    /// `[lower, upper]` on bracket rows.
    pub bracket: Option<[usize; 2]>,
}

/// `2(k-1)n - (k-1)^2 + 1`.
pub fn vq_dimension(n: usize, k: usize) -> usize {
    2 * (k - 1) * n + 1 - (k - 1) * (k - 1)
}

/// Smallest integer `t` with `t > sqrt(n/k)`.
pub fn sqrt_lower(n: usize, k: usize) -> usize {
    (1..).find(|t| t * t * k > n).expect("unbounded range")
}

/// Largest `d >= 2` with `k d + 1 <= ceil(n / (d - 1))`, the range in which
/// every `d`-dimensional system has a `(k+1)`-anticlique.
pub fn pipeline_dimension(n: usize, k: usize) -> Option<usize> {
    (2..=n).filter(|&d| k * d + 1 <= n.div_ceil(d - 1)).max()
}

fn subtask(n: usize, k: usize, row: u64) -> u64 {
    ((n as u64) << 32) | ((k as u64) << 16) | row
}

/// Samples `trials` Haar frames of rank `r`; returns whether any was a
/// clique and the largest `s_{r^2} / s_1`.
pub fn sample_cliques(v: &OperatorSystem, r: usize, trials: usize, seed: u64, tol: &Tolerances) -> (bool, f64) {
    let mut found = false;
    let mut worst = 0.0f64;
    for t in 0..trials {
        let f = random_frame(&mut stream(seed, t as u64), v.n(), r);
        let c = compress(v, &f, tol).expect("frame matches system");
        worst = worst.max(c.relative_singular_values.get(r * r - 1).copied().unwrap_or(0.0));
        found |= c.rank == RankCert::Exact(r * r);
    }
    (found, worst)
}

fn projsum_residual(ps: &[opsys_turan_core::Projection], n: usize) -> f64 {
    let mut total = ComplexMatrix::identity(n).scale_real(-1.0);
    for p in ps {
        total = total.add(&p.matrix());
    }
    total.frobenius_norm()
}

/// All rows for one `(n, k)`.
pub fn rows_for(n: usize, k: usize, seed: u64, trials: usize, tol: &Tolerances) -> Result<Vec<BoundsRow>, InputError> {
    let row = |construction: &str, dimension, claim, residual, paper_bound, certified| BoundsRow {
        n,
        k,
        construction: construction.into(),
        dimension,
        claim,
        residual,
        paper_bound,
        certified,
        bracket: None,
    };
    let mut rows = Vec::new();
    let upper = n.div_ceil(k);
    let sq = (n as f64 / k as f64).sqrt();

    let (v, ps) = projsum_system(n, k, seed, subtask(n, k, 1))?;
    let projsum_ok = certify_no_anticlique_projsum(&ps, k, tol) && v.dimension() == upper;
    rows.push(row("projsum", v.dimension(), Claim::NoAnticliqueK1, projsum_residual(&ps, n), upper as f64, projsum_ok));

    let mut lower = sqrt_lower(n, k).max(2);
    if let Some(d) = pipeline_dimension(n, k) {
        let v = random_system(n, d, seed, subtask(n, k, 2))?;
        let cert = anticlique_pipeline(&v, k + 1, tol)?;
        let ok = cert.is_valid() && cert.rank() == k + 1 && v.dimension() == d;
        if ok {
            lower = lower.max(d + 1);
        }
        rows.push(row("pipeline", d, Claim::AnticliqueFound, cert.residual, sq, ok));
    }
    let mut bracket = row("t_down", upper, Claim::NoAnticliqueK1, 0.0, sq, projsum_ok && lower <= upper);
    bracket.bracket = Some([lower, upper]);
    rows.push(bracket);

    let f = vq_dimension(n, k);
    let s = splitmix64(seed ^ subtask(n, k, 3));
    let (v, _) = vq_with_extension(n, k, 0, seed, subtask(n, k, 3))?;
    let (hit, worst) = sample_cliques(&v, k + 1, trials, s, tol);
    rows.push(row("vq", v.dimension(), Claim::NoCliqueK1, worst, f as f64, v.dimension() == f && !hit));

    let (v, _) = vq_with_extension(n, k, 2, seed, subtask(n, k, 4))?;
    let (hit, worst) = sample_cliques(&v, k + 1, trials, splitmix64(s), tol);
    let ext2_ok = v.dimension() == f + 2 && !hit;
    rows.push(row("vq_ext2", v.dimension(), Claim::NoCliqueK1, worst, (f + 2) as f64, ext2_ok));

    let (v, q) = vq_with_extension(n, k, 3, seed, subtask(n, k, 5))?;
    let (ok, strength) = match vq_extension_clique(&v, &q, k, trials, splitmix64(s ^ 5), tol) {
        Ok(c) => {
            let r = c.rank();
            let strength = compress(&v, &c.frame, tol)?.relative_singular_values.get(r * r - 1).copied().unwrap_or(0.0);
            (c.is_valid() && r == k + 1, strength)
        }
        Err(_) => (false, 0.0),
    };
    rows.push(row("vq_ext3", v.dimension(), Claim::CliqueFound, strength, (f + 3) as f64, ok));

    let trivial = (k + 1) * (k + 1) - 1;
    rows.push(row("trivial", trivial, Claim::NoCliqueK1, 0.0, trivial as f64, true));

    let bound = 16.0 * ((k + 1) as f64).powi(8) * n as f64;
    let lo = if ext2_ok { trivial.max(f + 2) } else { trivial };
    let hi = (n * n - 1).min(bound.ceil() as usize - 1);
    let mut bracket = row("t_up", lo, Claim::NoCliqueK1, 0.0, bound, lo <= hi);
    bracket.bracket = Some([lo, hi]);
    rows.push(bracket);
    Ok(rows)
}

/// The `(n, k)` pairs covered by a config: `--n`/`--k` pin a value, otherwise
/// `2 <= n <= n_max` and `1 <= k <= min(k_max, n - 1)`.
pub fn pairs(config: &ExperimentConfig) -> Vec<(usize, usize)> {
    let ns: Vec<usize> = match config.n {
        Some(n) => vec![n],
        None => (2..=config.n_max).collect(),
    };
    let mut out = Vec::new();
    for n in ns {
        let ks: Vec<usize> = match config.k {
            Some(k) => vec![k],
            None => (1..=config.k_max.min(n.saturating_sub(1))).collect(),
        };
        out.extend(ks.into_iter().filter(|&k| k >= 1 && k < n).map(|k| (n, k)));
    }
    out
}

pub fn cmd_bounds(config: &ExperimentConfig) -> Result<Report, InputError> {
    let top = config.n.unwrap_or(config.n_max);
    if top > N_LIMIT {
        return Err(usage(format!("n = {top} exceeds the limit {N_LIMIT}")));
    }
    let pairs = pairs(config);
    if pairs.is_empty() {
        return Err(usage("no (n, k) pairs with 1 <= k < n in range"));
    }
    let tol = config.tolerances;
    let chunks: Vec<Result<Vec<BoundsRow>, InputError>> =
        pairs.par_iter().map(|&(n, k)| rows_for(n, k, config.seed, config.trials, &tol)).collect();
    let mut report = Report { success: true, ..Report::default() };
    let mut table = Vec::new();
    for chunk in chunks {
        for r in chunk? {
            report.success &= r.certified;
            table.push(table_row(&r));
            report.push(&r);
        }
    }
    if config.format != OutputFormat::Jsonl {
        report.table = render_table(
            &["n", "k", "construction", "dim", "claim", "residual", "bound", "bracket", "ok"],
            &table,
        );
    }
    Ok(report)
}

fn table_row(r: &BoundsRow) -> Vec<String> {
    let bracket = match r.bracket {
        Some([lo, hi]) if lo == hi => format!("{lo}"),
        Some([lo, hi]) => format!("[{lo}, {hi}]"),
        None => String::new(),
    };
    let bound = if r.paper_bound.fract() == 0.0 { format!("{}", r.paper_bound) } else { format!("{:.3}", r.paper_bound) };
    vec![
        r.n.to_string(),
        r.k.to_string(),
        r.construction.clone(),
        r.dimension.to_string(),
        r.claim.as_str().to_string(),
        sci(r.residual),
        bound,
        bracket,
        if r.certified { "yes" } else { "NO" }.to_string(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert_eq!(vq_dimension(6, 3), 21);
        assert_eq!(vq_dimension(5, 1), 1);
        assert_eq!(sqrt_lower(4, 1), 3);
        assert_eq!(sqrt_lower(3, 1), 2);
        assert_eq!(pipeline_dimension(3, 1), Some(2));
        assert_eq!(pipeline_dimension(12, 1), Some(3));
        assert_eq!(pipeline_dimension(4, 2), None);
    }

    #[test]
    fn small_brackets() {
        let tol = Tolerances::default();
        let rows = rows_for(3, 1, 7, 50, &tol).unwrap();
        let t = rows.iter().find(|r| r.construction == "t_down").unwrap();
        assert_eq!(t.bracket, Some([3, 3]));
        let rows = rows_for(4, 1, 7, 50, &tol).unwrap();
        let t = rows.iter().find(|r| r.construction == "t_down").unwrap();
        assert_eq!(t.bracket, Some([3, 4]));
        let rows = rows_for(6, 3, 7, 100, &tol).unwrap();
        let vq = rows.iter().find(|r| r.construction == "vq").unwrap();
        assert_eq!((vq.dimension, vq.claim, vq.certified), (21, Claim::NoCliqueK1, true));
        assert!(rows.iter().all(|r| r.certified), "{rows:?}");
    }
}
