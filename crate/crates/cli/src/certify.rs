use serde::Serialize;

use opsys_turan_core::anticlique::{certify_no_anticlique_generic, certify_no_anticlique_projsum};
use opsys_turan_core::linalg::{eigh, numerical_rank};
use opsys_turan_core::opsys::{is_anticlique, is_clique};
use opsys_turan_core::{CertResult, ComplexMatrix, HermitianMatrix, OrthonormalFrame, Projection, RankCert, Verdict};

use crate::config::{ExperimentConfig, OutputFormat};
use crate::format::{read_certificate, read_system_doc};
use crate::report::{render_table, sci, usage, InputError, Report};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertifyRecord {
    pub check: String,
    pub passed: bool,
    /// `pass`, `fail` or `indeterminate`.
    pub verdict: String,
    pub rank: Option<usize>,
    /// Bracket for the rank when the two-threshold rule was inconclusive.
    pub rank_bounds: Option<[usize; 2]>,
    pub residual: f64,
    pub indeterminate: bool,
}

impl CertifyRecord {
    fn simple(check: impl Into<String>, passed: bool, rank: Option<usize>, residual: f64) -> Self {
        Self {
            check: check.into(),
            passed,
            verdict: if passed { "pass" } else { "fail" }.into(),
            rank,
            rank_bounds: None,
            residual,
            indeterminate: false,
        }
    }

    fn from_cert(check: impl Into<String>, r: &CertResult) -> Self {
        let (rank, rank_bounds) = match r.rank {
            RankCert::Exact(d) => (Some(d), None),
            RankCert::Indeterminate { lower, upper } => (None, Some([lower, upper])),
        };
        Self {
            check: check.into(),
            passed: r.passed(),
            verdict: match r.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "fail",
                Verdict::Indeterminate => "indeterminate",
            }
            .into(),
            rank,
            rank_bounds,
            residual: r.residual,
            indeterminate: r.verdict == Verdict::Indeterminate,
        }
    }
}

/// Reads a Hermitian idempotent: its range frame and `||P^2 - P||_F`.
fn as_projection(m: &ComplexMatrix, tol: f64) -> Option<(Projection, f64)> {
    let h = HermitianMatrix::new(m.clone(), tol).ok()?;
    let defect = m.matmul(m).sub(m).frobenius_norm();
    let eig = eigh(&h).ok()?;
    let keep: Vec<usize> = (0..m.rows()).filter(|&i| eig.values[i] > 0.5).collect();
    let cols: Vec<_> = keep.iter().map(|&i| eig.vectors.column(i)).collect();
    if cols.is_empty() {
        return None;
    }
    let frame = OrthonormalFrame::new(ComplexMatrix::from_columns(m.rows(), &cols).ok()?, 1e-8).ok()?;
    Some((Projection::new(frame), defect))
}

pub fn cmd_certify(config: &ExperimentConfig) -> Result<Report, InputError> {
    let path = config.input.as_ref().ok_or_else(|| usage("certify needs --in SYSTEM"))?;
    let doc = read_system_doc(path)?;
    let tol = &config.tolerances;
    let claim = match (&config.claim, &config.certificate) {
        (Some(c), _) => c.clone(),
        (None, Some(_)) => "anticlique".into(),
        (None, None) => "projsum".into(),
    };
    let mut report = Report::default();
    let mut records = Vec::new();
    match claim.as_str() {
        "projsum" => {
            let mut projections = Vec::new();
            for (i, m) in doc.matrices()?.iter().enumerate() {
                match as_projection(m, tol.certify_tol) {
                    Some((p, defect)) => {
                        records.push(CertifyRecord::simple(
                            format!("projection[{i}]"),
                            defect <= tol.certify_tol,
                            Some(p.rank()),
                            defect,
                        ));
                        projections.push(p);
                    }
                    None => records.push(CertifyRecord::simple(format!("projection[{i}]"), false, None, f64::INFINITY)),
                }
            }
            let k = config.k.unwrap_or_else(|| projections.iter().map(Projection::rank).max().unwrap_or(0));
            let n = doc.n;
            let mut total = ComplexMatrix::identity(n).scale_real(-1.0);
            for m in doc.matrices()? {
                total = total.add(&m);
            }
            let ok = projections.len() == doc.matrices.len() && certify_no_anticlique_projsum(&projections, k, tol);
            records.push(CertifyRecord::simple(format!("no_anticlique(k+1={})", k + 1), ok, Some(k), total.frobenius_norm()));
        }
        "generic" => {
            let ms = doc.matrices()?;
            let k = config.k.unwrap_or_else(|| ms.iter().map(|m| numerical_rank(m, tol.certify_tol)).max().unwrap_or(0));
            let ok = certify_no_anticlique_generic(&ms, k, tol);
            records.push(CertifyRecord::simple(format!("no_anticlique(k+1={})", k + 1), ok, Some(k), 0.0));
        }
        "anticlique" | "clique" => {
            let cpath = config.certificate.as_ref().ok_or_else(|| usage("--cert is required for this claim"))?;
            let cert = read_certificate(cpath)?;
            let v = doc.to_system()?;
            if cert.n != v.n() {
                return Err(usage(format!("certificate in C^{} for a system in M_{}", cert.n, v.n())));
            }
            let frame = cert.to_frame(tol.frame_tol)?;
            let r = if claim == "clique" { is_clique(&frame, &v, tol)? } else { is_anticlique(&frame, &v, tol)? };
            records.push(CertifyRecord::from_cert(format!("{claim}(rank {})", frame.rank()), &r));
        }
        other => return Err(usage(format!("unknown claim {other:?}"))),
    }
    report.success = records.iter().all(|r| r.passed);
    for r in &records {
        report.push(r);
    }
    if config.format != OutputFormat::Jsonl {
        let rows: Vec<Vec<String>> = records
            .iter()
            .map(|r| {
                let rank = match (r.rank, r.rank_bounds) {
                    (Some(d), _) => d.to_string(),
                    (None, Some([lo, hi])) => format!("[{lo}, {hi}]"),
                    _ => String::new(),
                };
                vec![r.check.clone(), r.verdict.clone(), rank, sci(r.residual)]
            })
            .collect();
        report.table = render_table(&["check", "verdict", "rank", "residual"], &rows);
    }
    Ok(report)
}
