use rayon::prelude::*;
use serde::Serialize;

use opsys_turan_core::anticlique::{anticlique_search, m4_anticlique, M4Case, SearchBudget, SearchOutcome};
use opsys_turan_core::clique::clique_search_random;
use opsys_turan_core::opsys::{bipartite_system, diagonal_system, full_system};
use opsys_turan_core::OperatorSystem;

use crate::config::{ExperimentConfig, OutputFormat};
use crate::format::{read_system, write_certificate, CertificateDoc};
use crate::generate::{m4_system, planted_m4, projsum_system, random_system};
use crate::report::{render_table, sci, usage, InputError, Report};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchRecord {
    pub system: String,
    pub n: usize,
    pub dimension: usize,
    pub k: usize,
    /// `anticlique` or `clique`.
    pub target: String,
    pub found: bool,
    /// Restart (anticliques) or trial (cliques) that succeeded.
    pub attempt: Option<usize>,
    /// Best search objective; zero for clique sampling.
    pub best_objective: f64,
    pub best_residual: f64,
    /// For `span(I_4, A, B)` systems: the branch of the explicit
    /// construction and whether it also produced a certificate.
    pub m4_case: Option<String>,
    pub m4_valid: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeSummary {
    pub probe: String,
    pub systems: usize,
    pub found: usize,
    pub not_found: usize,
}

pub struct SearchResult {
    pub record: SearchRecord,
    pub certificate: Option<CertificateDoc>,
}

/// Runs one anticlique (or clique) search on `v`.
pub fn search_system(v: &OperatorSystem, k: usize, clique: bool, config: &ExperimentConfig) -> Result<SearchResult, InputError> {
    let tol = &config.tolerances;
    if k == 0 || k > v.n() {
        return Err(usage(format!("rank {k} in C^{}", v.n())));
    }
    let base = SearchRecord {
        system: v.label().to_string(),
        n: v.n(),
        dimension: v.dimension(),
        k,
        target: if clique { "clique" } else { "anticlique" }.into(),
        found: false,
        attempt: None,
        best_objective: 0.0,
        best_residual: 0.0,
        m4_case: None,
        m4_valid: None,
    };
    if clique {
        let hit = clique_search_random(v, k, config.trials, config.seed, tol)?;
        return Ok(match hit {
            Some((c, t)) => SearchResult {
                record: SearchRecord { found: true, attempt: Some(t), best_residual: c.check.residual, ..base },
                certificate: Some(CertificateDoc::new(&c.frame, c.check.residual, c.method.as_str())),
            },
            None => SearchResult { record: base, certificate: None },
        });
    }
    let budget = SearchBudget { restarts: config.restarts, iterations: config.iterations };
    Ok(match anticlique_search(v, k, budget, config.seed, tol)? {
        SearchOutcome::Found { certificate, restart } => SearchResult {
            record: SearchRecord {
                found: true,
                attempt: Some(restart),
                best_objective: opsys_turan_core::anticlique::search_objective(v, &certificate.frame),
                best_residual: certificate.residual,
                ..base
            },
            certificate: Some(CertificateDoc::new(&certificate.frame, certificate.residual, certificate.method.as_str())),
        },
        SearchOutcome::NotFound { best_objective, best_residual, .. } => SearchResult {
            record: SearchRecord { best_objective, best_residual, ..base },
            certificate: None,
        },
    })
}

/// A built-in system family by name: `diagonal`, `full`, `bipartite`,
/// `projsum`, `random` (needs `--d`) or `m4`.
pub fn builtin_system(config: &ExperimentConfig) -> Result<(OperatorSystem, Option<M4Case>), InputError> {
    let name = config.system.as_deref().unwrap_or("random");
    let n = config.n;
    let need_n = || n.ok_or_else(|| usage(format!("--n is required for the {name} system")));
    let need_k = || config.k.ok_or_else(|| usage(format!("--k is required for the {name} system")));
    Ok(match name {
        "diagonal" => (diagonal_system(need_n()?)?, None),
        "full" => (full_system(need_n()?)?, None),
        "bipartite" => (bipartite_system(need_k()?)?, None),
        "projsum" => (projsum_system(need_n()?, need_k()?, config.seed, 0)?.0, None),
        "random" => {
            let d = config.d.ok_or_else(|| usage("--d is required for the random system"))?;
            (random_system(need_n()?, d, config.seed, 0)?, None)
        }
        "m4" => {
            let case = crate::generate::ALL_M4_CASES[(config.seed % 3) as usize];
            let (a, b) = planted_m4(case, config.seed, 0);
            (m4_system(&a, &b)?, Some(case))
        }
        other => return Err(usage(format!("unknown system family {other:?}"))),
    })
}

pub fn cmd_search(config: &ExperimentConfig) -> Result<Report, InputError> {
    if let Some(probe) = &config.probe {
        return match probe.as_str() {
            "t41" => probe_t41(config),
            other => Err(usage(format!("unknown probe {other:?}"))),
        };
    }
    let (v, m4) = match &config.input {
        Some(path) => (read_system(path)?, None),
        None => builtin_system(config)?,
    };
    let k = match (config.k, config.system.as_deref(), m4) {
        (_, _, Some(_)) => 2,
        (_, Some("projsum"), _) => config.k.map(|k| k + 1).unwrap_or(2),
        (Some(k), _, _) => k,
        (None, _, _) => 2,
    };
    let mut result = search_system(&v, k, config.clique, config)?;
    if let Some(case) = m4 {
        let (a, b) = planted_m4(case, config.seed, 0);
        let explicit = m4_anticlique(&a, &b, &config.tolerances);
        result.record.m4_case = explicit.as_ref().ok().map(|(_, c)| c.as_str().to_string());
        result.record.m4_valid = Some(explicit.map(|(c, _)| c.is_valid()).unwrap_or(false));
    }
    if let (Some(path), Some(doc)) = (&config.output, &result.certificate) {
        write_certificate(path, doc)?;
    }
    let mut report = Report { success: result.record.found, ..Report::default() };
    report.push(&result.record);
    if config.format != OutputFormat::Jsonl {
        report.table = search_table(std::slice::from_ref(&result.record));
    }
    Ok(report)
}

/// Random 3-dimensional systems `span(I_4, A, B)`, one per trial, each
/// searched for a 2-anticlique.
fn probe_t41(config: &ExperimentConfig) -> Result<Report, InputError> {
    let results: Vec<Result<SearchRecord, InputError>> = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let v = random_system(4, 3, config.seed, t as u64)?.with_label(format!("t41[{t}]"));
            Ok(search_system(&v, 2, false, config)?.record)
        })
        .collect();
    let mut report = Report::default();
    let mut records = Vec::new();
    for r in results {
        let r = r?;
        report.push(&r);
        records.push(r);
    }
    let found = records.iter().filter(|r| r.found).count();
    report.push(&ProbeSummary { probe: "t41".into(), systems: records.len(), found, not_found: records.len() - found });
    report.success = found == records.len();
    if config.format != OutputFormat::Jsonl {
        report.table = search_table(&records);
    }
    Ok(report)
}

fn search_table(records: &[SearchRecord]) -> String {
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            vec![
                r.system.clone(),
                r.n.to_string(),
                r.dimension.to_string(),
                r.k.to_string(),
                r.target.clone(),
                if r.found { "found" } else { "not found" }.into(),
                r.attempt.map(|a| a.to_string()).unwrap_or_default(),
                sci(r.best_objective),
                sci(r.best_residual),
            ]
        })
        .collect();
    render_table(&["system", "n", "dim", "k", "target", "outcome", "attempt", "objective", "residual"], &rows)
}
