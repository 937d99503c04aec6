use serde::Serialize;

use opsys_turan_core::anticlique::{
    anticlique_pipeline, diagonal_anticlique, m4_anticlique, pencil_anticlique, single_matrix_system, subsystem_anticlique,
    AnticliqueCertificate,
};
use opsys_turan_core::clique::{bipartite_clique, vq_extension_clique, CliqueCertificate};
use opsys_turan_core::opsys::bipartite_system;
use opsys_turan_core::rng::{gaussian, stream};
use opsys_turan_core::OperatorSystem;

use crate::config::{ExperimentConfig, OutputFormat};
use crate::format::{write_certificate, write_system, CertificateDoc};
use crate::generate::{
    m4_system, planted_m4, projsum_ranks, projsum_system, random_diagonal_system, random_hermitian_matrix, random_resolution,
    random_system, vq_with_extension, ALL_M4_CASES,
};
use crate::report::{render_table, sci, usage, InputError, Report};

pub const KINDS: [&str; 8] = ["pencil", "pipeline", "diagonal", "subsystem", "m4", "bipartite", "vq-extension", "projsum"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstructRecord {
    pub kind: String,
    pub system: String,
    pub n: usize,
    pub dimension: usize,
    pub rank: Option<usize>,
    pub residual: Option<f64>,
    pub method: Option<String>,
    pub valid: bool,
    pub detail: Option<String>,
}

pub struct Construction {
    pub system: OperatorSystem,
    pub certificate: Option<CertificateDoc>,
    pub record: ConstructRecord,
}

fn from_anticlique(kind: &str, v: OperatorSystem, c: AnticliqueCertificate, detail: Option<String>) -> Construction {
    Construction {
        record: ConstructRecord {
            kind: kind.into(),
            system: v.label().into(),
            n: v.n(),
            dimension: v.dimension(),
            rank: Some(c.rank()),
            residual: Some(c.residual),
            method: Some(c.method.as_str().into()),
            valid: c.is_valid(),
            detail,
        },
        certificate: Some(CertificateDoc::new(&c.frame, c.residual, c.method.as_str())),
        system: v,
    }
}

fn from_clique(kind: &str, v: OperatorSystem, c: CliqueCertificate) -> Construction {
    Construction {
        record: ConstructRecord {
            kind: kind.into(),
            system: v.label().into(),
            n: v.n(),
            dimension: v.dimension(),
            rank: Some(c.rank()),
            residual: Some(c.check.residual),
            method: Some(c.method.as_str().into()),
            valid: c.is_valid(),
            detail: c.compressed_dim.map(|d| format!("dim(PVP) = {d}")),
        },
        certificate: Some(CertificateDoc::new(&c.frame, c.check.residual, c.method.as_str())),
        system: v,
    }
}

/// Builds a seeded input for `kind` and runs its construction.
pub fn construct(kind: &str, config: &ExperimentConfig) -> Result<Construction, InputError> {
    let tol = &config.tolerances;
    let seed = config.seed;
    let n = || config.n.ok_or_else(|| usage(format!("--n is required for {kind}")));
    let k = || config.k.ok_or_else(|| usage(format!("--k is required for {kind}")));
    let d = || config.d.ok_or_else(|| usage(format!("--d is required for {kind}")));
    Ok(match kind {
        "pencil" => {
            let a = random_hermitian_matrix(n()?, seed, 0);
            let v = single_matrix_system(&a)?;
            let c = pencil_anticlique(&a, tol)?;
            from_anticlique(kind, v, c, None)
        }
        "pipeline" => {
            let v = random_system(n()?, d()?, seed, 0)?;
            let c = anticlique_pipeline(&v, k()?, tol)?;
            from_anticlique(kind, v, c, None)
        }
        "diagonal" => {
            let v = random_diagonal_system(n()?, d()?, seed, 0)?;
            let c = diagonal_anticlique(&v, k()?, tol)?;
            from_anticlique(kind, v, c, None)
        }
        "subsystem" => {
            let ranks = projsum_ranks(n()?, k()?);
            if ranks.len() < 3 {
                return Err(usage("subsystem needs ceil(n/k) >= 3 projections"));
            }
            let ps = random_resolution(&ranks, seed, 0)?;
            let mut rng = stream(seed, 1);
            let coeffs = vec![(0..ranks.len()).map(|_| gaussian(&mut rng)).collect::<Vec<f64>>()];
            let v = opsys_turan_core::anticlique::subsystem_of_resolution(&ps, &coeffs)?;
            let c = subsystem_anticlique(&ps, &coeffs, tol)?;
            from_anticlique(kind, v, c, None)
        }
        "m4" => {
            let case = ALL_M4_CASES[(seed % 3) as usize];
            let (a, b) = planted_m4(case, seed, 0);
            let v = m4_system(&a, &b)?;
            let (c, found) = m4_anticlique(&a, &b, tol)?;
            from_anticlique(kind, v, c, Some(found.as_str().into()))
        }
        "bipartite" => from_clique(kind, bipartite_system(k()?)?, bipartite_clique(k()?, tol)?),
        "vq-extension" => {
            let (v, q) = vq_with_extension(n()?, k()?, 3, seed, 0)?;
            let c = vq_extension_clique(&v, &q, k()?, config.trials, seed, tol)?;
            from_clique(kind, v, c)
        }
        "projsum" => {
            let (v, ps) = projsum_system(n()?, k()?, seed, 0)?;
            Construction {
                record: ConstructRecord {
                    kind: kind.into(),
                    system: v.label().into(),
                    n: v.n(),
                    dimension: v.dimension(),
                    rank: None,
                    residual: None,
                    method: None,
                    valid: true,
                    detail: Some(format!("{} projections", ps.len())),
                },
                certificate: None,
                system: v,
            }
        }
        other => return Err(usage(format!("unknown construction {other:?}; expected one of {}", KINDS.join(", ")))),
    })
}

pub fn cmd_construct(config: &ExperimentConfig) -> Result<Report, InputError> {
    let kind = config.kind.as_deref().ok_or_else(|| usage("construct needs --kind"))?;
    let c = construct(kind, config)?;
    if let Some(path) = &config.system_output {
        write_system(path, &c.system)?;
    }
    if let (Some(path), Some(doc)) = (&config.output, &c.certificate) {
        write_certificate(path, doc)?;
    }
    let mut report = Report { success: c.record.valid, ..Report::default() };
    report.push(&c.record);
    if config.format != OutputFormat::Jsonl {
        let r = &c.record;
        report.table = render_table(
            &["kind", "system", "dim", "rank", "residual", "method", "valid"],
            &[vec![
                r.kind.clone(),
                r.system.clone(),
                r.dimension.to_string(),
                r.rank.map(|x| x.to_string()).unwrap_or_default(),
                r.residual.map(sci).unwrap_or_default(),
                r.method.clone().unwrap_or_default(),
                r.valid.to_string(),
            ]],
        );
    }
    Ok(report)
}
