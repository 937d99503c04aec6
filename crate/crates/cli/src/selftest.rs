use serde::Serialize;

use opsys_turan_core::anticlique::{
    anticlique_search, frame_criterion, m4_anticlique, pencil_anticlique, tverberg_partition, SearchBudget,
};
use opsys_turan_core::clique::bipartite_clique;
use opsys_turan_core::opsys::{bipartite_system, diagonal_system, graph_system, is_anticlique, vq_system};
use opsys_turan_core::rng::{gaussian, random_frame, stream};

use crate::bounds::vq_dimension;
use crate::config::{ExperimentConfig, OutputFormat};
use crate::format::{parse_system, system_to_string};
use crate::generate::{planted_m4, random_hermitian_matrix, random_projection, random_system, ALL_M4_CASES};
use crate::report::{render_table, InputError, Report};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestRecord {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

type Check = fn(&ExperimentConfig) -> Result<(bool, String), InputError>;

const CHECKS: [(&str, Check); 8] = [
    ("dimension_formulas", dimension_formulas),
    ("frame_criterion", frame_criterion_agrees),
    ("pencil_rank", pencil_rank),
    ("bipartite_clique", bipartite),
    ("tverberg", tverberg),
    ("m4_cases", m4_cases),
    ("diagonal_negative_control", diagonal_negative),
    ("format_round_trip", round_trip),
];

fn dimension_formulas(_: &ExperimentConfig) -> Result<(bool, String), InputError> {
    let path: Vec<(usize, usize)> = (0..4).map(|i| (i, i + 1)).collect();
    let mut ok = graph_system(5, &path)?.dimension() == 5 + 2 * path.len();
    for k in 1..=5 {
        ok &= vq_system(&random_projection(5, 6 - k, 0, k as u64)?)?.dimension() == vq_dimension(5, k);
    }
    for k in 1..=3 {
        ok &= bipartite_system(k)?.dimension() == 2 * k * k + 1;
    }
    Ok((ok, "graph, V_Q and bipartite dimensions in M_5, M_2k".into()))
}

fn frame_criterion_agrees(c: &ExperimentConfig) -> Result<(bool, String), InputError> {
    let tol = &c.tolerances;
    let mut agree = 0;
    for t in 0..20u64 {
        let v = random_system(4, 2, c.seed, t)?;
        let f = random_frame(&mut stream(c.seed, 100 + t), 4, 1 + (t as usize % 2));
        agree += usize::from(frame_criterion(&f.columns(), &v, tol)? == is_anticlique(&f, &v, tol)?.passed());
    }
    Ok((agree == 20, format!("{agree}/20 random pairs agree")))
}

fn pencil_rank(c: &ExperimentConfig) -> Result<(bool, String), InputError> {
    let mut ok = true;
    for n in 2..=8 {
        let cert = pencil_anticlique(&random_hermitian_matrix(n, c.seed, n as u64), &c.tolerances)?;
        ok &= cert.is_valid() && cert.rank() == n.div_ceil(2);
    }
    Ok((ok, "rank ceil(n/2) for n = 2..8".into()))
}

fn bipartite(c: &ExperimentConfig) -> Result<(bool, String), InputError> {
    let mut ok = true;
    for k in 1..=3 {
        let cert = bipartite_clique(k, &c.tolerances)?;
        ok &= cert.compressed_dim == Some(k * k);
    }
    Ok((ok, "dim(PVP) = k^2 for k = 1..3".into()))
}

fn tverberg(c: &ExperimentConfig) -> Result<(bool, String), InputError> {
    let mut rng = stream(c.seed, 7);
    let mut ok = true;
    for _ in 0..10 {
        let pts: Vec<Vec<f64>> = (0..7).map(|_| (0..2).map(|_| gaussian(&mut rng)).collect()).collect();
        ok &= tverberg_partition(&pts, 3, c.tolerances.lp_tol).is_ok_and(|t| t.defect(&pts) <= c.tolerances.lp_tol);
    }
    Ok((ok, "10 planar sets of 7 points into 3 blocks".into()))
}

fn m4_cases(c: &ExperimentConfig) -> Result<(bool, String), InputError> {
    let mut ok = true;
    for (t, case) in ALL_M4_CASES.iter().enumerate() {
        let (a, b) = planted_m4(*case, c.seed, t as u64);
        ok &= m4_anticlique(&a, &b, &c.tolerances).is_ok_and(|(cert, found)| cert.is_valid() && found == *case);
    }
    Ok((ok, "one planted input per case".into()))
}

fn diagonal_negative(c: &ExperimentConfig) -> Result<(bool, String), InputError> {
    let budget = SearchBudget { restarts: 4, iterations: 200 };
    let out = anticlique_search(&diagonal_system(3)?, 2, budget, c.seed, &c.tolerances)?;
    Ok((out.certificate().is_none(), "D_3 has no 2-anticlique".into()))
}

fn round_trip(c: &ExperimentConfig) -> Result<(bool, String), InputError> {
    let v = random_system(3, 3, c.seed, 9)?;
    let back = parse_system(&system_to_string(&v))?;
    Ok((back.same_span(&v, 1e-12), "write then read spans the same subspace".into()))
}

pub fn cmd_selftest(config: &ExperimentConfig) -> Result<Report, InputError> {
    let mut report = Report { success: true, ..Report::default() };
    let mut rows = Vec::new();
    for (name, check) in CHECKS {
        let (passed, detail) = match check(config) {
            Ok(r) => r,
            Err(e) => (false, e.to_string()),
        };
        report.success &= passed;
        rows.push(vec![name.to_string(), if passed { "PASS" } else { "FAIL" }.to_string(), detail.clone()]);
        report.push(&SelftestRecord { check: name.into(), passed, detail });
    }
    if config.format != OutputFormat::Jsonl {
        report.table = render_table(&["check", "result", "detail"], &rows);
    }
    Ok(report)
}
