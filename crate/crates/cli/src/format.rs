//! JSON exchange formats for systems and certificates.
//!
//! System: `{"n": int, "label": string, "matrices": [M1, M2, ...]}`, each
//! `M` an `n x n` row-major array of `[re, im]` pairs. Systems are written
//! as their generator list.
//!
//! Certificate: `{"n": int, "rank": int, "frame": [columns], "residual":
//! float, "method": string}`, each column an `n`-array of `[re, im]` pairs.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use opsys_turan_core::opsys::make_system;
use opsys_turan_core::{ComplexMatrix, OperatorSystem, OrthonormalFrame, C64};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

/// A complex number written as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pair(pub C64);

impl Serialize for Pair {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0.re, self.0.im].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Pair {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        if v.len() != 2 {
            return Err(de::Error::invalid_length(v.len(), &"an [re, im] pair"));
        }
        Ok(Pair(C64::new(v[0], v[1])))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDoc {
    pub n: usize,
    pub label: String,
    pub matrices: Vec<Vec<Vec<Pair>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    pub n: usize,
    pub rank: usize,
    pub frame: Vec<Vec<Pair>>,
    pub residual: f64,
    pub method: String,
}

/// Where a document stopped matching its schema.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemaError {
    /// Field path such as `matrices[0][1][2]`; `.` for the whole document.
    pub field: String,
    /// One-based line and column, when the parser knows them.
    pub position: Option<(usize, usize)>,
    pub message: String,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.position {
            Some((line, col)) => write!(f, "{} (line {line}, column {col}): {}", self.field, self.message),
            None => write!(f, "{}: {}", self.field, self.message),
        }
    }
}

impl std::error::Error for SchemaError {}

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("schema error at {0}")]
    Schema(#[from] SchemaError),
    #[error("invalid content: {0}")]
    Content(#[from] opsys_turan_core::Error),
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, SchemaError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value: T = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        SchemaError { field, position: Some((inner.line(), inner.column())), message: strip_position(&inner) }
    })?;
    de.end().map_err(|e| SchemaError {
        field: ".".into(),
        position: Some((e.line(), e.column())),
        message: strip_position(&e),
    })?;
    Ok(value)
}

fn strip_position(e: &serde_json::Error) -> String {
    let s = e.to_string();
    match s.rfind(" at line ") {
        Some(i) => s[..i].to_string(),
        None => s,
    }
}

fn shape_error(field: String, message: String) -> SchemaError {
    SchemaError { field, position: None, message }
}

impl SystemDoc {
    pub fn parse(text: &str) -> Result<Self, SchemaError> {
        let doc: Self = parse(text)?;
        doc.matrices()?;
        Ok(doc)
    }

    pub fn from_system(v: &OperatorSystem) -> Self {
        Self {
            n: v.n(),
            label: v.label().to_string(),
            matrices: v.generators().iter().map(rows_of).collect(),
        }
    }

    /// The generator matrices, checked to be `n x n`.
    pub fn matrices(&self) -> Result<Vec<ComplexMatrix>, SchemaError> {
        if self.n == 0 {
            return Err(shape_error("n".into(), "must be positive".into()));
        }
        let n = self.n;
        self.matrices
            .iter()
            .enumerate()
            .map(|(t, rows)| {
                if rows.len() != n {
                    return Err(shape_error(format!("matrices[{t}]"), format!("{} rows, expected {n}", rows.len())));
                }
                if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
                    return Err(shape_error(
                        format!("matrices[{t}][{i}]"),
                        format!("{} entries, expected {n}", r.len()),
                    ));
                }
                Ok(ComplexMatrix::from_fn(n, n, |i, j| rows[i][j].0))
            })
            .collect()
    }

    pub fn to_system(&self) -> Result<OperatorSystem, FormatError> {
        Ok(make_system(self.n, self.matrices()?, self.label.clone())?)
    }
}

fn rows_of(m: &ComplexMatrix) -> Vec<Vec<Pair>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| Pair(m[(i, j)])).collect()).collect()
}

impl CertificateDoc {
    pub fn parse(text: &str) -> Result<Self, SchemaError> {
        let doc: Self = parse(text)?;
        if doc.frame.len() != doc.rank {
            return Err(shape_error("frame".into(), format!("{} columns for rank {}", doc.frame.len(), doc.rank)));
        }
        if let Some((j, c)) = doc.frame.iter().enumerate().find(|(_, c)| c.len() != doc.n) {
            return Err(shape_error(format!("frame[{j}]"), format!("{} entries, expected {}", c.len(), doc.n)));
        }
        Ok(doc)
    }

    pub fn new(frame: &OrthonormalFrame, residual: f64, method: &str) -> Self {
        Self {
            n: frame.ambient_dim(),
            rank: frame.rank(),
            frame: frame.columns().into_iter().map(|c| c.into_iter().map(Pair).collect()).collect(),
            residual,
            method: method.to_string(),
        }
    }

    /// The frame, re-validated for orthonormality at `frame_tol`.
    pub fn to_frame(&self, frame_tol: f64) -> Result<OrthonormalFrame, FormatError> {
        let cols: Vec<Vec<C64>> = self.frame.iter().map(|c| c.iter().map(|p| p.0).collect()).collect();
        let m = ComplexMatrix::from_columns(self.n, &cols)?;
        Ok(OrthonormalFrame::new(m, frame_tol)?)
    }
}

pub fn system_to_string(v: &OperatorSystem) -> String {
    let mut s = serde_json::to_string(&SystemDoc::from_system(v)).expect("finite entries serialize");
    s.push('\n');
    s
}

pub fn parse_system(text: &str) -> Result<OperatorSystem, FormatError> {
    SystemDoc::parse(text)?.to_system()
}

fn read_text(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

fn write_text(path: &Path, text: &str) -> Result<(), FormatError> {
    fs::write(path, text).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

pub fn read_system_doc(path: &Path) -> Result<SystemDoc, FormatError> {
    Ok(SystemDoc::parse(&read_text(path)?)?)
}

pub fn read_system(path: &Path) -> Result<OperatorSystem, FormatError> {
    read_system_doc(path)?.to_system()
}

pub fn write_system(path: &Path, v: &OperatorSystem) -> Result<(), FormatError> {
    write_text(path, &system_to_string(v))
}

pub fn certificate_to_string(doc: &CertificateDoc) -> String {
    let mut s = serde_json::to_string(doc).expect("finite entries serialize");
    s.push('\n');
    s
}

pub fn read_certificate(path: &Path) -> Result<CertificateDoc, FormatError> {
    Ok(CertificateDoc::parse(&read_text(path)?)?)
}

pub fn write_certificate(path: &Path, doc: &CertificateDoc) -> Result<(), FormatError> {
    write_text(path, &certificate_to_string(doc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use opsys_turan_core::opsys::bipartite_system;

    #[test]
    fn identity_document() {
        let v = parse_system(r#"{"n": 2, "label": "I", "matrices": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]]}"#).unwrap();
        assert_eq!(v.dimension(), 1);
    }

    #[test]
    fn bipartite_round_trip() {
        let v = bipartite_system(2).unwrap();
        let back = parse_system(&system_to_string(&v)).unwrap();
        assert_eq!(back.dimension(), 9);
        assert!(back.same_span(&v, 1e-12));
        assert_eq!(back.label(), v.label());
    }

    #[test]
    fn odd_pair_is_located() {
        let text = "{\"n\": 1,\n \"label\": \"x\",\n \"matrices\": [[[[1, 0, 3]]]]}";
        let Err(FormatError::Schema(e)) = parse_system(text) else { panic!() };
        assert_eq!(e.field, "matrices[0][0][0]");
        assert_eq!(e.position.map(|p| p.0), Some(3));
        assert!(e.message.contains("pair"));
    }

    #[test]
    fn shape_errors() {
        let e = SystemDoc::parse(r#"{"n": 2, "label": "", "matrices": [[[[1, 0], [0, 0]]]]}"#).unwrap_err();
        assert_eq!(e.field, "matrices[0]");
        let e = SystemDoc::parse(r#"{"n": 1, "label": "", "matrices": [], "extra": 1}"#).unwrap_err();
        assert!(e.message.contains("extra"));
        let e = SystemDoc::parse(r#"{"n": 1, "label": ""}"#).unwrap_err();
        assert!(e.message.contains("matrices"));
        let e = CertificateDoc::parse(r#"{"n": 2, "rank": 2, "frame": [[[1, 0], [0, 0]]], "residual": 0, "method": "x"}"#)
            .unwrap_err();
        assert_eq!(e.field, "frame");
    }

    #[test]
    fn certificate_round_trip_is_exact() {
        let f = opsys_turan_core::rng::random_frame(&mut opsys_turan_core::rng::stream(3, 0), 5, 2);
        let doc = CertificateDoc::new(&f, 1.25e-13, "search");
        let back = CertificateDoc::parse(&certificate_to_string(&doc)).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_frame(1e-10).unwrap().matrix(), f.matrix());
    }
}
