use std::fmt::Write as _;

use serde::Serialize;

use crate::format::FormatError;

/// Output of a driver: JSON lines, a human table derived from the same
/// records, and whether every requested check or search succeeded.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub records: Vec<String>,
    pub table: String,
    pub success: bool,
}

impl Report {
    pub fn push<T: Serialize>(&mut self, record: &T) {
        self.records.push(serde_json::to_string(record).expect("records serialize"));
    }

    pub fn jsonl(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            s.push_str(r);
            s.push('\n');
        }
        s
    }

    pub fn exit_code(&self) -> i32 {
        if self.success {
            0
        } else {
            1
        }
    }
}

/// Failures that are the caller's fault: exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] opsys_turan_core::Error),
}

impl From<crate::format::SchemaError> for InputError {
    fn from(e: crate::format::SchemaError) -> Self {
        InputError::Format(FormatError::Schema(e))
    }
}

pub fn usage(msg: impl Into<String>) -> InputError {
    InputError::Usage(msg.into())
}

/// Fixed-width text table.
pub fn render_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, cells: &[String]| {
        let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&mut out, &header.iter().map(|h| h.to_string()).collect::<Vec<_>>());
    line(&mut out, &widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>());
    for r in rows {
        line(&mut out, r);
    }
    out
}

pub fn sci(x: f64) -> String {
    format!("{x:.2e}")
}
