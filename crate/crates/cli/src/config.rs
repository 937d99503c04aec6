use std::path::PathBuf;

use opsys_turan_core::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Certify,
    Construct,
    Search,
    Bounds,
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Jsonl,
    Table,
    Both,
}

/// Everything a driver reads. The seed determines all randomized behavior.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub command: Command,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub d: Option<usize>,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub trials: usize,
    pub restarts: usize,
    pub iterations: usize,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    /// `certify`: certificate file checked against the input system.
    pub certificate: Option<PathBuf>,
    /// `certify`: projsum, generic, anticlique or clique.
    pub claim: Option<String>,
    /// `construct`: which construction to run.
    pub kind: Option<String>,
    /// `search`: a built-in system family used when no input file is given.
    pub system: Option<String>,
    /// `construct`: where to write the generated system.
    pub system_output: Option<PathBuf>,
    /// `search`: a named probe such as `t41`.
    pub probe: Option<String>,
    /// `search`: look for cliques instead of anticliques.
    pub clique: bool,
    pub n_max: usize,
    pub k_max: usize,
    pub format: OutputFormat,
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            n: None,
            k: None,
            d: None,
            seed: 0,
            tolerances: Tolerances::default(),
            trials: 500,
            restarts: 32,
            iterations: 500,
            input: None,
            output: None,
            certificate: None,
            claim: None,
            kind: None,
            system: None,
            system_output: None,
            probe: None,
            clique: false,
            n_max: 12,
            k_max: 3,
            format: OutputFormat::Jsonl,
        }
    }

    /// Overrides a tolerance by its short (`certify`) or full
    /// (`certify_tol`) name.
    pub fn set_tolerance(&mut self, name: &str, value: f64) -> bool {
        let full = if name.ends_with("_tol") { name.to_string() } else { format!("{name}_tol") };
        value.is_finite() && value > 0.0 && self.tolerances.set(&full, value)
    }
}
