//! File formats, seeded generators and experiment drivers on top of
//! `opsys-turan-core`.
//!
//! Every driver takes an [`ExperimentConfig`] and returns a [`Report`]:
//! line-delimited JSON records plus an optional human table. Output is a
//! pure function of the config, so equal configs give byte-identical
//! records.

pub mod bounds;
pub mod certify;
pub mod config;
pub mod construct;
pub mod format;
pub mod generate;
pub mod report;
pub mod search;
pub mod selftest;

pub use config::{Command, ExperimentConfig, OutputFormat};
pub use report::{InputError, Report};

pub fn run(config: &ExperimentConfig) -> Result<Report, InputError> {
    match config.command {
        Command::Certify => certify::cmd_certify(config),
        Command::Construct => construct::cmd_construct(config),
        Command::Search => search::cmd_search(config),
        Command::Bounds => bounds::cmd_bounds(config),
        Command::Selftest => selftest::cmd_selftest(config),
    }
}
