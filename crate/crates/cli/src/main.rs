use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use opsys_turan::{run, Command, ExperimentConfig, OutputFormat};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CommandArg {
    Certify,
    Construct,
    Search,
    Bounds,
    Selftest,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Jsonl,
    Table,
    Both,
}

/// Quantum cliques and anticliques of operator systems in M_n(C).
///
/// Exit status: 0 on success, 1 when a certification or search fails,
/// 2 on bad input.
#[derive(Debug, Parser)]
#[command(name = "opsys-turan", version)]
struct Cli {
    #[arg(value_enum)]
    command: CommandArg,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    #[arg(long, default_value_t = 500)]
    iterations: usize,
    #[arg(long = "tol.certify")]
    tol_certify: Option<f64>,
    #[arg(long = "tol.lp")]
    tol_lp: Option<f64>,
    #[arg(long = "tol.solver")]
    tol_solver: Option<f64>,
    #[arg(long = "tol.mult")]
    tol_mult: Option<f64>,
    #[arg(long = "tol.frame")]
    tol_frame: Option<f64>,
    /// Input system file.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Certificate output (construct, search) or JSONL output (other commands).
    #[arg(long = "out")]
    output: Option<PathBuf>,
    /// certify: certificate file to check against --in.
    #[arg(long = "cert")]
    certificate: Option<PathBuf>,
    /// certify: projsum, generic, anticlique or clique.
    #[arg(long)]
    claim: Option<String>,
    /// construct: pencil, pipeline, diagonal, subsystem, m4, bipartite,
    /// vq-extension or projsum.
    #[arg(long)]
    kind: Option<String>,
    /// search: built-in system (diagonal, full, bipartite, projsum, random, m4).
    #[arg(long)]
    system: Option<String>,
    /// construct: write the generated system here.
    #[arg(long = "system-out")]
    system_output: Option<PathBuf>,
    /// search: named probe (t41).
    #[arg(long)]
    probe: Option<String>,
    /// search: look for a clique instead of an anticlique.
    #[arg(long)]
    clique: bool,
    #[arg(long = "n-max", default_value_t = 12)]
    n_max: usize,
    #[arg(long = "k-max", default_value_t = 3)]
    k_max: usize,
    #[arg(long, value_enum, default_value_t = FormatArg::Jsonl)]
    format: FormatArg,
}

fn config_of(cli: Cli) -> Result<ExperimentConfig, String> {
    let command = match cli.command {
        CommandArg::Certify => Command::Certify,
        CommandArg::Construct => Command::Construct,
        CommandArg::Search => Command::Search,
        CommandArg::Bounds => Command::Bounds,
        CommandArg::Selftest => Command::Selftest,
    };
    let mut c = ExperimentConfig::new(command);
    for (name, value) in [
        ("certify", cli.tol_certify),
        ("lp", cli.tol_lp),
        ("solver", cli.tol_solver),
        ("mult", cli.tol_mult),
        ("frame", cli.tol_frame),
    ] {
        if let Some(v) = value {
            if !c.set_tolerance(name, v) {
                return Err(format!("--tol.{name} must be a positive number, got {v}"));
            }
        }
    }
    c.n = cli.n;
    c.k = cli.k;
    c.d = cli.d;
    c.seed = cli.seed;
    c.trials = cli.trials;
    c.restarts = cli.restarts;
    c.iterations = cli.iterations;
    c.input = cli.input;
    c.output = cli.output;
    c.certificate = cli.certificate;
    c.claim = cli.claim;
    c.kind = cli.kind;
    c.system = cli.system;
    c.system_output = cli.system_output;
    c.probe = cli.probe;
    c.clique = cli.clique;
    c.n_max = cli.n_max;
    c.k_max = cli.k_max;
    c.format = match cli.format {
        FormatArg::Jsonl => OutputFormat::Jsonl,
        FormatArg::Table => OutputFormat::Table,
        FormatArg::Both => OutputFormat::Both,
    };
    Ok(c)
}

fn main() -> ExitCode {
    let config = match config_of(Cli::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let records_to_file = !matches!(config.command, Command::Construct | Command::Search);
    let jsonl = report.jsonl();
    let mut stdout = std::io::stdout().lock();
    match (&config.output, records_to_file) {
        (Some(path), true) => {
            if let Err(e) = std::fs::write(path, &jsonl) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        _ if config.format != OutputFormat::Table => {
            let _ = stdout.write_all(jsonl.as_bytes());
        }
        _ => {}
    }
    if config.format != OutputFormat::Jsonl {
        let _ = stdout.write_all(report.table.as_bytes());
    }
    ExitCode::from(report.exit_code() as u8)
}
