//! Command-line experiment runner for `multihop-secrecy`.
//!
//! Exit codes: 0 success, 1 I/O or numerical failure, 2 invalid
//! configuration, 3 simulation disagreeing with analytics, 4 slot-cap abort.

pub mod commands;
pub mod spec;
pub mod table;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use multihop_secrecy::simulator::MobilityModel;

use crate::spec::{parse_mobility, ExperimentSpec, OutputFormat, Overrides, SchemeChoice};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("{0}")]
    ZScore(String),
    #[error("{0}")]
    SlotCap(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Numeric(_) => 1,
            CliError::Config(_) => 2,
            CliError::ZScore(_) => 3,
            CliError::SlotCap(_) => 4,
        }
    }
}

impl From<multihop_secrecy::Error> for CliError {
    fn from(e: multihop_secrecy::Error) -> Self {
        use multihop_secrecy::Error as E;
        match e {
            E::InvalidConfig(_) | E::InvalidArgument(_) => CliError::Config(e.to_string()),
            E::SlotCap { .. } => CliError::SlotCap(e.to_string()),
            E::Domain { .. } | E::Quadrature { .. } => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "mhsec",
    version,
    about = "Secure multihop relaying: analysis, optimisation and simulation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// TOML experiment file; command-line flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_parser = clap::builder::ValueParser::new(SchemeChoice::from_str_arg))]
    pub scheme: Option<SchemeChoice>,
    /// Fix the hop count instead of optimising it.
    #[arg(long, global = true, value_name = "N")]
    pub hops: Option<usize>,
    #[arg(long, global = true, value_name = "N")]
    pub n_max: Option<usize>,
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_parser = parse_mobility)]
    pub mobility: Option<MobilityModel>,
    /// Write the table here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_parser = clap::builder::ValueParser::new(OutputFormat::from_str_arg))]
    pub format: Option<OutputFormat>,
    /// Worker threads (defaults to all cores). Never changes the output.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Designed rates and performance at a fixed hop count.
    Analyze,
    /// Throughput profile over N = 1..=n_max and the optimal hop count.
    Optimize,
    /// Monte Carlo run checked against the closed forms.
    Simulate,
    /// Parameter sweep described by the [sweep] block.
    Sweep,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Optimize => "optimize",
            Command::Simulate => "simulate",
            Command::Sweep => "sweep",
        }
    }
}

impl SchemeChoice {
    fn from_str_arg(s: &str) -> Result<Self, String> {
        s.parse()
    }
}

impl OutputFormat {
    fn from_str_arg(s: &str) -> Result<Self, String> {
        s.parse()
    }
}

impl Cli {
    pub fn spec(&self) -> Result<ExperimentSpec, CliError> {
        let base = match &self.config {
            Some(path) => ExperimentSpec::load(path)?,
            None => ExperimentSpec::default(),
        };
        base.apply(&Overrides {
            scheme: self.scheme,
            n_hops: self.hops,
            n_max: self.n_max,
            trials: self.trials,
            seed: self.seed,
            mobility: self.mobility,
            output_path: self.out.clone(),
            format: self.format,
        })
    }
}

pub fn execute(command: Command, spec: &ExperimentSpec) -> Result<commands::Outcome, CliError> {
    match command {
        Command::Analyze => commands::analyze(spec),
        Command::Optimize => commands::optimize(spec),
        Command::Simulate => commands::simulate_cmd(spec),
        Command::Sweep => commands::sweep(spec),
    }
}

/// Runs the command, writes its table, and returns the failure that decides
/// the exit code.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let spec = cli.spec()?;
    if cli.workers == Some(0) {
        return Err(CliError::Config("workers must be at least 1".into()));
    }
    let outcome = match cli.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| CliError::Io(e.to_string()))?
            .install(|| execute(cli.command, &spec))?,
        None => execute(cli.command, &spec)?,
    };

    match &spec.output_path {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            outcome.table.write_to(spec.format, std::io::BufWriter::new(file))?;
            let mut err = std::io::stderr().lock();
            for line in &outcome.summary {
                writeln!(err, "{line}")?;
            }
            writeln!(err, "wrote {}", path.display())?;
        }
        None => {
            outcome.table.write_to(spec.format, std::io::stdout().lock())?;
            let mut err = std::io::stderr().lock();
            for line in &outcome.summary {
                writeln!(err, "{line}")?;
            }
        }
    }
    outcome.failure.map_or(Ok(()), Err)
}
