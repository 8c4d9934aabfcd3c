use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use super::commands::{run, Command, Outcome, Table};
use super::config::{ExperimentConfig, PRECISION_ENV};
use crate::error::{Error, Result};

/// Numerical laboratory for weighted quasianalyticity.
#[derive(Debug, Parser)]
#[command(name = "nqa", version)]
pub struct Cli {
    /// JSON experiment config; flags override its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub group: Group,
}

#[derive(Debug, Subcommand)]
pub enum Group {
    /// Weight functions built from zero sequences.
    #[command(subcommand)]
    Weight(WeightCmd),
    /// Series classification of sequence profiles.
    #[command(subcommand)]
    Criteria(CriteriaCmd),
    /// Concave and monotone majorants.
    #[command(subcommand)]
    Majorant(MajorantCmd),
    /// Counterexample construction and experiments.
    #[command(subcommand)]
    Cx(CxCmd),
}

#[derive(Debug, Subcommand)]
pub enum WeightCmd {
    /// ln|ω|, n(t) and N(t) on a grid.
    Eval(ExperimentConfig),
    /// Taylor coefficients of |ω|^{2n}.
    Coeffs(ExperimentConfig),
}

#[derive(Debug, Subcommand)]
pub enum CriteriaCmd {
    /// nqa and msnq verdicts for the standard profiles.
    Classify(ExperimentConfig),
    /// The six ln|ω| conditions.
    Omega6(ExperimentConfig),
}

#[derive(Debug, Subcommand)]
pub enum MajorantCmd {
    Alpha(ExperimentConfig),
    Beta(ExperimentConfig),
    /// Random nonnegativity sweep of the S_k polynomials.
    SkSweep(ExperimentConfig),
    /// Step-function example with thresholds e^{k²}.
    Step(ExperimentConfig),
}

#[derive(Debug, Subcommand)]
pub enum CxCmd {
    /// Dyadic multiplicities n_j.
    Build(ExperimentConfig),
    /// |f| ≤ |ω₀| ≤ |ω| on random points.
    Dominate(ExperimentConfig),
    /// Annulus bound on the block factor.
    Schwarz(ExperimentConfig),
    /// Partial sums of the contradiction inequality.
    Contradict(ExperimentConfig),
    /// Minimum-modulus scan on dyadic points.
    Scan(ExperimentConfig),
}

impl Group {
    fn split(self) -> (Command, ExperimentConfig) {
        match self {
            Group::Weight(WeightCmd::Eval(c)) => (Command::WeightEval, c),
            Group::Weight(WeightCmd::Coeffs(c)) => (Command::WeightCoeffs, c),
            Group::Criteria(CriteriaCmd::Classify(c)) => (Command::CriteriaClassify, c),
            Group::Criteria(CriteriaCmd::Omega6(c)) => (Command::CriteriaOmega6, c),
            Group::Majorant(MajorantCmd::Alpha(c)) => (Command::MajorantAlpha, c),
            Group::Majorant(MajorantCmd::Beta(c)) => (Command::MajorantBeta, c),
            Group::Majorant(MajorantCmd::SkSweep(c)) => (Command::MajorantSkSweep, c),
            Group::Majorant(MajorantCmd::Step(c)) => (Command::MajorantStep, c),
            Group::Cx(CxCmd::Build(c)) => (Command::CxBuild, c),
            Group::Cx(CxCmd::Dominate(c)) => (Command::CxDominate, c),
            Group::Cx(CxCmd::Schwarz(c)) => (Command::CxSchwarz, c),
            Group::Cx(CxCmd::Contradict(c)) => (Command::CxContradict, c),
            Group::Cx(CxCmd::Scan(c)) => (Command::CxScan, c),
        }
    }
}

fn write_csv(table: &Table, out: &mut dyn Write) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(&table.header).map_err(io)?;
    for row in &table.rows {
        w.write_record(row).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn emit(outcome: &Outcome, cfg: &ExperimentConfig) -> Result<()> {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let mut json = serde_json::to_string_pretty(&outcome.summary).map_err(|e| Error::Io(e.to_string()))?;
    json.push('\n');
    match &cfg.json {
        Some(p) => write_file(p, json.as_bytes())?,
        None => lock.write_all(json.as_bytes()).map_err(|e| Error::Io(e.to_string()))?,
    }
    if let (Some(p), Some(t)) = (&cfg.csv, &outcome.table) {
        if p.as_os_str() == "-" {
            write_csv(t, &mut lock)?;
        } else {
            let mut buf = Vec::new();
            write_csv(t, &mut buf)?;
            write_file(p, &buf)?;
        }
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<bool> {
    let file = cli.config.as_deref().map(ExperimentConfig::from_file).transpose()?;
    let (cmd, flags) = cli.group.split();
    let env = std::env::var(PRECISION_ENV).ok();
    let cfg = ExperimentConfig::resolve(env.as_deref(), file, flags)?;
    let outcome = run(cmd, &cfg)?;
    emit(&outcome, &cfg)?;
    Ok(outcome.passed)
}

/// Runs the binary on `args` (program name first). Exit codes: 0 when all
/// checks pass, 1 when a check fails, 2 for usage, config, parse or I/O
/// errors.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
