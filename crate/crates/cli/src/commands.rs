//! Command dispatch and exit codes.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use cc_sched::analysis::{choose_mode, evaluate, sigma_experiment, SigmaSetup};
use cc_sched::pipeline::build_schedule;
use cc_sched::{dof_sweep, verify_schedule, DeliveryParams, DofError, NetworkConfig, PipelineError, Rational, SweepMode};
use clap::{Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::output::{decimal6, fraction, write_sigma_csv, write_sweep_csv, DofJson};
use crate::scenario::{Scenario, ScenarioError};
use crate::wire::{parse_schedule, to_wire, WireError};

#[derive(Debug, Parser)]
#[command(name = "cc-sched", version, about = "Shared-cache coded caching delivery schedules")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Common {
    /// Scenario JSON file.
    #[arg(long)]
    pub scenario: PathBuf,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit the full transmission listing as JSON.
    Schedule {
        #[command(flatten)]
        common: Common,
    },
    /// Check coverage and zero-forcing feasibility; exits non-zero on failure.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Verify this schedule listing instead of building one.
        #[arg(long)]
        schedule: Option<PathBuf>,
    },
    /// Report the DoF of the scenario's delivery as JSON.
    Dof {
        #[command(flatten)]
        common: Common,
    },
    /// Line search over eta_hat and Q, written as CSV.
    Sweep {
        #[command(flatten)]
        common: Common,
    },
    /// Mean best DoF versus association spread, written as CSV.
    SigmaExperiment {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        /// Overrides the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Weight every profile-length vector exactly instead of sampling.
        #[arg(long)]
        exhaustive: bool,
        /// Take each row's DoF from the closed form instead of building schedules.
        #[arg(long)]
        closed_form: bool,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Validation(String),
    #[error("verification failed")]
    Verification,
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Verification => 4,
            CliError::Io { .. } => 5,
        }
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        if e.is_parse() {
            CliError::Parse(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

impl From<WireError> for CliError {
    fn from(e: WireError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<DofError> for CliError {
    fn from(e: DofError) -> Self {
        match e {
            DofError::VerificationFailed { .. } | DofError::Mismatch { .. } => {
                eprintln!("{e}");
                CliError::Verification
            }
            other => CliError::Validation(other.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    let result = match out {
        Some(path) => fs::write(path, bytes),
        None => io::stdout().write_all(bytes),
    };
    result.map_err(|source| CliError::Io {
        path: out.map_or_else(|| "<stdout>".into(), |p| p.display().to_string()),
        source,
    })
}

fn csv_io(out: Option<&Path>) -> impl Fn(csv::Error) -> CliError + '_ {
    move |e| CliError::Io {
        path: out.map_or_else(|| "<stdout>".into(), |p| p.display().to_string()),
        source: io::Error::other(e.to_string()),
    }
}

struct Loaded {
    scenario: Scenario,
    cfg: NetworkConfig,
    demands: cc_sched::Demands,
}

fn load(path: &Path) -> Result<Loaded, CliError> {
    let scenario = Scenario::parse(&read(path)?)?;
    let cfg = scenario.network()?;
    let demands = scenario.demands(&cfg)?;
    Ok(Loaded { scenario, cfg, demands })
}

/// The scenario's fixed delivery, or the best row of a sweep.
fn delivery_of(l: &Loaded) -> Result<DeliveryParams, CliError> {
    if let Some(p) = l.scenario.fixed_delivery() {
        return Ok(p);
    }
    let sweep = dof_sweep(&l.cfg, &l.demands, SweepMode::ClosedForm)?;
    let row = sweep
        .best_row()
        .ok_or_else(|| CliError::Validation("no feasible delivery parameters".into()))?;
    Ok(DeliveryParams { eta_hat: row.eta_hat, q: row.q, beta: row.beta, strategy: row.strategy })
}

fn to_json<T: Serialize>(v: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s.into_bytes()
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    pass: bool,
    users: usize,
    max_nullset: usize,
    duplicates: usize,
    missing: usize,
    misdirected: usize,
    violations: Vec<String>,
    missing_subpackets: Vec<(u32, String)>,
    summary: &'a str,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Schedule { common } => {
            let l = load(&common.scenario)?;
            let delivery = build_schedule(&l.cfg, delivery_of(&l)?, &l.demands)?;
            emit(common.out.as_deref(), &to_json(&to_wire(&delivery.schedule)))
        }
        Command::Verify { common, schedule } => {
            let l = load(&common.scenario)?;
            let built = build_schedule(&l.cfg, delivery_of(&l)?, &l.demands)?;
            let sched = match schedule {
                Some(path) => parse_schedule(&read(&path)?)?,
                None => built.schedule,
            };
            let report = verify_schedule(&sched, &l.cfg, &built.params, &l.demands);
            let summary = report.summary();
            eprint!("{summary}");
            let json = VerifyJson {
                pass: report.pass,
                users: report.received.len(),
                max_nullset: report.max_nullset,
                duplicates: report.duplicates.len(),
                missing: report.missing.len(),
                misdirected: report.misdirected.len(),
                violations: report.violations.iter().map(|v| v.to_string()).collect(),
                missing_subpackets: report.missing.iter().map(|(u, sp)| (u.0, sp.to_string())).collect(),
                summary: &summary,
            };
            emit(common.out.as_deref(), &to_json(&json))?;
            if report.pass {
                Ok(())
            } else {
                Err(CliError::Verification)
            }
        }
        Command::Dof { common } => {
            let l = load(&common.scenario)?;
            let ev = evaluate(&l.cfg, delivery_of(&l)?, &l.demands)?;
            if !ev.verification.pass {
                eprint!("{}", ev.verification.summary());
                return Err(CliError::Verification);
            }
            emit(common.out.as_deref(), &to_json(&DofJson::from(&ev.report)))
        }
        Command::Sweep { common } => {
            let l = load(&common.scenario)?;
            let sweep = dof_sweep(&l.cfg, &l.demands, SweepMode::Pipeline)?;
            let mut buf = Vec::new();
            write_sweep_csv(&sweep.rows, &mut buf).map_err(csv_io(common.out.as_deref()))?;
            emit(common.out.as_deref(), &buf)?;
            let eta_avg = Rational::new(l.cfg.user_count() as i128, l.cfg.profiles() as i128);
            let mode = choose_mode(eta_avg, l.cfg.tbar(), l.cfg.alpha());
            match sweep.best_row() {
                Some(best) => eprintln!(
                    "DoF_max = {} ({}) at eta_hat={}, Q={}, strategy {}; unicast baseline {}; advised mode {:?}",
                    fraction(best.dof.expect("best row has a DoF")),
                    decimal6(best.dof.expect("best row has a DoF")),
                    best.eta_hat,
                    best.q,
                    best.strategy,
                    l.cfg.alpha(),
                    mode
                ),
                None => eprintln!("no feasible row; unicast baseline {}", l.cfg.alpha()),
            }
            Ok(())
        }
        Command::SigmaExperiment { common, samples, seed, exhaustive, closed_form } => {
            let l = load(&common.scenario)?;
            let setup = SigmaSetup {
                users: l.cfg.user_count(),
                profiles: l.cfg.profiles(),
                tbar: l.cfg.tbar(),
                alpha: l.cfg.alpha(),
                files: l.cfg.files(),
                samples,
                seed: seed.or(l.scenario.seed).unwrap_or(0),
                exhaustive,
                mode: if closed_form { SweepMode::ClosedForm } else { SweepMode::Pipeline },
            };
            let bins = sigma_experiment(&setup)?;
            let mut buf = Vec::new();
            write_sigma_csv(&bins, &mut buf).map_err(csv_io(common.out.as_deref()))?;
            emit(common.out.as_deref(), &buf)?;
            if exhaustive {
                eprintln!("protocol: every profile-length vector weighted by its number of orderings; sigma binned to 0.5");
            } else {
                eprintln!(
                    "protocol: {samples} associations, each user placed in a uniformly random profile (seed {}); sigma binned to 0.5",
                    setup.seed
                );
            }
            Ok(())
        }
    }
}

/// Caps the worker pool from `CC_SCHED_THREADS` when set.
pub fn configure_threads() {
    if let Some(n) = std::env::var("CC_SCHED_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}
