use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::algorithms::{run, Algorithm, RunResult, SolverState};
use crate::certificates::{check_bound, BoundReport, Proposition};
use crate::equivalence::verify_equivalence;
use crate::error::{Error, Result};

use super::config::{ExperimentConfig, OutputFormat, ScheduleKind};
use super::output::{render_trace, write_output};
use super::reference::{reference_solution, ReferenceSolution};

/// Slack added to suboptimality bounds on top of the reference gap.
pub const CERTIFY_SLACK: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "pdcg", version, about = "Mirror descent and conditional gradient with duality-gap certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one experiment and emit its trace.
    Solve(Common),
    /// Run mirror descent and conditional gradient in lockstep.
    Compare {
        #[command(flatten)]
        common: Common,
        /// Largest tolerated deviation.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Run the algorithm a guarantee is stated for and check the trace against it.
    Certify {
        #[command(flatten)]
        common: Common,
        /// One of prop1-avg, prop1-min, prop1-bregman, prop3-dual, prop3-gap,
        /// prop4-dual, prop4-gap, appendix-a-gap.
        #[arg(long = "prop", value_parser = parse_prop)]
        proposition: Proposition,
    },
    /// Run every schedule × seed cell and write one trace per cell.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated schedule names.
        #[arg(long, value_delimiter = ',', value_parser = parse_schedule, required = true)]
        schedules: Vec<ScheduleKind>,
        /// Comma-separated seeds.
        #[arg(long, value_delimiter = ',', required = true)]
        seeds: Vec<u64>,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// JSON experiment config; built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Iteration budget.
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long, value_enum)]
    algorithm: Option<AlgorithmArg>,
    #[arg(long, value_parser = parse_schedule)]
    schedule: Option<ScheduleKind>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Compute a reference solution and fill the suboptimality columns.
    #[arg(long)]
    reference: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Md,
    Gcg,
    NsMd,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

fn parse_prop(s: &str) -> std::result::Result<Proposition, String> {
    Proposition::parse(s).ok_or_else(|| format!("unknown proposition `{s}`"))
}

fn parse_schedule(s: &str) -> std::result::Result<ScheduleKind, String> {
    ScheduleKind::parse(s).ok_or_else(|| format!("unknown schedule `{s}`"))
}

impl Common {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(iters) = self.iters {
            cfg.max_iters = iters;
        }
        if let Some(a) = self.algorithm {
            cfg.algorithm = match a {
                AlgorithmArg::Md => Algorithm::MirrorDescent,
                AlgorithmArg::Gcg => Algorithm::ConditionalGradient,
                AlgorithmArg::NsMd => Algorithm::NonStronglyConvexMirrorDescent,
            };
        }
        if let Some(s) = self.schedule {
            cfg.schedule = s;
        }
        if let Some(f) = self.format {
            cfg.format = match f {
                FormatArg::Csv => OutputFormat::Csv,
                FormatArg::Json => OutputFormat::Json,
            };
        }
        if let Some(out) = &self.out {
            cfg.output = Some(out.clone());
        }
        cfg.reference |= self.reference;
        Ok(cfg)
    }
}

/// Outcome of a subcommand that ran to completion.
enum Outcome {
    Ok,
    CheckFailed,
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns 0 on success, 1 on a failed check and 2 on any error.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::CheckFailed) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(command: Command) -> Result<Outcome> {
    match command {
        Command::Solve(common) => solve(&common.config()?),
        Command::Compare { common, tol } => compare(&common.config()?, tol),
        Command::Certify {
            common,
            proposition,
        } => certify(&common.config()?, proposition),
        Command::Sweep {
            common,
            schedules,
            seeds,
            out_dir,
        } => sweep(&common.config()?, &schedules, &seeds, &out_dir),
    }
}

fn solve_reference(cfg: &ExperimentConfig, problem: &crate::ProblemInstance) -> Result<ReferenceSolution> {
    let r = reference_solution(problem, cfg.reference_tol, cfg.reference_cap)?;
    if !r.certified {
        eprintln!(
            "warning: reference gap {:.3e} above tolerance {:.3e}",
            r.certified_gap, cfg.reference_tol
        );
    }
    Ok(r)
}

/// Runs `cfg` and renders its trace.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<(RunResult, String)> {
    let prep = cfg.prepare()?;
    let reference = if cfg.reference && cfg.algorithm != Algorithm::NonStronglyConvexMirrorDescent {
        Some(solve_reference(cfg, &prep.problem)?.reference())
    } else {
        None
    };
    let result = run(
        &prep.problem,
        cfg.algorithm,
        prep.schedule,
        &prep.init,
        prep.stop,
        reference.as_ref(),
    )
    .map_err(|f| f.error)?;
    let text = render_trace(&result, cfg, &prep.geometry, cfg.format);
    Ok((result, text))
}

fn solve(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (_, text) = run_experiment(cfg)?;
    write_output(&text, cfg.output.as_deref())?;
    Ok(Outcome::Ok)
}

fn compare(cfg: &ExperimentConfig, tol: f64) -> Result<Outcome> {
    if cfg.schedule == ScheduleKind::SqrtDecay {
        return Err(Error::Config("compare needs a strongly convex schedule".into()));
    }
    let cfg = ExperimentConfig {
        algorithm: Algorithm::ConditionalGradient,
        ..cfg.clone()
    };
    let prep = cfg.prepare()?;
    let y0 = SolverState::initialize(&prep.problem, Algorithm::ConditionalGradient, &prep.init)?.y;
    let report = verify_equivalence(&prep.problem, &y0, prep.schedule, cfg.max_iters, tol)?;
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    write_output(&text, cfg.output.as_deref())?;
    eprintln!(
        "equivalence: {} (max |Δx| {:.3e}, max dual identity {:.3e})",
        if report.pass { "pass" } else { "FAIL" },
        report.max_x_deviation,
        report.max_dual_identity_deviation
    );
    Ok(if report.pass {
        Outcome::Ok
    } else {
        Outcome::CheckFailed
    })
}

/// Runs the algorithm and schedule that `which` is stated for and checks the trace.
pub fn certify_experiment(cfg: &ExperimentConfig, which: Proposition) -> Result<BoundReport> {
    let (algorithm, schedule) = match which {
        Proposition::Prop1Avg | Proposition::Prop1Min | Proposition::Prop1Bregman => {
            (Algorithm::MirrorDescent, ScheduleKind::TwoOverTPlusOne)
        }
        Proposition::Prop3Dual | Proposition::Prop3Gap => {
            (Algorithm::ConditionalGradient, ScheduleKind::TwoOverTPlusOne)
        }
        Proposition::Prop4Dual | Proposition::Prop4Gap => {
            (Algorithm::ConditionalGradient, ScheduleKind::LineSearch)
        }
        Proposition::AppendixAGap => (Algorithm::NonStronglyConvexMirrorDescent, ScheduleKind::SqrtDecay),
    };
    let cfg = ExperimentConfig {
        algorithm,
        schedule,
        ..cfg.clone()
    };
    let prep = cfg.prepare()?;
    let reference = if which.needs_reference() {
        Some(solve_reference(&cfg, &prep.problem)?)
    } else {
        None
    };
    let reference_pair = reference.as_ref().map(|r| r.reference());
    let result = run(
        &prep.problem,
        algorithm,
        prep.schedule,
        &prep.init,
        prep.stop,
        reference_pair.as_ref(),
    )
    .map_err(|f| f.error)?;
    let slack = reference.as_ref().map(|r| CERTIFY_SLACK + r.certified_gap);
    check_bound(
        &result,
        &prep.geometry,
        prep.problem.regularizer.modulus(),
        which,
        reference_pair.as_ref().zip(slack),
    )
}

fn certify(cfg: &ExperimentConfig, which: Proposition) -> Result<Outcome> {
    let report = certify_experiment(cfg, which)?;
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    write_output(&text, cfg.output.as_deref())?;
    let worst = report
        .worst_iteration
        .map(|t| format!(", tightest at t={t}"))
        .unwrap_or_default();
    eprintln!(
        "{}: {}{}{}",
        which.name(),
        if report.pass { "pass" } else { "FAIL" },
        worst,
        report.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default()
    );
    Ok(if report.pass {
        Outcome::Ok
    } else {
        Outcome::CheckFailed
    })
}

/// Worker count for sweeps: `PDCG_THREADS` when set to a positive integer.
fn sweep_threads() -> Result<usize> {
    match std::env::var("PDCG_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| Error::Config(format!("PDCG_THREADS must be a positive integer, got `{v}`"))),
        Err(_) => Ok(0),
    }
}

/// File name of one sweep cell.
pub fn cell_file_name(cfg: &ExperimentConfig) -> String {
    let algorithm = match cfg.algorithm {
        Algorithm::MirrorDescent => "md",
        Algorithm::ConditionalGradient => "gcg",
        Algorithm::NonStronglyConvexMirrorDescent => "ns_md",
    };
    let ext = match cfg.format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    };
    format!("{algorithm}_{}_seed{}.{ext}", cfg.schedule.name(), cfg.seed)
}

fn sweep(
    base: &ExperimentConfig,
    schedules: &[ScheduleKind],
    seeds: &[u64],
    out_dir: &Path,
) -> Result<Outcome> {
    let cells: Vec<ExperimentConfig> = schedules
        .iter()
        .flat_map(|&schedule| {
            seeds.iter().map(move |&seed| ExperimentConfig {
                schedule,
                seed,
                output: None,
                ..base.clone()
            })
        })
        .collect();
    for cell in &cells {
        cell.validate()?;
    }
    std::fs::create_dir_all(out_dir).map_err(|e| Error::Io(format!("{}: {e}", out_dir.display())))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(sweep_threads()?)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let results: Vec<Result<()>> = pool.install(|| {
        cells
            .par_iter()
            .map(|cell| {
                let (_, text) = run_experiment(cell)?;
                write_output(&text, Some(&out_dir.join(cell_file_name(cell))))
            })
            .collect()
    });
    let mut first_error = None;
    for (cell, r) in cells.iter().zip(results) {
        if let Err(e) = r {
            eprintln!("cell {}: {e}", cell_file_name(cell));
            first_error.get_or_insert(e);
        }
    }
    match first_error {
        Some(e) => Err(e),
        None => {
            eprintln!("sweep: wrote {} traces to {}", cells.len(), out_dir.display());
            Ok(Outcome::Ok)
        }
    }
}
