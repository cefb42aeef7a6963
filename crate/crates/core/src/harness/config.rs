use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::algorithms::{Algorithm, Init, SolverState, StepSchedule, StopRule};
use crate::certificates::GeometryConstants;
use crate::error::{Error, Result};
use crate::problem::ProblemInstance;

use super::generate::{generate_problem, GeneratorSpec, LossKind, RegularizerKind};
use super::reference::{DEFAULT_REFERENCE_CAP, DEFAULT_REFERENCE_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    TwoOverTPlusOne,
    OneOverT,
    LineSearch,
    SqrtDecay,
}

impl ScheduleKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "two_over_t_plus_one" => Some(ScheduleKind::TwoOverTPlusOne),
            "one_over_t" => Some(ScheduleKind::OneOverT),
            "line_search" => Some(ScheduleKind::LineSearch),
            "sqrt_decay" => Some(ScheduleKind::SqrtDecay),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ScheduleKind::TwoOverTPlusOne => "two_over_t_plus_one",
            ScheduleKind::OneOverT => "one_over_t",
            ScheduleKind::LineSearch => "line_search",
            ScheduleKind::SqrtDecay => "sqrt_decay",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// One experiment, stored as a flat JSON object. Missing keys take the
/// defaults below; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub loss: LossKind,
    pub regularizer: RegularizerKind,
    pub n: usize,
    pub p: usize,
    pub mu: f64,
    pub scale: Option<f64>,
    pub box_radius: f64,
    pub gauge_radius: f64,
    pub gauge_penalty: f64,
    pub outlier_fraction: f64,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub schedule: ScheduleKind,
    pub max_iters: usize,
    pub gap_tol: Option<f64>,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
    /// Solve for a reference pair and record suboptimality columns.
    pub reference: bool,
    pub reference_tol: f64,
    pub reference_cap: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            loss: LossKind::Svm,
            regularizer: RegularizerKind::SquaredL2,
            n: 100,
            p: 20,
            mu: 1.0,
            scale: None,
            box_radius: 1.0,
            gauge_radius: 1.0,
            gauge_penalty: 0.1,
            outlier_fraction: 0.1,
            seed: 7,
            algorithm: Algorithm::MirrorDescent,
            schedule: ScheduleKind::TwoOverTPlusOne,
            max_iters: 1000,
            gap_tol: None,
            format: OutputFormat::Csv,
            output: None,
            reference: false,
            reference_tol: DEFAULT_REFERENCE_TOL,
            reference_cap: DEFAULT_REFERENCE_CAP,
        }
    }
}

/// Everything needed to start a run, derived from a config.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub problem: ProblemInstance,
    pub init: Init,
    pub geometry: GeometryConstants,
    pub schedule: StepSchedule,
    pub stop: StopRule,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn generator_spec(&self) -> GeneratorSpec {
        GeneratorSpec {
            loss: self.loss,
            regularizer: self.regularizer,
            n: self.n,
            p: self.p,
            mu: self.mu,
            scale: self.scale,
            box_radius: self.box_radius,
            gauge_radius: self.gauge_radius,
            gauge_penalty: self.gauge_penalty,
            outlier_fraction: self.outlier_fraction,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.generator_spec().validate()?;
        if let Some(tol) = self.gap_tol {
            if tol.is_nan() {
                return Err(Error::Config("gap_tol: NaN".into()));
            }
        }
        if !(self.reference_tol >= 0.0) {
            return Err(Error::Config("reference_tol must be non-negative".into()));
        }
        let ns = self.algorithm == Algorithm::NonStronglyConvexMirrorDescent;
        if ns != (self.schedule == ScheduleKind::SqrtDecay) {
            return Err(Error::Config(
                "sqrt_decay pairs with ns_md, and ns_md only with sqrt_decay".into(),
            ));
        }
        if ns && self.regularizer == RegularizerKind::SquaredL2 {
            return Err(Error::Config("ns_md needs a box or simplex domain".into()));
        }
        Ok(())
    }

    /// Generates the instance and resolves the schedule constants.
    pub fn prepare(&self) -> Result<Prepared> {
        self.validate()?;
        let problem = generate_problem(&self.generator_spec(), self.seed)?;
        let init = Init::default_for(&problem);
        let x0 = SolverState::initialize(&problem, self.algorithm, &init)?.x;
        let geometry =
            GeometryConstants::compute(&problem.loss, &problem.operator, &problem.regularizer, Some(&x0))?;
        let schedule = schedule_for(self.schedule, &problem, &geometry)?;
        Ok(Prepared {
            problem,
            init,
            geometry,
            schedule,
            stop: StopRule {
                max_iters: self.max_iters,
                gap_tol: self.gap_tol.unwrap_or(f64::NEG_INFINITY),
            },
        })
    }
}

/// Instantiates a schedule kind with the constants of `problem`.
pub fn schedule_for(
    kind: ScheduleKind,
    problem: &ProblemInstance,
    geometry: &GeometryConstants,
) -> Result<StepSchedule> {
    Ok(match kind {
        ScheduleKind::TwoOverTPlusOne => StepSchedule::TwoOverTPlusOne,
        ScheduleKind::OneOverT => StepSchedule::OneOverT,
        ScheduleKind::LineSearch => StepSchedule::LineSearch {
            mu: problem.regularizer.modulus(),
            r2: geometry.r2_primal,
        },
        ScheduleKind::SqrtDecay => StepSchedule::SqrtDecay {
            delta: geometry
                .delta2
                .ok_or_else(|| Error::Config("sqrt_decay needs a compact domain".into()))?
                .sqrt(),
            r: geometry.r2_origin.sqrt(),
        },
    })
}
