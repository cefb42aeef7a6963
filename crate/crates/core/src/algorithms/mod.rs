//! Mirror descent, generalized conditional gradient, and mirror descent
//! without strong convexity, plus the run loop that records certificates.

mod schedule;
mod state;
mod steps;

use serde::{Deserialize, Serialize};

use crate::certificates::{Objective, Reference};
use crate::error::{Error, Result};
use crate::problem::{ProblemInstance, TraceRecord};

pub use schedule::StepSchedule;
pub use state::{Init, SolverState};
pub use steps::{gcg_step, md_step, ns_md_step};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "md")]
    MirrorDescent,
    #[serde(rename = "gcg")]
    ConditionalGradient,
    #[serde(rename = "ns_md")]
    NonStronglyConvexMirrorDescent,
}

impl Algorithm {
    pub fn objective(self) -> Objective {
        match self {
            Algorithm::NonStronglyConvexMirrorDescent => Objective::Constrained,
            _ => Objective::Regularized,
        }
    }

    pub fn step(self, problem: &ProblemInstance, state: &SolverState, rho: f64) -> Result<SolverState> {
        match self {
            Algorithm::MirrorDescent => md_step(problem, state, rho),
            Algorithm::ConditionalGradient => gcg_step(problem, state, rho),
            Algorithm::NonStronglyConvexMirrorDescent => ns_md_step(problem, state, rho),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StopRule {
    pub max_iters: usize,
    /// Stop once the recorded gap is at most this value; `−∞` disables it.
    pub gap_tol: f64,
}

impl StopRule {
    pub fn iterations(max_iters: usize) -> Self {
        Self {
            max_iters,
            gap_tol: f64::NEG_INFINITY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Budget,
    GapTolerance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub algorithm: Algorithm,
    pub schedule: StepSchedule,
    pub trace: Vec<TraceRecord>,
    pub state: SolverState,
    pub termination: Termination,
}

/// A run aborted by an oracle or configuration error; the trace up to the
/// failing iteration is kept.
#[derive(Debug, Clone, PartialEq)]
pub struct RunFailure {
    pub error: Error,
    pub trace: Vec<TraceRecord>,
    /// Last good state; `None` when initialization itself failed.
    pub state: Option<SolverState>,
}

impl std::fmt::Display for RunFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "run aborted after {} iterations: {}",
            self.trace.len(),
            self.error
        )
    }
}

impl std::error::Error for RunFailure {}

impl From<RunFailure> for Error {
    fn from(f: RunFailure) -> Self {
        f.error
    }
}

fn averages(state: &SolverState, schedule: &StepSchedule) -> (Vec<f64>, Vec<f64>) {
    if schedule.uses_plain_average() {
        (state.plain_x_avg.clone(), state.plain_y_avg.clone())
    } else {
        (state.weighted_x_avg.clone(), state.weighted_y_avg.clone())
    }
}

/// Runs `algorithm` from `init` until the iteration budget is spent or the
/// recorded gap drops to `stop.gap_tol`.
///
/// Row `t` holds the primal value at `x_{t−1}`, the dual value at `y_{t−1}`
/// (for the non-strongly convex recursion, at `f'(Ax_{t−1})`), the step `ρ_t`
/// and the objective values at the running averages after step `t`. When a
/// reference is supplied, the post-step dual suboptimality and `D(x*, x_t)`
/// are filled in as well.
pub fn run(
    problem: &ProblemInstance,
    algorithm: Algorithm,
    schedule: StepSchedule,
    init: &Init,
    stop: StopRule,
    reference: Option<&Reference>,
) -> std::result::Result<RunResult, Box<RunFailure>> {
    let state = match problem
        .clone()
        .validate(true)
        .and_then(|p| SolverState::initialize(&p, algorithm, init))
    {
        Ok(s) => s,
        Err(error) => {
            return Err(Box::new(RunFailure {
                error,
                trace: vec![],
                state: None,
            }))
        }
    };
    run_from(problem, algorithm, schedule, state, stop, reference)
}

/// As [`run`], starting from an explicit state.
pub fn run_from(
    problem: &ProblemInstance,
    algorithm: Algorithm,
    schedule: StepSchedule,
    mut state: SolverState,
    stop: StopRule,
    reference: Option<&Reference>,
) -> std::result::Result<RunResult, Box<RunFailure>> {
    let objective = algorithm.objective();
    let mut trace = Vec::with_capacity(stop.max_iters.min(1 << 20));
    let mut termination = Termination::Budget;

    for _ in 0..stop.max_iters {
        match iterate(problem, algorithm, &schedule, objective, &state, reference) {
            Ok((next, record)) => {
                let done = record.gap <= stop.gap_tol;
                trace.push(record);
                state = next;
                if done {
                    termination = Termination::GapTolerance;
                    break;
                }
            }
            Err(error) => {
                return Err(Box::new(RunFailure {
                    error,
                    trace,
                    state: Some(state),
                }))
            }
        }
    }
    Ok(RunResult {
        algorithm,
        schedule,
        trace,
        state,
        termination,
    })
}

fn iterate(
    problem: &ProblemInstance,
    algorithm: Algorithm,
    schedule: &StepSchedule,
    objective: Objective,
    state: &SolverState,
    reference: Option<&Reference>,
) -> Result<(SolverState, TraceRecord)> {
    let t = state.t + 1;
    let dual_point = match algorithm {
        Algorithm::NonStronglyConvexMirrorDescent => problem
            .loss
            .subgradient(&problem.operator.apply(&state.x)?)?,
        _ => state.y.clone(),
    };
    let primal_value = objective.primal(problem, &state.x)?;
    let dual_value = objective.dual(problem, &dual_point)?;
    // validates the pair; raw difference is what gets recorded
    objective.gap(problem, &state.x, &dual_point)?;
    let gap = primal_value - dual_value;

    let rho = schedule.step_size(t, Some(gap.max(0.0)))?;
    let next = algorithm.step(problem, state, rho)?;

    let (x_avg, y_avg) = averages(&next, schedule);
    let avg_primal_value = objective.primal(problem, &x_avg)?;
    let avg_dual_value = objective.dual(problem, &y_avg)?;
    objective.gap(problem, &x_avg, &y_avg)?;

    let (dual_suboptimality, bregman_to_ref) = match reference {
        Some(r) => {
            let y_now = match algorithm {
                Algorithm::NonStronglyConvexMirrorDescent => &y_avg,
                _ => &next.y,
            };
            let sub = r.optimum_upper() - objective.dual(problem, y_now)?;
            let breg = problem
                .regularizer
                .bregman(&r.x_star, &next.x)
                .unwrap_or(f64::INFINITY);
            (Some(sub), Some(breg))
        }
        None => (None, None),
    };

    let record = TraceRecord {
        t,
        rho,
        primal_value,
        dual_value,
        gap,
        avg_primal_value,
        avg_dual_value,
        avg_gap: avg_primal_value - avg_dual_value,
        dual_suboptimality,
        bregman_to_ref,
    };
    Ok((next, record))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{Loss, Regularizer};
    use crate::linalg::LinearOperator;

    fn small_svm() -> ProblemInstance {
        ProblemInstance::new(
            LinearOperator::from_rows(&[
                vec![0.4, 0.1],
                vec![-0.3, 0.2],
                vec![0.5, -0.1],
                vec![-0.2, -0.4],
            ])
            .unwrap(),
            Regularizer::squared_l2(1.0, 2),
            Loss::hinge(vec![1.0, -1.0, 1.0, -1.0], 0.25).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn zero_budget_returns_init() {
        let prob = small_svm();
        let init = Init::default_for(&prob);
        let res = run(
            &prob,
            Algorithm::ConditionalGradient,
            StepSchedule::TwoOverTPlusOne,
            &init,
            StopRule::iterations(0),
            None,
        )
        .unwrap();
        assert!(res.trace.is_empty());
        assert_eq!(res.state, SolverState::initialize(&prob, Algorithm::ConditionalGradient, &init).unwrap());
    }

    #[test]
    fn infinite_tolerance_stops_after_first_record() {
        let prob = small_svm();
        let res = run(
            &prob,
            Algorithm::MirrorDescent,
            StepSchedule::TwoOverTPlusOne,
            &Init::default_for(&prob),
            StopRule {
                max_iters: 50,
                gap_tol: f64::INFINITY,
            },
            None,
        )
        .unwrap();
        assert_eq!(res.trace.len(), 1);
        assert_eq!(res.termination, Termination::GapTolerance);
    }

    #[test]
    fn trace_rows_are_consistent() {
        let prob = small_svm();
        let res = run(
            &prob,
            Algorithm::ConditionalGradient,
            StepSchedule::TwoOverTPlusOne,
            &Init::default_for(&prob),
            StopRule::iterations(200),
            None,
        )
        .unwrap();
        assert_eq!(res.trace.len(), 200);
        assert_eq!(res.state.t, 200);
        for (k, r) in res.trace.iter().enumerate() {
            assert_eq!(r.t, k + 1);
            assert!((r.gap - (r.primal_value - r.dual_value)).abs() <= 1e-12);
            assert!(r.gap >= -1e-10);
            assert!(r.dual_suboptimality.is_none());
        }
        assert_eq!(res.trace[0].rho, 1.0);
    }

    #[test]
    fn warm_start_with_foreign_subgradient_is_flagged() {
        let prob = small_svm();
        let s = SolverState::initialize(
            &prob,
            Algorithm::MirrorDescent,
            &Init::WarmPrimal(vec![0.0, 0.0]),
        )
        .unwrap();
        assert!(!s.carried_in_dual_image);
        let s = SolverState::initialize(&prob, Algorithm::MirrorDescent, &Init::default_for(&prob))
            .unwrap();
        assert!(s.carried_in_dual_image);
    }

    #[test]
    fn configuration_errors_abort() {
        let prob = small_svm();
        let err = run(
            &prob,
            Algorithm::NonStronglyConvexMirrorDescent,
            StepSchedule::SqrtDecay { delta: 1.0, r: 1.0 },
            &Init::default_for(&prob),
            StopRule::iterations(10),
            None,
        )
        .unwrap_err();
        assert!(matches!(err.error, Error::Config(_)));
        assert!(err.trace.is_empty() && err.state.is_none());

        let err = run(
            &prob,
            Algorithm::ConditionalGradient,
            StepSchedule::TwoOverTPlusOne,
            &Init::Dual(vec![1.0, 0.0, 0.0, 0.0]),
            StopRule::iterations(10),
            None,
        )
        .unwrap_err();
        assert!(matches!(err.error, Error::Feasibility(_)));
    }

    #[test]
    fn runs_are_deterministic() {
        let prob = small_svm();
        let go = || {
            run(
                &prob,
                Algorithm::MirrorDescent,
                StepSchedule::LineSearch { mu: 1.0, r2: 0.5 },
                &Init::default_for(&prob),
                StopRule::iterations(100),
                None,
            )
            .unwrap()
        };
        let (a, b) = (go(), go());
        for (ra, rb) in a.trace.iter().zip(&b.trace) {
            assert_eq!(ra.primal_value.to_bits(), rb.primal_value.to_bits());
            assert_eq!(ra.gap.to_bits(), rb.gap.to_bits());
        }
    }
}
