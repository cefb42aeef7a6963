//! Lockstep comparison of mirror descent and generalized conditional
//! gradient started from matched points.

use serde::{Deserialize, Serialize};

use crate::algorithms::{gcg_step, md_step, SolverState, StepSchedule};
use crate::certificates::Objective;
use crate::error::{Error, Result};
use crate::linalg::{max_abs_diff, norm_inf};
use crate::problem::ProblemInstance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub iterations: usize,
    /// `max_t ‖x_t^MD − x_t^GCG‖∞`.
    pub max_x_deviation: f64,
    /// `max_t ‖h'(x_t)^MD + Aᵀy_t^GCG‖∞`.
    pub max_dual_identity_deviation: f64,
    /// First iteration whose deviation exceeded the tolerance.
    pub first_divergence: Option<usize>,
    pub tolerance: f64,
    pub pass: bool,
}

/// `x0 = (h*)'(−Aᵀy0)` and the carried subgradient `−Aᵀy0`.
pub fn init_primal_from_dual(
    problem: &ProblemInstance,
    y0: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    let s = SolverState::from_dual(problem, y0.to_vec())?;
    Ok((s.x, s.carried_h_sub))
}

/// Runs both recursions for `iterations` steps from the matched start at `y0`.
pub fn verify_equivalence(
    problem: &ProblemInstance,
    y0: &[f64],
    schedule: StepSchedule,
    iterations: usize,
    tolerance: f64,
) -> Result<EquivalenceReport> {
    let problem = problem.clone().validate(true)?;
    let start = SolverState::from_dual(&problem, y0.to_vec())?;
    lockstep(
        &problem,
        start.clone(),
        start,
        &schedule,
        &schedule,
        iterations,
        tolerance,
    )
}

/// Steps an explicit mirror descent state and conditional gradient state
/// side by side. Both must use the same schedule; line-search steps use the
/// gap of the conditional gradient pair.
pub fn lockstep(
    problem: &ProblemInstance,
    mut md: SolverState,
    mut gcg: SolverState,
    md_schedule: &StepSchedule,
    gcg_schedule: &StepSchedule,
    iterations: usize,
    tolerance: f64,
) -> Result<EquivalenceReport> {
    if md_schedule != gcg_schedule {
        return Err(Error::Config(format!(
            "schedules differ: {} vs {}",
            md_schedule.name(),
            gcg_schedule.name()
        )));
    }
    let mut report = EquivalenceReport {
        iterations,
        max_x_deviation: 0.0,
        max_dual_identity_deviation: 0.0,
        first_divergence: None,
        tolerance,
        pass: true,
    };
    for t in 1..=iterations {
        let gap = if gcg_schedule.needs_gap() {
            Some(Objective::Regularized.gap(problem, &gcg.x, &gcg.y)?)
        } else {
            None
        };
        let rho = gcg_schedule.step_size(t, gap)?;
        md = md_step(problem, &md, rho)?;
        gcg = gcg_step(problem, &gcg, rho)?;

        let dx = max_abs_diff(&md.x, &gcg.x);
        let aty = problem.operator.adjoint_apply(&gcg.y)?;
        let identity: Vec<f64> = md.carried_h_sub.iter().zip(&aty).map(|(c, a)| c + a).collect();
        let dd = norm_inf(&identity);
        report.max_x_deviation = report.max_x_deviation.max(dx);
        report.max_dual_identity_deviation = report.max_dual_identity_deviation.max(dd);
        // NaN deviations count as divergence
        if report.first_divergence.is_none() && !(dx <= tolerance && dd <= tolerance) {
            report.first_divergence = Some(t);
        }
    }
    report.pass = report.first_divergence.is_none();
    Ok(report)
}
