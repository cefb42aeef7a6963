use serde::{Deserialize, Serialize};

use crate::algorithms::{Algorithm, RunResult, StepSchedule};
use crate::error::{Error, Result};

use super::{GeometryConstants, Reference};

/// Relative slack separating a genuine violation from round-off.
pub const BOUND_SLACK: f64 = 1e-9;

/// The convergence guarantees a finished trace can be checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Proposition {
    /// Mirror descent, `ρ_t = 2/(t+1)`: weighted-average suboptimality `≤ R²/(μ(t+1))`.
    Prop1Avg,
    /// Mirror descent: best-iterate suboptimality `≤ R²/(μ(t+1))`.
    Prop1Min,
    /// Mirror descent: `D(x*, x_t) ≤ R²/(μ(t+1))`.
    Prop1Bregman,
    /// Conditional gradient, `ρ_t = 2/(t+1)`: dual suboptimality `≤ 2R²/(μ(t+1))`.
    Prop3Dual,
    /// Conditional gradient, `ρ_t = 2/(t+1)`: best gap among `(x_u, y_u)`,
    /// `u < t`, is `≤ 8R²/(μ(t+1))`.
    Prop3Gap,
    /// Conditional gradient with line search: dual suboptimality `≤ 2R²/(μ(t+3))`.
    Prop4Dual,
    /// Conditional gradient with line search: best gap among `(x_u, y_u)`,
    /// `u < t`, is `≤ 2R²/(μ(t+3))` for `t ≥ 2`. At `t = 1` this would
    /// bound the gap of the starting pair, which nothing controls.
    Prop4Gap,
    /// Mirror descent over compact `K`, `ρ_t = δ/(R√t)`: averaged gap `≤ 2Rδ/√t`.
    AppendixAGap,
}

impl Proposition {
    pub const ALL: [Proposition; 8] = [
        Proposition::Prop1Avg,
        Proposition::Prop1Min,
        Proposition::Prop1Bregman,
        Proposition::Prop3Dual,
        Proposition::Prop3Gap,
        Proposition::Prop4Dual,
        Proposition::Prop4Gap,
        Proposition::AppendixAGap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Proposition::Prop1Avg => "prop1-avg",
            Proposition::Prop1Min => "prop1-min",
            Proposition::Prop1Bregman => "prop1-bregman",
            Proposition::Prop3Dual => "prop3-dual",
            Proposition::Prop3Gap => "prop3-gap",
            Proposition::Prop4Dual => "prop4-dual",
            Proposition::Prop4Gap => "prop4-gap",
            Proposition::AppendixAGap => "appendix-a-gap",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s)
    }

    pub fn needs_reference(self) -> bool {
        matches!(
            self,
            Proposition::Prop1Avg
                | Proposition::Prop1Min
                | Proposition::Prop1Bregman
                | Proposition::Prop3Dual
                | Proposition::Prop4Dual
        )
    }

    /// The algorithm and schedule family the guarantee is stated for.
    pub fn matches(self, algorithm: Algorithm, schedule: &StepSchedule) -> bool {
        use Proposition::*;
        match self {
            Prop1Avg | Prop1Min | Prop1Bregman => {
                algorithm == Algorithm::MirrorDescent
                    && matches!(schedule, StepSchedule::TwoOverTPlusOne)
            }
            Prop3Dual | Prop3Gap => {
                algorithm == Algorithm::ConditionalGradient
                    && matches!(schedule, StepSchedule::TwoOverTPlusOne)
            }
            Prop4Dual | Prop4Gap => {
                algorithm == Algorithm::ConditionalGradient
                    && matches!(schedule, StepSchedule::LineSearch { .. })
            }
            AppendixAGap => {
                algorithm == Algorithm::NonStronglyConvexMirrorDescent
                    && matches!(schedule, StepSchedule::SqrtDecay { .. })
            }
        }
    }

    /// First iteration the guarantee makes a claim about.
    pub fn first_iteration(self) -> usize {
        match self {
            Proposition::Prop4Gap => 2,
            _ => 1,
        }
    }

    /// Right-hand side of the guarantee after `t` iterations; `+∞` before
    /// [`Proposition::first_iteration`].
    pub fn bound(self, t: usize, constants: &GeometryConstants, mu: f64) -> f64 {
        if t < self.first_iteration() {
            return f64::INFINITY;
        }
        let t = t as f64;
        let r2 = constants.r2_primal;
        match self {
            Proposition::Prop1Avg | Proposition::Prop1Min | Proposition::Prop1Bregman => {
                r2 / (mu * (t + 1.0))
            }
            Proposition::Prop3Dual => 2.0 * r2 / (mu * (t + 1.0)),
            Proposition::Prop3Gap => 8.0 * r2 / (mu * (t + 1.0)),
            Proposition::Prop4Dual | Proposition::Prop4Gap => 2.0 * r2 / (mu * (t + 3.0)),
            Proposition::AppendixAGap => {
                let r = constants.r2_origin.sqrt();
                let delta = constants.delta2.unwrap_or(f64::NAN).sqrt();
                2.0 * r * delta / t.sqrt()
            }
        }
    }
}

/// Outcome of comparing a trace against one guarantee.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub proposition: Proposition,
    pub iterations: usize,
    pub observed: Vec<f64>,
    pub bounds: Vec<f64>,
    /// `bound − observed` per iteration.
    pub margins: Vec<f64>,
    pub pass: bool,
    /// Iteration (1-based) with the smallest margin.
    pub worst_iteration: Option<usize>,
    /// Set when the certificate does not apply to this run.
    pub note: Option<String>,
}

fn passes(margin: f64, bound: f64) -> bool {
    margin >= -BOUND_SLACK * (1.0 + bound.abs())
}

/// Checks `result` against `which`.
///
/// Suboptimality-based guarantees need `reference`; its tolerance is added
/// to the bound. Observed suboptimalities are measured against the side of
/// the reference pair that over-estimates them (the dual value for primal
/// suboptimality, the primal value for dual suboptimality).
pub fn check_bound(
    result: &RunResult,
    constants: &GeometryConstants,
    mu: f64,
    which: Proposition,
    reference: Option<(&Reference, f64)>,
) -> Result<BoundReport> {
    if !which.matches(result.algorithm, &result.schedule) {
        return Err(Error::Config(format!(
            "{} does not apply to {:?} with schedule {}",
            which.name(),
            result.algorithm,
            result.schedule.name()
        )));
    }
    if which.needs_reference() && reference.is_none() {
        return Err(Error::Config(format!(
            "{} needs a reference solution",
            which.name()
        )));
    }
    if which == Proposition::AppendixAGap && constants.delta2.is_none() {
        return Err(Error::Config("appendix-a-gap needs δ²".into()));
    }
    if mu <= 0.0 {
        return Err(Error::Modulus(mu));
    }
    let tol = reference.map_or(0.0, |(_, tol)| tol);

    let mut observed = Vec::with_capacity(result.trace.len());
    let mut running_min = f64::INFINITY;
    for rec in &result.trace {
        let value = match which {
            Proposition::Prop1Avg => {
                rec.avg_primal_value - reference.expect("checked").0.optimum_lower()
            }
            Proposition::Prop1Min => {
                running_min = running_min.min(rec.primal_value);
                running_min - reference.expect("checked").0.optimum_lower()
            }
            Proposition::Prop1Bregman => rec.bregman_to_ref.ok_or_else(|| {
                Error::Config("trace has no D(x*, x_t); rerun with the reference".into())
            })?,
            Proposition::Prop3Dual | Proposition::Prop4Dual => {
                rec.dual_suboptimality.ok_or_else(|| {
                    Error::Config("trace has no dual suboptimality; rerun with the reference".into())
                })?
            }
            // record t holds gap(x_{t−1}, y_{t−1})
            Proposition::Prop3Gap | Proposition::Prop4Gap => {
                running_min = running_min.min(rec.gap);
                running_min
            }
            Proposition::AppendixAGap => rec.avg_gap,
        };
        observed.push(value);
    }

    let bounds: Vec<f64> = result
        .trace
        .iter()
        .map(|r| which.bound(r.t, constants, mu) + tol)
        .collect();
    let margins: Vec<f64> = bounds.iter().zip(&observed).map(|(b, o)| b - o).collect();
    let worst_iteration = margins
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 / (1.0 + bounds[a.0].abs())).total_cmp(&(b.1 / (1.0 + bounds[b.0].abs()))))
        .map(|(i, _)| result.trace[i].t);
    let mut pass = margins
        .iter()
        .zip(&bounds)
        .all(|(m, b)| passes(*m, *b));

    let mut note = None;
    if matches!(
        which,
        Proposition::Prop1Avg | Proposition::Prop1Min | Proposition::Prop1Bregman
    ) && !result.state.carried_in_dual_image
    {
        pass = false;
        note = Some("warm start: carried subgradient is not in −Aᵀ·C, certificate void".into());
    }

    Ok(BoundReport {
        proposition: which,
        iterations: result.trace.len(),
        observed,
        bounds,
        margins,
        pass,
        worst_iteration,
        note,
    })
}
