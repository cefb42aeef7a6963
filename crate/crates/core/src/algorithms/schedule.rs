use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Step-size rules `ρ_t ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepSchedule {
    /// `ρ_t = 2/(t+1)`.
    TwoOverTPlusOne,
    /// `ρ_t = 1/t`.
    OneOverT,
    /// `ρ_t = min{(μ/R²)·gap(x_{t−1}, y_{t−1}), 1}`.
    LineSearch { mu: f64, r2: f64 },
    /// `ρ_t = min{δ/(R√t), 1}`.
    SqrtDecay { delta: f64, r: f64 },
}

impl StepSchedule {
    pub fn name(&self) -> &'static str {
        match self {
            StepSchedule::TwoOverTPlusOne => "two_over_t_plus_one",
            StepSchedule::OneOverT => "one_over_t",
            StepSchedule::LineSearch { .. } => "line_search",
            StepSchedule::SqrtDecay { .. } => "sqrt_decay",
        }
    }

    pub fn needs_gap(&self) -> bool {
        matches!(self, StepSchedule::LineSearch { .. })
    }

    /// True for schedules whose natural certificate is the uniform average.
    pub fn uses_plain_average(&self) -> bool {
        matches!(self, StepSchedule::OneOverT | StepSchedule::SqrtDecay { .. })
    }

    /// `ρ_t` for iteration `t ≥ 1`.
    pub fn step_size(&self, t: usize, current_gap: Option<f64>) -> Result<f64> {
        if t == 0 {
            return Err(Error::Argument("iterations are numbered from 1".into()));
        }
        let t = t as f64;
        let rho = match *self {
            StepSchedule::TwoOverTPlusOne => 2.0 / (t + 1.0),
            StepSchedule::OneOverT => 1.0 / t,
            StepSchedule::LineSearch { mu, r2 } => {
                let gap = current_gap.ok_or_else(|| {
                    Error::Argument("line search needs the current duality gap".into())
                })?;
                if gap.is_nan() {
                    return Err(Error::Argument("line search got a NaN gap".into()));
                }
                if gap <= 0.0 {
                    0.0
                } else if r2 <= 0.0 {
                    1.0
                } else {
                    (mu / r2 * gap).min(1.0)
                }
            }
            StepSchedule::SqrtDecay { delta, r } => {
                if r <= 0.0 {
                    1.0
                } else {
                    (delta / (r * t.sqrt())).min(1.0)
                }
            }
        };
        Ok(rho.clamp(0.0, 1.0))
    }
}
