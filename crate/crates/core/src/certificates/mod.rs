//! Objective values, duality gaps, the constants `R²` and `δ²`, and
//! checkers for the convergence guarantees.

mod bounds;
mod geometry;
mod objective;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::problem::ProblemInstance;

pub use bounds::{check_bound, BoundReport, Proposition, BOUND_SLACK};
pub use geometry::{
    domain_radius_delta2, estimate_r2, ComputationMode, GeometryConstants, R2Estimate, R2Kind,
    EXACT_VERTEX_LIMIT,
};
pub use objective::{
    constrained_dual_objective, constrained_primal_objective, dual_objective, duality_gap,
    gap_decomposition, primal_objective, GapDecomposition, Objective, GAP_CLAMP,
};

/// A primal-dual pair with known objective values; the optimum lies in
/// `[dual_value, primal_value]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub x_star: Vec<f64>,
    pub y_star: Vec<f64>,
    pub primal_value: f64,
    pub dual_value: f64,
}

impl Reference {
    pub fn from_pair(
        problem: &ProblemInstance,
        objective: Objective,
        x_star: Vec<f64>,
        y_star: Vec<f64>,
    ) -> Result<Self> {
        let primal_value = objective.primal(problem, &x_star)?;
        let dual_value = objective.dual(problem, &y_star)?;
        Ok(Self {
            x_star,
            y_star,
            primal_value,
            dual_value,
        })
    }

    pub fn gap(&self) -> f64 {
        (self.primal_value - self.dual_value).max(0.0)
    }

    /// Lower bound on the optimal value.
    pub fn optimum_lower(&self) -> f64 {
        self.dual_value
    }

    /// Upper bound on the optimal value.
    pub fn optimum_upper(&self) -> f64 {
        self.primal_value
    }
}
