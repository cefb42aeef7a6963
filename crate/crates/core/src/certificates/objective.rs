use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::DUAL_TOL;
use crate::linalg::dot;
use crate::problem::ProblemInstance;

/// Negative gaps down to this value are treated as round-off.
pub const GAP_CLAMP: f64 = 1e-10;

/// Which pair of objectives a run is certified against.
///
/// `Regularized` is `h(x) + f(Ax)` with dual `−h*(−Aᵀy) − f*(y)`.
/// `Constrained` keeps only the indicator of `K`: `f(Ax)` on `K` with dual
/// `−σ_K(−Aᵀy) − f*(y)`, the setting of mirror descent without strong convexity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Regularized,
    Constrained,
}

impl Objective {
    pub fn primal(self, problem: &ProblemInstance, x: &[f64]) -> Result<f64> {
        match self {
            Objective::Regularized => primal_objective(problem, x),
            Objective::Constrained => constrained_primal_objective(problem, x),
        }
    }

    pub fn dual(self, problem: &ProblemInstance, y: &[f64]) -> Result<f64> {
        match self {
            Objective::Regularized => dual_objective(problem, y),
            Objective::Constrained => constrained_dual_objective(problem, y),
        }
    }

    pub fn gap(self, problem: &ProblemInstance, x: &[f64], y: &[f64]) -> Result<f64> {
        clamp_gap(self.primal(problem, x)? - self.dual(problem, y)?)
    }
}

/// `g_primal(x) = h(x) + f(Ax)`.
pub fn primal_objective(problem: &ProblemInstance, x: &[f64]) -> Result<f64> {
    let z = problem.operator.apply(x)?;
    Ok(problem.regularizer.value(x) + problem.loss.value(&z))
}

/// `g_dual(y) = −h*(−Aᵀy) − f*(y)`; `−∞` outside the closure of `C`.
pub fn dual_objective(problem: &ProblemInstance, y: &[f64]) -> Result<f64> {
    let fc = problem.loss.conj_value(y);
    if fc == f64::INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    let neg_aty: Vec<f64> = problem.operator.adjoint_apply(y)?.iter().map(|v| -v).collect();
    Ok(-problem.regularizer.conj_value(&neg_aty) - fc)
}

/// `I_K(x) + f(Ax)`.
pub fn constrained_primal_objective(problem: &ProblemInstance, x: &[f64]) -> Result<f64> {
    let z = problem.operator.apply(x)?;
    if !problem.regularizer.contains(x) {
        return Ok(f64::INFINITY);
    }
    Ok(problem.loss.value(&z))
}

/// `−σ_K(−Aᵀy) − f*(y)`.
pub fn constrained_dual_objective(problem: &ProblemInstance, y: &[f64]) -> Result<f64> {
    let fc = problem.loss.conj_value(y);
    if fc == f64::INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    let neg_aty: Vec<f64> = problem.operator.adjoint_apply(y)?.iter().map(|v| -v).collect();
    Ok(-problem.regularizer.domain().support(&neg_aty) - fc)
}

fn clamp_gap(gap: f64) -> Result<f64> {
    if gap.is_nan() {
        return Err(Error::Inconsistent { gap });
    }
    if gap < -GAP_CLAMP {
        return Err(Error::Inconsistent { gap });
    }
    Ok(gap.max(0.0))
}

/// `gap(x, y) = g_primal(x) − g_dual(y)`, with round-off negatives clamped to 0.
pub fn duality_gap(problem: &ProblemInstance, x: &[f64], y: &[f64]) -> Result<f64> {
    if !problem.regularizer.contains(x) {
        return Err(Error::Domain("gap requested at x outside K".into()));
    }
    if !problem.loss.dual_domain().contains(y, DUAL_TOL) {
        return Err(Error::Feasibility("gap requested at y outside C".into()));
    }
    Objective::Regularized.gap(problem, x, y)
}

/// The two Fenchel–Young residuals whose sum is the duality gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapDecomposition {
    /// `h(x) + h*(−Aᵀy) + ⟨y, Ax⟩`, zero iff `(x, −Aᵀy)` is a Fenchel pair for `h`.
    pub h_residual: f64,
    /// `f(Ax) + f*(y) − ⟨y, Ax⟩`, zero iff `(Ax, y)` is a Fenchel pair for `f`.
    pub f_residual: f64,
}

impl GapDecomposition {
    pub fn total(&self) -> f64 {
        self.h_residual + self.f_residual
    }
}

pub fn gap_decomposition(
    problem: &ProblemInstance,
    x: &[f64],
    y: &[f64],
) -> Result<GapDecomposition> {
    let ax = problem.operator.apply(x)?;
    let neg_aty: Vec<f64> = problem.operator.adjoint_apply(y)?.iter().map(|v| -v).collect();
    let coupling = dot(y, &ax);
    Ok(GapDecomposition {
        h_residual: problem.regularizer.value(x)
            + problem.regularizer.conj_value(&neg_aty)
            + coupling,
        f_residual: problem.loss.value(&ax) + problem.loss.conj_value(y) - coupling,
    })
}
