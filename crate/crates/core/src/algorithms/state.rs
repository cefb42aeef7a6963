use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::DUAL_TOL;
use crate::problem::ProblemInstance;

use super::Algorithm;

/// How a run is started.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "point", rename_all = "snake_case")]
pub enum Init {
    /// Dual start `y0 ∈ C`; the primal side is `x0 = (h*)'(−Aᵀy0)`.
    Dual(Vec<f64>),
    /// `y0 = f'(A·x)` for a primal point `x`, then as [`Init::Dual`].
    FromPrimal(Vec<f64>),
    /// Mirror descent warm start at `x0` with carried subgradient `h'(x0)`.
    /// The carried vector need not lie in `−Aᵀ·C`.
    WarmPrimal(Vec<f64>),
}

impl Init {
    /// Zero dual vector when `0 ∈ C`, otherwise the dual point generated by
    /// the minimizer of `h`.
    pub fn default_for(problem: &ProblemInstance) -> Self {
        let zero = vec![0.0; problem.n()];
        if problem.loss.dual_domain().contains(&zero, 0.0) {
            Init::Dual(zero)
        } else {
            Init::FromPrimal(problem.regularizer.conj_grad(&vec![0.0; problem.p()]))
        }
    }
}

/// Iterates and running averages shared by the three recursions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverState {
    /// Completed iterations.
    pub t: usize,
    /// Primal iterate `x_t`.
    pub x: Vec<f64>,
    /// Carried subgradient `h'(x_t)`; equals `−Aᵀy_t` under matched starts.
    pub carried_h_sub: Vec<f64>,
    /// Dual iterate `y_t`. For the non-strongly convex recursion this is the
    /// last oracle output.
    pub y: Vec<f64>,
    /// Oracle output `ȳ_{t−1}` consumed by the last step.
    pub last_oracle_y: Option<Vec<f64>>,
    /// `2/(t(t+1)) Σ u·x_{u−1}`.
    pub weighted_x_avg: Vec<f64>,
    /// `2/(t(t+1)) Σ u·ȳ_{u−1}`.
    pub weighted_y_avg: Vec<f64>,
    /// `(1/t) Σ x_{u−1}`.
    pub plain_x_avg: Vec<f64>,
    /// `(1/t) Σ ȳ_{u−1}`.
    pub plain_y_avg: Vec<f64>,
    /// False after a warm start whose carried subgradient is not `−Aᵀy0`.
    pub carried_in_dual_image: bool,
}

fn neg(v: Vec<f64>) -> Vec<f64> {
    v.into_iter().map(|a| -a).collect()
}

impl SolverState {
    fn fresh(x: Vec<f64>, carried: Vec<f64>, y: Vec<f64>, matched: bool) -> Self {
        Self {
            t: 0,
            weighted_x_avg: x.clone(),
            plain_x_avg: x.clone(),
            weighted_y_avg: y.clone(),
            plain_y_avg: y.clone(),
            x,
            carried_h_sub: carried,
            y,
            last_oracle_y: None,
            carried_in_dual_image: matched,
        }
    }

    /// Matched start from `y0 ∈ C`: `x0 = (h*)'(−Aᵀy0)`, carried `= −Aᵀy0`.
    pub fn from_dual(problem: &ProblemInstance, y0: Vec<f64>) -> Result<Self> {
        if !problem.loss.dual_domain().contains(&y0, DUAL_TOL) {
            return Err(Error::Feasibility("initial dual point is outside C".into()));
        }
        let carried = neg(problem.operator.adjoint_apply(&y0)?);
        let x0 = problem.regularizer.conj_grad(&carried);
        Ok(Self::fresh(x0, carried, y0, true))
    }

    pub fn initialize(problem: &ProblemInstance, algorithm: Algorithm, init: &Init) -> Result<Self> {
        match (algorithm, init) {
            (Algorithm::NonStronglyConvexMirrorDescent, _) => {
                let x0 = match init {
                    Init::Dual(y0) => {
                        if !problem.loss.dual_domain().contains(y0, DUAL_TOL) {
                            return Err(Error::Feasibility(
                                "initial dual point is outside C".into(),
                            ));
                        }
                        problem
                            .regularizer
                            .conj_grad(&neg(problem.operator.adjoint_apply(y0)?))
                    }
                    Init::FromPrimal(x) | Init::WarmPrimal(x) => x.clone(),
                };
                if !problem.regularizer.domain().is_compact() {
                    return Err(Error::Config(
                        "non-strongly-convex mirror descent needs a compact domain".into(),
                    ));
                }
                if !problem.regularizer.contains(&x0) {
                    return Err(Error::Domain("initial iterate outside K".into()));
                }
                let y0 = problem.loss.subgradient(&problem.operator.apply(&x0)?)?;
                let p = problem.p();
                Ok(Self::fresh(x0, vec![0.0; p], y0, true))
            }
            (_, Init::Dual(y0)) => Self::from_dual(problem, y0.clone()),
            (_, Init::FromPrimal(x)) => {
                let y0 = problem.loss.subgradient(&problem.operator.apply(x)?)?;
                Self::from_dual(problem, y0)
            }
            (Algorithm::ConditionalGradient, Init::WarmPrimal(x)) => {
                let y0 = problem.loss.subgradient(&problem.operator.apply(x)?)?;
                Self::from_dual(problem, y0)
            }
            (Algorithm::MirrorDescent, Init::WarmPrimal(x0)) => {
                let carried = problem.regularizer.subgradient(x0)?;
                let y0 = problem.loss.subgradient(&problem.operator.apply(x0)?)?;
                let image = neg(problem.operator.adjoint_apply(&y0)?);
                let matched = carried
                    .iter()
                    .zip(&image)
                    .all(|(a, b)| (a - b).abs() <= 1e-12 * (1.0 + b.abs()));
                Ok(Self::fresh(x0.clone(), carried, y0, matched))
            }
        }
    }

    /// Folds `x_{t−1}` and `ȳ_{t−1}` into the running averages; `t` is the new count.
    pub(crate) fn absorb(&mut self, t: usize, x_prev: &[f64], y_bar: &[f64]) {
        let w = 2.0 / (t as f64 + 1.0);
        let u = 1.0 / t as f64;
        for (a, v) in self.weighted_x_avg.iter_mut().zip(x_prev) {
            *a += w * (v - *a);
        }
        for (a, v) in self.weighted_y_avg.iter_mut().zip(y_bar) {
            *a += w * (v - *a);
        }
        for (a, v) in self.plain_x_avg.iter_mut().zip(x_prev) {
            *a += u * (v - *a);
        }
        for (a, v) in self.plain_y_avg.iter_mut().zip(y_bar) {
            *a += u * (v - *a);
        }
    }
}
