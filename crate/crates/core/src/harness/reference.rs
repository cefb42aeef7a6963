use serde::{Deserialize, Serialize};

use crate::algorithms::{gcg_step, Algorithm, Init, SolverState, StepSchedule};
use crate::certificates::{estimate_r2, Objective, R2Kind, Reference};
use crate::error::Result;
use crate::functions::{DualDomain, Loss};
use crate::linalg::dot;
use crate::problem::ProblemInstance;

pub const DEFAULT_REFERENCE_TOL: f64 = 1e-9;
pub const DEFAULT_REFERENCE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceMethod {
    /// Exact maximization of the dual one coordinate at a time (box `C`).
    CoordinateAscent,
    /// Conditional gradient with line search (ℓ1-ball `C`).
    LineSearchConditionalGradient,
}

/// A near-optimal primal-dual pair together with its duality gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceSolution {
    pub x_star: Vec<f64>,
    pub y_star: Vec<f64>,
    pub primal_value: f64,
    pub dual_value: f64,
    pub certified_gap: f64,
    /// Sweeps (coordinate ascent) or steps (conditional gradient).
    pub iterations: usize,
    pub certified: bool,
    pub method: ReferenceMethod,
}

impl ReferenceSolution {
    pub fn reference(&self) -> Reference {
        Reference {
            x_star: self.x_star.clone(),
            y_star: self.y_star.clone(),
            primal_value: self.primal_value,
            dual_value: self.dual_value,
        }
    }
}

struct Pair {
    x: Vec<f64>,
    y: Vec<f64>,
    primal: f64,
    dual: f64,
    gap: f64,
}

fn evaluate(problem: &ProblemInstance, y: &[f64]) -> Result<Pair> {
    let z: Vec<f64> = problem.operator.adjoint_apply(y)?.iter().map(|v| -v).collect();
    let x = problem.regularizer.conj_grad(&z);
    let obj = Objective::Regularized;
    let primal = obj.primal(problem, &x)?;
    let dual = obj.dual(problem, y)?;
    let gap = obj.gap(problem, &x, y)?;
    Ok(Pair {
        x,
        y: y.to_vec(),
        primal,
        dual,
        gap,
    })
}

/// Solves to duality gap `tol` within `cap` iterations, returning the best
/// pair seen. `x_star` is always `(h*)'(−Aᵀy_star)`.
pub fn reference_solution(
    problem: &ProblemInstance,
    tol: f64,
    cap: usize,
) -> Result<ReferenceSolution> {
    let problem = problem.clone().validate(true)?;
    let init = Init::default_for(&problem);
    let start = SolverState::initialize(&problem, Algorithm::ConditionalGradient, &init)?;
    let method = match problem.loss.dual_domain() {
        DualDomain::Intervals { .. } => ReferenceMethod::CoordinateAscent,
        DualDomain::L1Ball { .. } => ReferenceMethod::LineSearchConditionalGradient,
    };

    let mut best = evaluate(&problem, &start.y)?;
    let mut iterations = 0;
    match method {
        ReferenceMethod::CoordinateAscent => {
            let mut y = start.y.clone();
            while iterations < cap {
                coordinate_sweep(&problem, &mut y)?;
                iterations += 1;
                let pair = evaluate(&problem, &y)?;
                if pair.gap < best.gap {
                    best = pair;
                }
                if best.gap <= tol {
                    break;
                }
            }
        }
        ReferenceMethod::LineSearchConditionalGradient => {
            let r2 = estimate_r2(&problem.loss, &problem.operator, R2Kind::Diameter)?.value;
            let schedule = StepSchedule::LineSearch {
                mu: problem.regularizer.modulus(),
                r2,
            };
            let mut state = start;
            while iterations < cap {
                let gap = Objective::Regularized.gap(&problem, &state.x, &state.y)?;
                let rho = schedule.step_size(iterations + 1, Some(gap))?;
                state = gcg_step(&problem, &state, rho)?;
                iterations += 1;
                let pair = evaluate(&problem, &state.y)?;
                if pair.gap < best.gap {
                    best = pair;
                }
                if best.gap <= tol {
                    break;
                }
            }
        }
    }
    Ok(ReferenceSolution {
        certified: best.gap <= tol,
        certified_gap: best.gap,
        x_star: best.x,
        y_star: best.y,
        primal_value: best.primal,
        dual_value: best.dual,
        iterations,
        method,
    })
}

/// Derivative of the coordinate conjugate `f_i*` at `α`.
fn conj_derivative(loss: &Loss, i: usize, alpha: f64) -> f64 {
    match loss {
        Loss::Hinge { labels, .. } => labels[i],
        Loss::LeastAbsoluteDeviation { targets, .. } => targets[i],
        Loss::Logistic { labels, scale } => {
            let beta = (-labels[i] * alpha / scale).clamp(0.0, 1.0);
            -labels[i] * (beta.ln() - (1.0 - beta).ln())
        }
        Loss::DualNormGauge { .. } => unreachable!("not coordinate-separable"),
    }
}

/// One pass of exact coordinate maximization of the dual. Along coordinate
/// `i` the dual derivative `⟨aᵢ, (h*)'(−Aᵀy)⟩ − fᵢ*'(yᵢ)` is non-increasing,
/// so its root is found by bisection.
fn coordinate_sweep(problem: &ProblemInstance, y: &mut [f64]) -> Result<()> {
    let DualDomain::Intervals { lower, upper } = problem.loss.dual_domain() else {
        unreachable!("coordinate ascent needs a box")
    };
    let op = &problem.operator;
    let mut z: Vec<f64> = op.adjoint_apply(y)?.iter().map(|v| -v).collect();
    let mut w = vec![0.0; z.len()];
    for i in 0..y.len() {
        let a = op.row(i);
        let yi = y[i];
        let mut derivative = |alpha: f64| {
            for ((wk, zk), ak) in w.iter_mut().zip(&z).zip(a) {
                *wk = zk - (alpha - yi) * ak;
            }
            dot(a, &problem.regularizer.conj_grad(&w)) - conj_derivative(&problem.loss, i, alpha)
        };
        let (mut lo, mut hi) = (lower[i], upper[i]);
        let alpha = if derivative(lo) <= 0.0 {
            lo
        } else if derivative(hi) >= 0.0 {
            hi
        } else {
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if derivative(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        if alpha != yi {
            for (zk, ak) in z.iter_mut().zip(a) {
                *zk -= (alpha - yi) * ak;
            }
            y[i] = alpha;
        }
    }
    Ok(())
}
