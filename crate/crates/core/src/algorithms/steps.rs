use crate::error::{Error, Result};
use crate::linalg::blend_into;
use crate::problem::ProblemInstance;

use super::SolverState;

fn check_rho(rho: f64) -> Result<()> {
    if (0.0..=1.0).contains(&rho) {
        Ok(())
    } else {
        Err(Error::Argument(format!("step size {rho} outside [0, 1]")))
    }
}

/// One mirror descent step:
///
/// ```text
/// ȳ_{t−1} = f'(A x_{t−1})
/// g       = (1 − ρ)·h'(x_{t−1}) − ρ·Aᵀȳ_{t−1}
/// x_t     = (h*)'(g),   h'(x_t) := g
/// ```
///
/// `h'(x_{t−1})` is always the carried vector from the previous step, never
/// recomputed from `x_{t−1}`.
pub fn md_step(problem: &ProblemInstance, state: &SolverState, rho: f64) -> Result<SolverState> {
    check_rho(rho)?;
    let y_bar = problem
        .loss
        .subgradient(&problem.operator.apply(&state.x)?)?;
    let aty = problem.operator.adjoint_apply(&y_bar)?;
    let g: Vec<f64> = state
        .carried_h_sub
        .iter()
        .zip(&aty)
        .map(|(c, a)| (1.0 - rho) * c - rho * a)
        .collect();

    let mut next = state.clone();
    next.t += 1;
    next.x = problem.regularizer.conj_grad(&g);
    next.carried_h_sub = g;
    blend_into(&mut next.y, &y_bar, rho);
    next.absorb(next.t, &state.x, &y_bar);
    next.last_oracle_y = Some(y_bar);
    Ok(next)
}

/// One generalized conditional gradient step on the dual:
///
/// ```text
/// x_{t−1} = (h*)'(−Aᵀy_{t−1})
/// ȳ_{t−1} ∈ argmax_{y∈C} ⟨y, A x_{t−1}⟩ − f*(y)
/// y_t     = (1 − ρ)·y_{t−1} + ρ·ȳ_{t−1}
/// ```
///
/// The returned state also carries `x_t = (h*)'(−Aᵀy_t)` and `−Aᵀy_t`.
pub fn gcg_step(problem: &ProblemInstance, state: &SolverState, rho: f64) -> Result<SolverState> {
    check_rho(rho)?;
    let neg_aty: Vec<f64> = problem
        .operator
        .adjoint_apply(&state.y)?
        .into_iter()
        .map(|v| -v)
        .collect();
    let x_prev = problem.regularizer.conj_grad(&neg_aty);
    let y_bar = problem
        .loss
        .subgradient(&problem.operator.apply(&x_prev)?)?;

    let mut next = state.clone();
    next.t += 1;
    blend_into(&mut next.y, &y_bar, rho);
    next.carried_h_sub = problem
        .operator
        .adjoint_apply(&next.y)?
        .into_iter()
        .map(|v| -v)
        .collect();
    next.x = problem.regularizer.conj_grad(&next.carried_h_sub);
    next.absorb(next.t, &x_prev, &y_bar);
    next.last_oracle_y = Some(y_bar);
    Ok(next)
}

/// One step of mirror descent without strong convexity over a compact `K`:
///
/// ```text
/// y_{t−1} = f'(A x_{t−1})
/// x_t     = argmin_{x∈K} (1/ρ)·D(x, x_{t−1}) + ⟨x − x_{t−1}, Aᵀy_{t−1}⟩
/// ```
///
/// solved in closed form (multiplicative update on the simplex, clamped
/// gradient step on a box).
pub fn ns_md_step(problem: &ProblemInstance, state: &SolverState, rho: f64) -> Result<SolverState> {
    check_rho(rho)?;
    let y_prev = problem
        .loss
        .subgradient(&problem.operator.apply(&state.x)?)?;
    let aty = problem.operator.adjoint_apply(&y_prev)?;

    let mut next = state.clone();
    next.t += 1;
    next.x = problem.regularizer.prox_step(&state.x, &aty, rho)?;
    next.absorb(next.t, &state.x, &y_prev);
    next.y = y_prev.clone();
    next.last_oracle_y = Some(y_prev);
    Ok(next)
}
