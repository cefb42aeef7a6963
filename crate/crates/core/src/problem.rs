use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::{Loss, Regularizer};
use crate::linalg::LinearOperator;

/// The triple `(h, f, A)` of `min_x h(x) + f(Ax)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    pub operator: LinearOperator,
    pub regularizer: Regularizer,
    pub loss: Loss,
}

impl ProblemInstance {
    /// Builds and validates an instance; strong convexity is required.
    pub fn new(operator: LinearOperator, regularizer: Regularizer, loss: Loss) -> Result<Self> {
        Self {
            operator,
            regularizer,
            loss,
        }
        .validate(true)
    }

    /// Loss dimension `n`.
    pub fn n(&self) -> usize {
        self.operator.rows()
    }

    /// Primal dimension `p`.
    pub fn p(&self) -> usize {
        self.operator.cols()
    }

    /// Checks every shape invariant, and `μ > 0` when `strongly_convex` is set.
    pub fn validate(self, strongly_convex: bool) -> Result<Self> {
        let (n, p) = (self.operator.rows(), self.operator.cols());
        if self.regularizer.dim() != p {
            return Err(Error::Dimension {
                context: "regularizer vs operator columns",
                expected: p,
                actual: self.regularizer.dim(),
            });
        }
        if self.loss.dim() != n {
            return Err(Error::Dimension {
                context: "loss vs operator rows",
                expected: n,
                actual: self.loss.dim(),
            });
        }
        let mu = self.regularizer.modulus();
        if !mu.is_finite() || mu < 0.0 || (strongly_convex && mu <= 0.0) {
            return Err(Error::Modulus(mu));
        }
        if let Regularizer::SquaredL2Box { lower, upper, .. } = &self.regularizer {
            if lower.iter().zip(upper).any(|(lo, hi)| !(lo <= hi)) {
                return Err(Error::Validation {
                    field: "box",
                    reason: "empty primal domain".into(),
                });
            }
        }
        Ok(self)
    }
}

/// One certificate row of a run, recorded at the pre-step pair `(x_{t−1}, y_{t−1})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub t: usize,
    pub rho: f64,
    /// Primal objective at `x_{t−1}`.
    pub primal_value: f64,
    /// Dual objective at `y_{t−1}`.
    pub dual_value: f64,
    /// `primal_value − dual_value`.
    pub gap: f64,
    /// Primal objective at the running average of `x_0 … x_{t−1}`.
    pub avg_primal_value: f64,
    /// Dual objective at the running average of the dual candidates.
    pub avg_dual_value: f64,
    pub avg_gap: f64,
    /// `g* − g_dual(y_t)` at the post-step dual iterate, when a reference is known.
    pub dual_suboptimality: Option<f64>,
    /// `D(x*, x_t)` at the post-step primal iterate, when a reference is known.
    pub bregman_to_ref: Option<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn svm_pieces() -> (LinearOperator, Loss) {
        let a = LinearOperator::from_rows(&[
            vec![1.0, 0.5],
            vec![-1.0, 0.2],
            vec![0.3, -1.0],
            vec![0.0, 1.0],
        ])
        .unwrap();
        let loss = Loss::hinge(vec![1.0, -1.0, 1.0, -1.0], 0.25).unwrap();
        (a, loss)
    }

    #[test]
    fn consistent_instance_passes_through() {
        let (a, loss) = svm_pieces();
        let reg = Regularizer::squared_l2(1.0, 2);
        let prob = ProblemInstance::new(a.clone(), reg.clone(), loss.clone()).unwrap();
        assert_eq!(prob.operator, a);
        assert_eq!(prob.regularizer, reg);
        assert_eq!(prob.loss, loss);
        assert_eq!((prob.n(), prob.p()), (4, 2));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let (a, loss) = svm_pieces();
        let err = ProblemInstance::new(a, Regularizer::squared_l2(1.0, 3), loss).unwrap_err();
        assert!(matches!(err, Error::Dimension { .. }));
    }

    #[test]
    fn zero_modulus_rejected_for_strongly_convex_use() {
        let (a, loss) = svm_pieces();
        let err = ProblemInstance::new(a.clone(), Regularizer::squared_l2(0.0, 2), loss.clone())
            .unwrap_err();
        assert_eq!(err, Error::Modulus(0.0));
        let relaxed = ProblemInstance {
            operator: a,
            regularizer: Regularizer::squared_l2(0.0, 2),
            loss,
        }
        .validate(false);
        assert!(relaxed.is_ok());
    }
}
