use crate::error::{check_len, Error, Result};
use crate::linalg::{dot, norm2_sq};

/// Tolerance for membership in the primal domain `K`.
pub const DOMAIN_TOL: f64 = 1e-10;

/// Entries at or below this are treated as exact zeros in `x log x`.
const ENTROPY_FLOOR: f64 = 1e-300;

/// The domain `K` of a regularizer.
#[derive(Debug, Clone, PartialEq)]
pub enum PrimalDomain {
    Whole { dim: usize },
    Box { lower: Vec<f64>, upper: Vec<f64> },
    Simplex { dim: usize },
}

impl PrimalDomain {
    pub fn dim(&self) -> usize {
        match self {
            PrimalDomain::Whole { dim } | PrimalDomain::Simplex { dim } => *dim,
            PrimalDomain::Box { lower, .. } => lower.len(),
        }
    }

    pub fn is_compact(&self) -> bool {
        !matches!(self, PrimalDomain::Whole { .. })
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.dim() || x.iter().any(|v| !v.is_finite()) {
            return false;
        }
        match self {
            PrimalDomain::Whole { .. } => true,
            PrimalDomain::Box { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(v, (lo, hi))| *v >= lo - tol && *v <= hi + tol),
            PrimalDomain::Simplex { .. } => {
                x.iter().all(|v| *v >= -tol) && (x.iter().sum::<f64>() - 1.0).abs() <= tol
            }
        }
    }

    /// Support function `σ_K(z) = max_{x∈K} ⟨x, z⟩`; `+∞` for unbounded `K`.
    pub fn support(&self, z: &[f64]) -> f64 {
        match self {
            PrimalDomain::Whole { .. } => {
                if z.iter().all(|v| *v == 0.0) {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            PrimalDomain::Box { lower, upper } => z
                .iter()
                .zip(lower.iter().zip(upper))
                .map(|(zi, (lo, hi))| (zi * lo).max(zi * hi))
                .sum(),
            PrimalDomain::Simplex { .. } => z.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

/// A μ-strongly convex regularizer `h` together with the oracles the
/// recursions and the certificates consume.
#[derive(Debug, Clone, PartialEq)]
pub enum Regularizer {
    /// `h(x) = (μ/2)‖x‖²` on all of ℝᵖ.
    SquaredL2 { mu: f64, dim: usize },
    /// `h(x) = (μ/2)‖x‖² + I_box(x)`.
    SquaredL2Box {
        mu: f64,
        lower: Vec<f64>,
        upper: Vec<f64>,
    },
    /// `h(x) = Σ xᵢ log xᵢ` on the probability simplex (μ = 1).
    NegativeEntropy { dim: usize },
}

impl Regularizer {
    pub fn squared_l2(mu: f64, dim: usize) -> Self {
        Regularizer::SquaredL2 { mu, dim }
    }

    pub fn squared_l2_box(mu: f64, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        check_len("box bounds", lower.len(), upper.len())?;
        if let Some(i) = lower
            .iter()
            .zip(&upper)
            .position(|(lo, hi)| !(lo <= hi) || !lo.is_finite() || !hi.is_finite())
        {
            return Err(Error::Validation {
                field: "box",
                reason: format!("empty or unbounded interval at coordinate {i}"),
            });
        }
        Ok(Regularizer::SquaredL2Box { mu, lower, upper })
    }

    pub fn negative_entropy(dim: usize) -> Self {
        Regularizer::NegativeEntropy { dim }
    }

    pub fn dim(&self) -> usize {
        match self {
            Regularizer::SquaredL2 { dim, .. } | Regularizer::NegativeEntropy { dim } => *dim,
            Regularizer::SquaredL2Box { lower, .. } => lower.len(),
        }
    }

    /// Strong convexity modulus μ (with respect to the Euclidean norm).
    pub fn modulus(&self) -> f64 {
        match self {
            Regularizer::SquaredL2 { mu, .. } | Regularizer::SquaredL2Box { mu, .. } => *mu,
            Regularizer::NegativeEntropy { .. } => 1.0,
        }
    }

    pub fn domain(&self) -> PrimalDomain {
        match self {
            Regularizer::SquaredL2 { dim, .. } => PrimalDomain::Whole { dim: *dim },
            Regularizer::SquaredL2Box { lower, upper, .. } => PrimalDomain::Box {
                lower: lower.clone(),
                upper: upper.clone(),
            },
            Regularizer::NegativeEntropy { dim } => PrimalDomain::Simplex { dim: *dim },
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.domain().contains(x, DOMAIN_TOL)
    }

    /// `h(x)`, `+∞` outside `K`.
    pub fn value(&self, x: &[f64]) -> f64 {
        if !self.contains(x) {
            return f64::INFINITY;
        }
        match self {
            Regularizer::SquaredL2 { mu, .. } | Regularizer::SquaredL2Box { mu, .. } => {
                0.5 * mu * norm2_sq(x)
            }
            Regularizer::NegativeEntropy { .. } => x
                .iter()
                .map(|&v| if v <= ENTROPY_FLOOR { 0.0 } else { v * v.ln() })
                .sum(),
        }
    }

    /// `h*(z) = max_x ⟨x, z⟩ − h(x)`.
    pub fn conj_value(&self, z: &[f64]) -> f64 {
        match self {
            Regularizer::SquaredL2 { mu, .. } => norm2_sq(z) / (2.0 * mu),
            Regularizer::SquaredL2Box { mu, .. } => {
                let x = self.conj_grad(z);
                dot(&x, z) - 0.5 * mu * norm2_sq(&x)
            }
            Regularizer::NegativeEntropy { .. } => log_sum_exp(z),
        }
    }

    /// `(h*)'(z)`, the unique maximizer of `⟨x, z⟩ − h(x)`; always lands in `K`.
    pub fn conj_grad(&self, z: &[f64]) -> Vec<f64> {
        match self {
            Regularizer::SquaredL2 { mu, .. } => z.iter().map(|v| v / mu).collect(),
            Regularizer::SquaredL2Box { mu, lower, upper } => z
                .iter()
                .zip(lower.iter().zip(upper))
                .map(|(v, (lo, hi))| (v / mu).clamp(*lo, *hi))
                .collect(),
            Regularizer::NegativeEntropy { .. } => softmax(z),
        }
    }

    /// An element of `∂h(x)`. For the box this is `μx`, the gradient of the
    /// smooth part; boundary handling belongs to the carried-subgradient rule.
    pub fn subgradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len("h subgradient", self.dim(), x.len())?;
        if !self.contains(x) {
            return Err(Error::Domain("h subgradient requested outside K".into()));
        }
        match self {
            Regularizer::SquaredL2 { mu, .. } | Regularizer::SquaredL2Box { mu, .. } => {
                Ok(x.iter().map(|v| mu * v).collect())
            }
            Regularizer::NegativeEntropy { .. } => {
                if let Some(i) = x.iter().position(|v| *v <= 0.0) {
                    return Err(Error::Domain(format!(
                        "entropy subgradient undefined at boundary coordinate {i}"
                    )));
                }
                Ok(x.iter().map(|v| v.ln() + 1.0).collect())
            }
        }
    }

    /// Bregman divergence `D(x1, x2) = h(x1) − h(x2) − ⟨x1 − x2, h'(x2)⟩`.
    pub fn bregman(&self, x1: &[f64], x2: &[f64]) -> Result<f64> {
        check_len("bregman", self.dim(), x1.len())?;
        check_len("bregman", self.dim(), x2.len())?;
        if !self.contains(x2) {
            return Err(Error::Domain("bregman base point outside K".into()));
        }
        if !self.contains(x1) {
            return Ok(f64::INFINITY);
        }
        match self {
            Regularizer::SquaredL2 { mu, .. } | Regularizer::SquaredL2Box { mu, .. } => {
                let d: f64 = x1.iter().zip(x2).map(|(a, b)| (a - b) * (a - b)).sum();
                Ok(0.5 * mu * d)
            }
            Regularizer::NegativeEntropy { .. } => {
                if x2.iter().any(|v| *v <= 0.0) {
                    return Err(Error::Domain(
                        "entropy bregman needs an interior base point".into(),
                    ));
                }
                // KL(x1 ‖ x2) plus the mass mismatch, which vanishes on the simplex.
                let kl: f64 = x1
                    .iter()
                    .zip(x2)
                    .map(|(&a, &b)| {
                        let t = if a <= ENTROPY_FLOOR { 0.0 } else { a * (a / b).ln() };
                        t - a + b
                    })
                    .sum();
                Ok(kl.max(0.0))
            }
        }
    }

    /// Bregman-proximal step `argmin_{x∈K} (1/ρ)D(x, x_prev) + ⟨x, g⟩`
    /// in closed form; only defined for compact domains.
    pub fn prox_step(&self, x_prev: &[f64], g: &[f64], rho: f64) -> Result<Vec<f64>> {
        check_len("bregman prox", self.dim(), x_prev.len())?;
        check_len("bregman prox", self.dim(), g.len())?;
        match self {
            Regularizer::SquaredL2Box { mu, lower, upper } => Ok(x_prev
                .iter()
                .zip(g)
                .zip(lower.iter().zip(upper))
                .map(|((x, gi), (lo, hi))| (x - rho / mu * gi).clamp(*lo, *hi))
                .collect()),
            Regularizer::NegativeEntropy { .. } => {
                if x_prev.iter().any(|v| *v <= 0.0) {
                    return Err(Error::Domain(
                        "multiplicative update needs an interior iterate".into(),
                    ));
                }
                let logits: Vec<f64> = x_prev
                    .iter()
                    .zip(g)
                    .map(|(x, gi)| x.ln() - rho * gi)
                    .collect();
                Ok(softmax(&logits))
            }
            Regularizer::SquaredL2 { .. } => Err(Error::Config(
                "non-strongly-convex mirror descent needs a compact domain (box or simplex)"
                    .into(),
            )),
        }
    }
}

pub(crate) fn log_sum_exp(z: &[f64]) -> f64 {
    let m = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + z.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

pub(crate) fn softmax(z: &[f64]) -> Vec<f64> {
    let m = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = z.iter().map(|v| (v - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}
