use crate::error::{check_len, Error, Result};
use crate::linalg::{dot, norm1};

/// Tolerance for membership in the dual domain `C`.
pub const DUAL_TOL: f64 = 1e-10;

/// The (closure of the) domain `C` of `f*`.
#[derive(Debug, Clone, PartialEq)]
pub enum DualDomain {
    /// Product of closed intervals `[lo_i, hi_i]`.
    Intervals { lower: Vec<f64>, upper: Vec<f64> },
    /// `{ y : ‖y‖₁ ≤ radius }`.
    L1Ball { dim: usize, radius: f64 },
}

impl DualDomain {
    pub fn dim(&self) -> usize {
        match self {
            DualDomain::Intervals { lower, .. } => lower.len(),
            DualDomain::L1Ball { dim, .. } => *dim,
        }
    }

    pub fn contains(&self, y: &[f64], tol: f64) -> bool {
        if y.len() != self.dim() || y.iter().any(|v| !v.is_finite()) {
            return false;
        }
        match self {
            DualDomain::Intervals { lower, upper } => y
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(v, (lo, hi))| *v >= lo - tol && *v <= hi + tol),
            DualDomain::L1Ball { radius, .. } => norm1(y) <= radius + tol * (1.0 + radius),
        }
    }

    /// `sup_{y∈C} ‖y‖`, the Lipschitz constant of `f`.
    pub fn max_norm(&self) -> f64 {
        match self {
            DualDomain::Intervals { lower, upper } => lower
                .iter()
                .zip(upper)
                .map(|(lo, hi)| lo.abs().max(hi.abs()).powi(2))
                .sum::<f64>()
                .sqrt(),
            DualDomain::L1Ball { radius, .. } => *radius,
        }
    }
}

/// A Lipschitz loss `f` given through its conjugate on a bounded domain `C`.
///
/// The separable losses are `f(z) = s·Σ ℓᵢ(zᵢ)` with scale `s > 0`; their
/// conjugate is `s·Σ ℓᵢ*(yᵢ/s)` and `C` is scaled by `s`.
#[derive(Debug, Clone, PartialEq)]
pub enum Loss {
    /// `ℓᵢ(z) = max(1 − bᵢz, 0)`, `bᵢ ∈ {−1, 1}`.
    Hinge { labels: Vec<f64>, scale: f64 },
    /// `ℓᵢ(z) = |z − cᵢ|`.
    LeastAbsoluteDeviation { targets: Vec<f64>, scale: f64 },
    /// `ℓᵢ(z) = log(1 + exp(−bᵢz))`, `bᵢ ∈ {−1, 1}`.
    Logistic { labels: Vec<f64>, scale: f64 },
    /// `f(z) = ω0·max(‖z‖∞ − λ, 0)`, whose conjugate is
    /// `λ‖y‖₁ + I{‖y‖₁ ≤ ω0}`.
    DualNormGauge {
        dim: usize,
        radius: f64,
        penalty: f64,
    },
}

fn check_labels(labels: &[f64]) -> Result<()> {
    if let Some(i) = labels.iter().position(|b| *b != 1.0 && *b != -1.0) {
        return Err(Error::Validation {
            field: "labels",
            reason: format!("label {i} is {} (expected ±1)", labels[i]),
        });
    }
    Ok(())
}

fn check_scale(scale: f64) -> Result<()> {
    if scale > 0.0 && scale.is_finite() {
        Ok(())
    } else {
        Err(Error::Validation {
            field: "scale",
            reason: format!("must be positive and finite, got {scale}"),
        })
    }
}

fn check_nonempty(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::Validation {
            field: "loss",
            reason: "no data points".into(),
        })
    } else {
        Ok(())
    }
}

impl Loss {
    pub fn hinge(labels: Vec<f64>, scale: f64) -> Result<Self> {
        check_nonempty(labels.len())?;
        check_labels(&labels)?;
        check_scale(scale)?;
        Ok(Loss::Hinge { labels, scale })
    }

    pub fn least_absolute_deviation(targets: Vec<f64>, scale: f64) -> Result<Self> {
        check_nonempty(targets.len())?;
        check_scale(scale)?;
        if targets.iter().any(|t| !t.is_finite()) {
            return Err(Error::Validation {
                field: "targets",
                reason: "non-finite target".into(),
            });
        }
        Ok(Loss::LeastAbsoluteDeviation { targets, scale })
    }

    pub fn logistic(labels: Vec<f64>, scale: f64) -> Result<Self> {
        check_nonempty(labels.len())?;
        check_labels(&labels)?;
        check_scale(scale)?;
        Ok(Loss::Logistic { labels, scale })
    }

    pub fn dual_norm_gauge(dim: usize, radius: f64, penalty: f64) -> Result<Self> {
        check_nonempty(dim)?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Validation {
                field: "gauge_radius",
                reason: format!("must be positive and finite, got {radius}"),
            });
        }
        if !(penalty >= 0.0 && penalty.is_finite()) {
            return Err(Error::Validation {
                field: "gauge_penalty",
                reason: format!("must be nonnegative, got {penalty}"),
            });
        }
        Ok(Loss::DualNormGauge {
            dim,
            radius,
            penalty,
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Loss::Hinge { labels, .. } | Loss::Logistic { labels, .. } => labels.len(),
            Loss::LeastAbsoluteDeviation { targets, .. } => targets.len(),
            Loss::DualNormGauge { dim, .. } => *dim,
        }
    }

    /// Same loss with scale `s` replaced; the gauge loss has no scale.
    pub fn with_scale(&self, scale: f64) -> Self {
        let mut out = self.clone();
        match &mut out {
            Loss::Hinge { scale: s, .. }
            | Loss::LeastAbsoluteDeviation { scale: s, .. }
            | Loss::Logistic { scale: s, .. } => *s = scale,
            Loss::DualNormGauge { .. } => {}
        }
        out
    }

    pub fn dual_domain(&self) -> DualDomain {
        match self {
            Loss::Hinge { labels, scale } | Loss::Logistic { labels, scale } => {
                // yᵢ ∈ −bᵢ·[0, s]
                let (lower, upper) = labels
                    .iter()
                    .map(|b| if *b > 0.0 { (-scale, 0.0) } else { (0.0, *scale) })
                    .unzip();
                DualDomain::Intervals { lower, upper }
            }
            Loss::LeastAbsoluteDeviation { targets, scale } => DualDomain::Intervals {
                lower: vec![-scale; targets.len()],
                upper: vec![*scale; targets.len()],
            },
            Loss::DualNormGauge { dim, radius, .. } => DualDomain::L1Ball {
                dim: *dim,
                radius: *radius,
            },
        }
    }

    /// Lipschitz constant `B = sup_{y∈C} ‖y‖`.
    pub fn lipschitz(&self) -> f64 {
        self.dual_domain().max_norm()
    }

    /// `f(z)`.
    pub fn value(&self, z: &[f64]) -> f64 {
        match self {
            Loss::Hinge { labels, scale } => {
                scale
                    * labels
                        .iter()
                        .zip(z)
                        .map(|(b, zi)| (1.0 - b * zi).max(0.0))
                        .sum::<f64>()
            }
            Loss::LeastAbsoluteDeviation { targets, scale } => {
                scale * targets.iter().zip(z).map(|(c, zi)| (zi - c).abs()).sum::<f64>()
            }
            Loss::Logistic { labels, scale } => {
                scale
                    * labels
                        .iter()
                        .zip(z)
                        .map(|(b, zi)| softplus(-b * zi))
                        .sum::<f64>()
            }
            Loss::DualNormGauge {
                radius, penalty, ..
            } => {
                let m = z.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                radius * (m - penalty).max(0.0)
            }
        }
    }

    /// `f*(y)`, `+∞` outside the closure of `C`.
    pub fn conj_value(&self, y: &[f64]) -> f64 {
        if y.len() != self.dim() || !self.dual_domain().contains(y, DUAL_TOL) {
            return f64::INFINITY;
        }
        match self {
            // ℓ*(α) = −|α| on α·b ∈ [−1, 0]; scaled: s·(−|y|/s) = −|y|
            Loss::Hinge { .. } => -norm1(y),
            // ℓ*(α) = α·c on [−1, 1]; scaled: y·c
            Loss::LeastAbsoluteDeviation { targets, .. } => dot(y, targets),
            // ℓ*(α) = β log β + (1 − β) log(1 − β) with β = −bα ∈ [0, 1]
            Loss::Logistic { labels, scale } => {
                scale
                    * labels
                        .iter()
                        .zip(y)
                        .map(|(b, yi)| binary_neg_entropy((-b * yi / scale).clamp(0.0, 1.0)))
                        .sum::<f64>()
            }
            Loss::DualNormGauge { penalty, .. } => penalty * norm1(y),
        }
    }

    /// A deterministic maximizer of `⟨y, z⟩ − f*(y)` over `C`, i.e. an
    /// element of `∂f(z)`.
    ///
    /// Ties: the hinge kink returns the margin-active extreme, the LAD kink
    /// returns 0, the gauge picks the lowest index attaining `‖z‖∞`.
    pub fn subgradient(&self, z: &[f64]) -> Result<Vec<f64>> {
        check_len("f subgradient", self.dim(), z.len())?;
        Ok(match self {
            Loss::Hinge { labels, scale } => labels
                .iter()
                .zip(z)
                .map(|(b, zi)| if 1.0 - b * zi >= 0.0 { -b * scale } else { 0.0 })
                .collect(),
            Loss::LeastAbsoluteDeviation { targets, scale } => targets
                .iter()
                .zip(z)
                .map(|(c, zi)| {
                    let r = zi - c;
                    if r > 0.0 {
                        *scale
                    } else if r < 0.0 {
                        -scale
                    } else {
                        0.0
                    }
                })
                .collect(),
            Loss::Logistic { labels, scale } => labels
                .iter()
                .zip(z)
                .map(|(b, zi)| -b * scale * sigmoid(-b * zi))
                .collect(),
            Loss::DualNormGauge {
                dim,
                radius,
                penalty,
            } => {
                let mut out = vec![0.0; *dim];
                let (best, m) = z
                    .iter()
                    .enumerate()
                    .fold((0usize, f64::NEG_INFINITY), |(bi, bm), (i, v)| {
                        if v.abs() > bm {
                            (i, v.abs())
                        } else {
                            (bi, bm)
                        }
                    });
                if m > *penalty {
                    out[best] = radius * z[best].signum();
                }
                out
            }
        })
    }

}

fn softplus(u: f64) -> f64 {
    u.max(0.0) + (-u.abs()).exp().ln_1p()
}

fn sigmoid(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

fn binary_neg_entropy(beta: f64) -> f64 {
    let xlx = |v: f64| if v <= 0.0 { 0.0 } else { v * v.ln() };
    xlx(beta) + xlx(1.0 - beta)
}
