use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::{DualDomain, Loss, PrimalDomain, Regularizer};
use crate::linalg::{norm2_sq, LinearOperator};

/// Largest `n` for which `R²` is computed by vertex enumeration.
pub const EXACT_VERTEX_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum R2Kind {
    /// `max_{y,y'∈C} ‖Aᵀ(y − y')‖² = diam(AᵀC)²`.
    Diameter,
    /// `max_{y∈C} ‖Aᵀy‖²`.
    Origin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComputationMode {
    ExactVertex,
    ColumnNormBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct R2Estimate {
    pub value: f64,
    pub mode: ComputationMode,
}

/// The constants the convergence bounds are stated in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryConstants {
    pub r2_primal: f64,
    pub r2_origin: f64,
    /// Bound on `D(x, x0)` over `K`; only for compact domains.
    pub delta2: Option<f64>,
    pub mode: ComputationMode,
}

impl GeometryConstants {
    pub fn compute(loss: &Loss, op: &LinearOperator, reg: &Regularizer, x0: Option<&[f64]>) -> Result<Self> {
        let diameter = estimate_r2(loss, op, R2Kind::Diameter)?;
        let origin = estimate_r2(loss, op, R2Kind::Origin)?;
        let delta2 = match x0 {
            Some(x0) if reg.domain().is_compact() => Some(domain_radius_delta2(reg, x0)?),
            _ => None,
        };
        Ok(Self {
            r2_primal: diameter.value,
            r2_origin: origin.value,
            delta2,
            mode: diameter.mode,
        })
    }
}

/// `R²` for the dual domain of `loss` mapped through `Aᵀ`.
///
/// Boxes with `n ≤ 20` are enumerated exactly; larger boxes use
/// `(Σᵢ wᵢ‖aᵢ‖)²` where `aᵢ` is row `i` of `A`. The ℓ1-ball is exact.
pub fn estimate_r2(loss: &Loss, op: &LinearOperator, which: R2Kind) -> Result<R2Estimate> {
    if loss.dim() != op.rows() {
        return Err(Error::Dimension {
            context: "estimate_r2",
            expected: op.rows(),
            actual: loss.dim(),
        });
    }
    let norms = op.row_norms();
    match loss.dual_domain() {
        DualDomain::L1Ball { radius, .. } => {
            let m = norms.iter().copied().fold(0.0, f64::max);
            let value = match which {
                R2Kind::Diameter => (2.0 * radius * m).powi(2),
                R2Kind::Origin => (radius * m).powi(2),
            };
            Ok(R2Estimate {
                value,
                mode: ComputationMode::ExactVertex,
            })
        }
        DualDomain::Intervals { lower, upper } => {
            // Both forms are a max of ‖Aᵀv‖² over the vertices of a box {v : vᵢ ∈ {lᵢ, uᵢ}}.
            let (lo, hi): (Vec<f64>, Vec<f64>) = match which {
                R2Kind::Diameter => lower
                    .iter()
                    .zip(&upper)
                    .map(|(l, u)| (-(u - l), u - l))
                    .unzip(),
                R2Kind::Origin => (lower, upper),
            };
            if lo.len() <= EXACT_VERTEX_LIMIT {
                Ok(R2Estimate {
                    value: max_over_box_vertices(op, &lo, &hi),
                    mode: ComputationMode::ExactVertex,
                })
            } else {
                let s: f64 = lo
                    .iter()
                    .zip(&hi)
                    .zip(norms)
                    .map(|((l, u), r)| l.abs().max(u.abs()) * r)
                    .sum();
                Ok(R2Estimate {
                    value: s * s,
                    mode: ComputationMode::ColumnNormBound,
                })
            }
        }
    }
}

/// `max ‖Aᵀv‖²` over the `2ⁿ` vertices of `Π [loᵢ, hiᵢ]`, walked in Gray-code order.
fn max_over_box_vertices(op: &LinearOperator, lo: &[f64], hi: &[f64]) -> f64 {
    let n = lo.len();
    let p = op.cols();
    let fresh = |mask: u64| -> Vec<f64> {
        let v: Vec<f64> = (0..n)
            .map(|i| if mask >> i & 1 == 1 { hi[i] } else { lo[i] })
            .collect();
        op.adjoint_apply(&v).expect("vertex has length n")
    };
    let mut w = fresh(0);
    let mut best = norm2_sq(&w);
    let total: u64 = 1 << n;
    for k in 1..total {
        let gray = k ^ (k >> 1);
        if k % 4096 == 0 {
            // resynchronise to keep the incremental sums exact to round-off
            w = fresh(gray);
        } else {
            let i = (k.trailing_zeros()) as usize;
            let row = op.row(i);
            let delta = if gray >> i & 1 == 1 { hi[i] - lo[i] } else { lo[i] - hi[i] };
            for j in 0..p {
                w[j] += delta * row[j];
            }
        }
        best = best.max(norm2_sq(&w));
    }
    best
}

/// `δ²`: a bound on `D(x, x0)` over `x ∈ K`.
///
/// Entropy: `max_i −log x0_i` (equal to `log p` at the uniform point).
/// Box: `(μ/2)·diam(K)²`, valid for every base point.
pub fn domain_radius_delta2(reg: &Regularizer, x0: &[f64]) -> Result<f64> {
    if x0.len() != reg.dim() {
        return Err(Error::Dimension {
            context: "domain_radius_delta2",
            expected: reg.dim(),
            actual: x0.len(),
        });
    }
    match reg.domain() {
        PrimalDomain::Whole { .. } => Err(Error::Config(
            "δ² needs a compact domain (box or simplex)".into(),
        )),
        PrimalDomain::Simplex { .. } => {
            if !reg.contains(x0) {
                return Err(Error::Config("base point is not on the simplex".into()));
            }
            if x0.iter().any(|v| *v <= 0.0) {
                return Err(Error::Config(
                    "base point must lie in the interior of the simplex".into(),
                ));
            }
            Ok(x0.iter().map(|v| -v.ln()).fold(f64::NEG_INFINITY, f64::max))
        }
        PrimalDomain::Box { lower, upper } => {
            if !reg.contains(x0) {
                return Err(Error::Config("base point is outside the box".into()));
            }
            let diam2: f64 = lower.iter().zip(&upper).map(|(l, u)| (u - l).powi(2)).sum();
            Ok(0.5 * reg.modulus() * diam2)
        }
    }
}
