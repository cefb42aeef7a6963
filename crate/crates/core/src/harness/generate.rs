use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::{Loss, Regularizer};
use crate::linalg::LinearOperator;
use crate::problem::ProblemInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossKind {
    Svm,
    Lad,
    Logistic,
    Gauge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegularizerKind {
    SquaredL2,
    SquaredL2Box,
    Entropy,
}

/// What to generate. `scale = None` means `1` (an unweighted sum of losses).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub loss: LossKind,
    pub regularizer: RegularizerKind,
    pub n: usize,
    pub p: usize,
    pub mu: f64,
    pub scale: Option<f64>,
    /// Half-width of the box `[−r, r]^p`.
    pub box_radius: f64,
    pub gauge_radius: f64,
    pub gauge_penalty: f64,
    pub outlier_fraction: f64,
}

impl GeneratorSpec {
    pub fn new(loss: LossKind, regularizer: RegularizerKind, n: usize, p: usize) -> Self {
        Self {
            loss,
            regularizer,
            n,
            p,
            mu: 1.0,
            scale: None,
            box_radius: 1.0,
            gauge_radius: 1.0,
            gauge_penalty: 0.1,
            outlier_fraction: 0.1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, why: &str| Err(Error::Config(format!("{field}: {why}")));
        if self.n == 0 || self.p == 0 {
            return bad("n, p", "must be at least 1");
        }
        if !(self.mu.is_finite() && self.mu > 0.0) {
            return bad("mu", "must be positive and finite");
        }
        if let Some(s) = self.scale {
            if !(s.is_finite() && s > 0.0) {
                return bad("scale", "must be positive and finite");
            }
        }
        if !(self.box_radius.is_finite() && self.box_radius > 0.0) {
            return bad("box_radius", "must be positive and finite");
        }
        if !(self.gauge_radius.is_finite() && self.gauge_radius > 0.0) {
            return bad("gauge_radius", "must be positive and finite");
        }
        if !(self.gauge_penalty.is_finite() && self.gauge_penalty >= 0.0) {
            return bad("gauge_penalty", "must be non-negative and finite");
        }
        if !(0.0..=1.0).contains(&self.outlier_fraction) {
            return bad("outlier_fraction", "must lie in [0, 1]");
        }
        Ok(())
    }
}

/// A generated instance with the ground truth used to build it.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedProblem {
    pub problem: ProblemInstance,
    /// Planted coefficients (least absolute deviation only).
    pub x_true: Option<Vec<f64>>,
    /// Rows whose target carries an outlier.
    pub outliers: Vec<usize>,
}

pub fn generate_problem(spec: &GeneratorSpec, seed: u64) -> Result<ProblemInstance> {
    Ok(generate(spec, seed)?.problem)
}

/// Deterministic synthetic instance. Rows are divided by `√n` so that
/// column norms are of order one.
pub fn generate(spec: &GeneratorSpec, seed: u64) -> Result<GeneratedProblem> {
    spec.validate()?;
    let (n, p) = (spec.n, spec.p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let row_scale = 1.0 / (n as f64).sqrt();
    let scale = spec.scale.unwrap_or(1.0);
    let gauss = |rng: &mut ChaCha8Rng| -> f64 { rng.sample(StandardNormal) };

    let mut data = Vec::with_capacity(n * p);
    let mut x_true = None;
    let mut outliers = Vec::new();
    let loss = match spec.loss {
        LossKind::Svm | LossKind::Logistic => {
            let shift = 0.5 / (p as f64).sqrt();
            let mut labels = Vec::with_capacity(n);
            for _ in 0..n {
                let b = if rng.random::<bool>() { 1.0 } else { -1.0 };
                labels.push(b);
                for _ in 0..p {
                    data.push((b * shift + gauss(&mut rng)) * row_scale);
                }
            }
            if spec.loss == LossKind::Svm {
                Loss::hinge(labels, scale)?
            } else {
                Loss::logistic(labels, scale)?
            }
        }
        LossKind::Lad => {
            for _ in 0..n * p {
                data.push(gauss(&mut rng) * row_scale);
            }
            let truth: Vec<f64> = match spec.regularizer {
                RegularizerKind::Entropy => {
                    let w: Vec<f64> = (0..p).map(|_| rng.random::<f64>() + 1e-3).collect();
                    let s: f64 = w.iter().sum();
                    w.into_iter().map(|v| v / s).collect()
                }
                RegularizerKind::SquaredL2Box => (0..p)
                    .map(|_| spec.box_radius * (2.0 * rng.random::<f64>() - 1.0))
                    .collect(),
                RegularizerKind::SquaredL2 => (0..p).map(|_| gauss(&mut rng)).collect(),
            };
            let mut targets: Vec<f64> = data
                .chunks(p)
                .map(|row| row.iter().zip(&truth).map(|(a, x)| a * x).sum())
                .collect();
            for (i, c) in targets.iter_mut().enumerate() {
                if rng.random::<f64>() < spec.outlier_fraction {
                    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                    *c += sign * (1.0 + 4.0 * rng.random::<f64>());
                    outliers.push(i);
                }
            }
            x_true = Some(truth);
            Loss::least_absolute_deviation(targets, scale)?
        }
        LossKind::Gauge => {
            for _ in 0..n * p {
                data.push(gauss(&mut rng) * row_scale);
            }
            Loss::dual_norm_gauge(n, spec.gauge_radius, spec.gauge_penalty)?
        }
    };
    let regularizer = match spec.regularizer {
        RegularizerKind::SquaredL2 => Regularizer::squared_l2(spec.mu, p),
        RegularizerKind::SquaredL2Box => Regularizer::squared_l2_box(
            spec.mu,
            vec![-spec.box_radius; p],
            vec![spec.box_radius; p],
        )?,
        RegularizerKind::Entropy => Regularizer::negative_entropy(p),
    };
    let problem = ProblemInstance::new(LinearOperator::new(n, p, data)?, regularizer, loss)?;
    Ok(GeneratedProblem {
        problem,
        x_true,
        outliers,
    })
}
