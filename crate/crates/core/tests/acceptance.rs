//! End-to-end acceptance checks. Each criterion prints one pass/fail line;
//! the test fails if any criterion fails.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pdcg::algorithms::{
    gcg_step, md_step, run, Algorithm, Init, SolverState, StepSchedule, StopRule,
};
use pdcg::certificates::{check_bound, GeometryConstants, Proposition};
use pdcg::equivalence::{lockstep, verify_equivalence};
use pdcg::functions::{Loss, Regularizer};
use pdcg::harness::{
    generate_problem, reference_solution, GeneratorSpec, LossKind, RegularizerKind,
};
use pdcg::linalg::{dot, max_abs_diff, norm1, norm2_sq, LinearOperator};
use pdcg::ProblemInstance;

const SUBOPT_SLACK: f64 = 1e-8;

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(id: usize, title: &str, elapsed: Duration, outcome: &Outcome) {
    let mut err = std::io::stderr().lock();
    let _ = writeln!(
        err,
        "[criterion {id:>2}] {} {title} ({:.2}s): {}",
        if outcome.pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        outcome.detail
    );
}

fn geometry(problem: &ProblemInstance, x0: Option<&[f64]>) -> GeometryConstants {
    GeometryConstants::compute(&problem.loss, &problem.operator, &problem.regularizer, x0).unwrap()
}

/// The 20 small instances shared by criteria 2, 3, 4 and 9.
fn bound_instances() -> Vec<(String, ProblemInstance)> {
    let losses = [LossKind::Svm, LossKind::Lad, LossKind::Logistic];
    let regs = [RegularizerKind::SquaredL2, RegularizerKind::Entropy];
    let mut out = Vec::new();
    for k in 0..20u64 {
        let loss = losses[k as usize % 3];
        let reg = regs[(k as usize / 3) % 2];
        let n = 8 + (k as usize * 5) % 13;
        let p = 3 + (k as usize * 3) % 8;
        let mut spec = GeneratorSpec::new(loss, reg, n, p);
        spec.mu = [0.5, 1.0, 2.0][k as usize % 3];
        let label = format!("{loss:?}/{reg:?} n={n} p={p} seed={}", 100 + k);
        out.push((label, generate_problem(&spec, 100 + k).unwrap()));
    }
    out
}

fn criterion_1() -> Outcome {
    let spec = GeneratorSpec::new(LossKind::Svm, RegularizerKind::SquaredL2, 100, 20);
    let problem = generate_problem(&spec, 7).unwrap();
    let geo = geometry(&problem, None);
    let y0 = vec![0.0; 100];
    let mut worst: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    let mut pass = true;
    for schedule in [
        StepSchedule::TwoOverTPlusOne,
        StepSchedule::OneOverT,
        StepSchedule::LineSearch {
            mu: 1.0,
            r2: geo.r2_primal,
        },
    ] {
        let start = Instant::now();
        let rep = verify_equivalence(&problem, &y0, schedule, 300, 1e-9).unwrap();
        let took = start.elapsed();
        slowest = slowest.max(took);
        worst = worst.max(rep.max_x_deviation).max(rep.max_dual_identity_deviation);
        pass &= rep.pass && took < Duration::from_secs(1);
    }
    Outcome {
        pass,
        detail: format!(
            "max deviation {worst:.2e} (tol 1e-9), slowest schedule {:.3}s",
            slowest.as_secs_f64()
        ),
    }
}

struct BoundSummary {
    pass: bool,
    failures: Vec<String>,
    tightest: f64,
}

impl BoundSummary {
    fn new() -> Self {
        Self {
            pass: true,
            failures: vec![],
            tightest: f64::INFINITY,
        }
    }

    fn detail(&self, what: &str) -> String {
        if self.failures.is_empty() {
            format!("{what}; smallest bound/observed ratio {:.3}", self.tightest)
        } else {
            format!("{what}; failures: {}", self.failures.join("; "))
        }
    }
}

/// Runs `algorithm` with `schedule` on every instance and checks `props`.
fn bound_criterion(
    instances: &[(String, ProblemInstance)],
    algorithm: Algorithm,
    schedule_for: impl Fn(&ProblemInstance, &GeometryConstants) -> StepSchedule,
    props: &[Proposition],
) -> BoundSummary {
    let mut summary = BoundSummary::new();
    for (label, problem) in instances {
        let geo = geometry(problem, None);
        let mu = problem.regularizer.modulus();
        let reference = reference_solution(problem, 1e-9, 1_000_000).unwrap();
        if !reference.certified {
            summary.pass = false;
            summary
                .failures
                .push(format!("{label}: reference gap {:.2e}", reference.certified_gap));
            continue;
        }
        let r = reference.reference();
        let result = run(
            problem,
            algorithm,
            schedule_for(problem, &geo),
            &Init::default_for(problem),
            StopRule::iterations(1000),
            Some(&r),
        )
        .unwrap();
        for &prop in props {
            let slack = if prop.needs_reference() { SUBOPT_SLACK } else { 0.0 };
            let rep = check_bound(&result, &geo, mu, prop, Some((&r, slack))).unwrap();
            for (o, b) in rep.observed.iter().zip(&rep.bounds) {
                if *o > 0.0 {
                    summary.tightest = summary.tightest.min(b / o);
                }
            }
            if !rep.pass {
                summary.pass = false;
                let i = rep.worst_iteration.unwrap();
                summary.failures.push(format!(
                    "{label}: {} at t={i}: observed {:.4e} > bound {:.4e}",
                    prop.name(),
                    rep.observed[i - 1],
                    rep.bounds[i - 1]
                ));
            }
        }
    }
    summary
}

/// Checks the line-search gap bound from `t = 1` instead of `t = 2`. This
/// needs `gap(x_0, y_0) ≤ R²/(2μ)`, which the start does not guarantee;
/// reported for information only.
fn literal_line_search_gap_violations(instances: &[(String, ProblemInstance)]) -> String {
    let mut violated = 0;
    let mut at = std::collections::BTreeSet::new();
    for (_, problem) in instances {
        let geo = geometry(problem, None);
        let mu = problem.regularizer.modulus();
        let result = run(
            problem,
            Algorithm::ConditionalGradient,
            StepSchedule::LineSearch {
                mu,
                r2: geo.r2_primal,
            },
            &Init::default_for(problem),
            StopRule::iterations(1000),
            None,
        )
        .unwrap();
        let mut best = f64::INFINITY;
        let mut hit = false;
        for r in &result.trace {
            best = best.min(r.gap);
            if best > 2.0 * geo.r2_primal / (mu * (r.t as f64 + 3.0)) {
                hit = true;
                at.insert(r.t);
            }
        }
        violated += hit as usize;
    }
    if violated == 0 {
        "holds on every instance".into()
    } else {
        format!("violated on {violated}/20 instances, at t ∈ {at:?}")
    }
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_ratio: f64 = 0.0;
    let mut pass = true;
    for family in 0..100 {
        let a = 0.1 + 10.0 * rng.random::<f64>();
        let adaptive = family % 2 == 1;
        let mut u = 2.0 * a * rng.random::<f64>();
        for t in 1..=1000usize {
            // v_{t−1} ∈ [u_{t−1}, largest value keeping the right-hand side ≥ 0]
            let v_max = if adaptive {
                if u >= a / 2.0 {
                    u + a / 2.0
                } else {
                    (2.0 * a * u).sqrt()
                }
            } else {
                let rho = 2.0 / (t as f64 + 1.0);
                (u + a * rho * rho / 2.0) / rho
            };
            let v = match rng.random_range(0..4) {
                0 => u,
                1 => v_max,
                _ => u + (v_max - u) * rng.random::<f64>(),
            };
            let rho = if adaptive {
                (v / a).min(1.0)
            } else {
                2.0 / (t as f64 + 1.0)
            };
            let rhs = (u - rho * v + a * rho * rho / 2.0).max(0.0);
            u = if rng.random::<bool>() {
                rhs
            } else {
                rhs * rng.random::<f64>()
            };
            let bound = if adaptive {
                2.0 * a / (t as f64 + 3.0)
            } else {
                2.0 * a / (t as f64 + 1.0)
            };
            worst_ratio = worst_ratio.max(u / bound);
            if u > bound * (1.0 + 1e-12) {
                pass = false;
            }
        }
    }
    Outcome {
        pass,
        detail: format!("100 families, 1000 steps each; max u_t/bound = {worst_ratio:.4}"),
    }
}

fn grid_sup_1d(f: impl Fn(f64) -> f64, y: f64, lo: f64, hi: f64, step: f64) -> f64 {
    let k = ((hi - lo) / step).round() as usize;
    (0..=k)
        .map(|i| {
            let z = lo + i as f64 * step;
            y * z - f(z)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Grid supremum at resolution `step` on `[−half, half]²`. The concave
/// objective is located on grids of spacing 0.1 and 0.01 first, each
/// searched on a window of two coarser cells around the previous maximizer.
/// Missing the true maximizer can only lower the result.
fn grid_sup_2d(f: impl Fn(f64, f64) -> f64, y: [f64; 2], half: f64, step: f64) -> f64 {
    let obj = |a: f64, b: f64| y[0] * a + y[1] * b - f(a, b);
    let search = |center: (f64, f64), w: f64, h: f64| {
        let m = (2.0 * w / h).round() as i64;
        let mut best = (center.0, center.1, f64::NEG_INFINITY);
        for i in 0..=m {
            for j in 0..=m {
                let (a, b) = (center.0 - w + i as f64 * h, center.1 - w + j as f64 * h);
                if a.abs() > half + 1e-12 || b.abs() > half + 1e-12 {
                    continue;
                }
                let v = obj(a, b);
                if v > best.2 {
                    best = (a, b, v);
                }
            }
        }
        best
    };
    let (a, b, _) = search((0.0, 0.0), half, 0.1);
    let (a, b, _) = search((a, b), 0.2, 0.01);
    search((a, b), 0.02, step).2
}

/// Rounds to the 1e-3 grid used by the brute-force conjugate checks, so
/// that kinks of the generated functions are grid points.
fn on_grid(v: f64) -> f64 {
    (v * 1e3).round() / 1e3
}

fn random_loss(rng: &mut ChaCha8Rng, kind: usize, n: usize) -> Loss {
    let labels: Vec<f64> = (0..n)
        .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
        .collect();
    let scale = 0.2 + 0.8 * rng.random::<f64>();
    match kind {
        0 => Loss::hinge(labels, scale).unwrap(),
        1 => Loss::least_absolute_deviation(
            (0..n).map(|_| on_grid(2.0 * rng.random::<f64>() - 1.0)).collect(),
            scale,
        )
        .unwrap(),
        2 => Loss::logistic(labels, scale).unwrap(),
        _ => Loss::dual_norm_gauge(n, 0.5 + rng.random::<f64>(), on_grid(0.5 * rng.random::<f64>()))
            .unwrap(),
    }
}

/// A point of `C` away from where the supremum escapes to infinity.
fn interior_dual_point(rng: &mut ChaCha8Rng, loss: &Loss) -> Vec<f64> {
    match loss {
        Loss::Hinge { labels, scale } => labels
            .iter()
            .map(|b| -b * scale * rng.random::<f64>())
            .collect(),
        Loss::Logistic { labels, scale } => labels
            .iter()
            .map(|b| -b * scale * (0.05 + 0.9 * rng.random::<f64>()))
            .collect(),
        Loss::LeastAbsoluteDeviation { targets, scale } => targets
            .iter()
            .map(|_| scale * (2.0 * rng.random::<f64>() - 1.0))
            .collect(),
        Loss::DualNormGauge { dim, radius, .. } => {
            let raw: Vec<f64> = (0..*dim).map(|_| 2.0 * rng.random::<f64>() - 1.0).collect();
            let r = radius * rng.random::<f64>() / norm1(&raw).max(1e-12);
            raw.iter().map(|v| v * r).collect()
        }
    }
}

fn random_regularizer(rng: &mut ChaCha8Rng, kind: usize, p: usize) -> Regularizer {
    let mu = 0.5 + 2.5 * rng.random::<f64>();
    match kind {
        0 => Regularizer::squared_l2(mu, p),
        1 => {
            let lower: Vec<f64> = (0..p).map(|_| on_grid(-0.2 - rng.random::<f64>())).collect();
            let upper: Vec<f64> = (0..p).map(|_| on_grid(0.2 + rng.random::<f64>())).collect();
            Regularizer::squared_l2_box(mu, lower, upper).unwrap()
        }
        _ => Regularizer::negative_entropy(p),
    }
}

fn random_point_in(rng: &mut ChaCha8Rng, reg: &Regularizer) -> Vec<f64> {
    match reg {
        Regularizer::SquaredL2 { dim, .. } => {
            (0..*dim).map(|_| 4.0 * rng.random::<f64>() - 2.0).collect()
        }
        Regularizer::SquaredL2Box { lower, upper, .. } => lower
            .iter()
            .zip(upper)
            .map(|(l, u)| l + (u - l) * rng.random::<f64>())
            .collect(),
        Regularizer::NegativeEntropy { dim } => {
            let w: Vec<f64> = (0..*dim).map(|_| rng.random::<f64>() + 1e-3).collect();
            let s: f64 = w.iter().sum();
            w.iter().map(|v| v / s).collect()
        }
    }
}

fn criterion_7() -> Outcome {
    const PROBES: usize = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = Vec::new();
    let mut fy_worst: f64 = 0.0;
    let mut sc_worst: f64 = 0.0;
    let mut fd_worst: f64 = 0.0;
    let mut grid_worst: f64 = 0.0;
    let mut adj_worst: f64 = 0.0;

    // Fenchel–Young for h and f
    for k in 0..PROBES {
        let p = 1 + k % 6;
        let reg = random_regularizer(&mut rng, k % 3, p);
        let z: Vec<f64> = (0..p).map(|_| 6.0 * rng.random::<f64>() - 3.0).collect();
        let x = random_point_in(&mut rng, &reg);
        let ineq = reg.value(&x) + reg.conj_value(&z) - dot(&x, &z);
        let xs = reg.conj_grad(&z);
        let eq = reg.value(&xs) + reg.conj_value(&z) - dot(&xs, &z);
        fy_worst = fy_worst.max((-ineq).max(0.0)).max(eq.abs());

        let n = 1 + k % 5;
        let loss = random_loss(&mut rng, k % 4, n);
        let zf: Vec<f64> = (0..n).map(|_| 6.0 * rng.random::<f64>() - 3.0).collect();
        let y = interior_dual_point(&mut rng, &loss);
        let ineq = loss.value(&zf) + loss.conj_value(&y) - dot(&y, &zf);
        let ys = loss.subgradient(&zf).unwrap();
        let eq = loss.value(&zf) + loss.conj_value(&ys) - dot(&ys, &zf);
        fy_worst = fy_worst.max((-ineq).max(0.0)).max(eq.abs());
    }
    if fy_worst > 1e-10 {
        failures.push(format!("Fenchel–Young residual {fy_worst:.2e}"));
    }

    // strong convexity: D(x1, x2) ≥ (μ/2)‖x1 − x2‖² (ℓ1 norm for entropy)
    for k in 0..PROBES {
        let p = 1 + k % 6;
        let reg = random_regularizer(&mut rng, k % 3, p);
        let x1 = random_point_in(&mut rng, &reg);
        let x2 = random_point_in(&mut rng, &reg);
        let diff: Vec<f64> = x1.iter().zip(&x2).map(|(a, b)| a - b).collect();
        let lower = match reg {
            Regularizer::NegativeEntropy { .. } => 0.5 * norm1(&diff).powi(2),
            _ => 0.5 * reg.modulus() * norm2_sq(&diff),
        };
        let d = reg.bregman(&x1, &x2).unwrap();
        sc_worst = sc_worst.max(lower - d);
    }
    if sc_worst > 1e-10 {
        failures.push(format!("Bregman below strong-convexity bound by {sc_worst:.2e}"));
    }

    // (h*)' against central differences
    let h = 1e-6;
    for k in 0..PROBES {
        let p = 1 + k % 6;
        let reg = random_regularizer(&mut rng, k % 3, p);
        let z: Vec<f64> = (0..p).map(|_| 6.0 * rng.random::<f64>() - 3.0).collect();
        let g = reg.conj_grad(&z);
        for i in 0..p {
            let mut zp = z.clone();
            let mut zm = z.clone();
            zp[i] += h;
            zm[i] -= h;
            let fd = (reg.conj_value(&zp) - reg.conj_value(&zm)) / (2.0 * h);
            fd_worst = fd_worst.max((fd - g[i]).abs() / g[i].abs().max(1.0));
        }
    }
    if fd_worst > 1e-6 {
        failures.push(format!("finite-difference relative error {fd_worst:.2e}"));
    }

    // conjugates against grid suprema at resolution 1e-3
    let step = 1e-3;
    for k in 0..PROBES {
        let loss = random_loss(&mut rng, k % 4, 1);
        let y = interior_dual_point(&mut rng, &loss);
        let brute = grid_sup_1d(|z| loss.value(&[z]), y[0], -6.0, 6.0, step);
        grid_worst = grid_worst.max((brute - loss.conj_value(&y)).abs());

        // |z| ≤ 1.5 keeps the maximizer z/μ inside the grid
        let reg = random_regularizer(&mut rng, k % 2, 1);
        let z = 3.0 * rng.random::<f64>() - 1.5;
        let brute = grid_sup_1d(|x| reg.value(&[x]), z, -6.0, 6.0, step);
        grid_worst = grid_worst.max((brute - reg.conj_value(&[z])).abs());

        // entropy on the 2-simplex, parametrized by its first coordinate
        let ent = Regularizer::negative_entropy(2);
        let zz = [6.0 * rng.random::<f64>() - 3.0, 6.0 * rng.random::<f64>() - 3.0];
        let brute = grid_sup_1d(
            |a| ent.value(&[a, 1.0 - a]) - zz[1],
            zz[0] - zz[1],
            0.0,
            1.0,
            step,
        );
        grid_worst = grid_worst.max((brute - ent.conj_value(&zz)).abs());
    }
    let probes_2d = PROBES;
    for k in 0..probes_2d {
        let loss = random_loss(&mut rng, k % 4, 2);
        let y = interior_dual_point(&mut rng, &loss);
        let brute = grid_sup_2d(|a, b| loss.value(&[a, b]), [y[0], y[1]], 4.0, step);
        grid_worst = grid_worst.max((brute - loss.conj_value(&y)).abs());

        let reg = random_regularizer(&mut rng, k % 2, 2);
        let z = [3.0 * rng.random::<f64>() - 1.5, 3.0 * rng.random::<f64>() - 1.5];
        let brute = grid_sup_2d(|a, b| reg.value(&[a, b]), z, 4.0, step);
        grid_worst = grid_worst.max((brute - reg.conj_value(&z)).abs());
    }
    if grid_worst > 1e-3 {
        failures.push(format!("grid supremum mismatch {grid_worst:.2e}"));
    }

    // adjoint identity
    for k in 0..PROBES {
        let (n, p) = (1 + k % 7, 1 + (k / 7) % 5);
        let data: Vec<f64> = (0..n * p).map(|_| 2.0 * rng.random::<f64>() - 1.0).collect();
        let a = LinearOperator::new(n, p, data).unwrap();
        let x: Vec<f64> = (0..p).map(|_| 2.0 * rng.random::<f64>() - 1.0).collect();
        let y: Vec<f64> = (0..n).map(|_| 2.0 * rng.random::<f64>() - 1.0).collect();
        let lhs = dot(&a.apply(&x).unwrap(), &y);
        let rhs = dot(&x, &a.adjoint_apply(&y).unwrap());
        adj_worst = adj_worst.max((lhs - rhs).abs());
    }
    if adj_worst > 1e-12 {
        failures.push(format!("adjoint identity residual {adj_worst:.2e}"));
    }

    Outcome {
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            format!(
                "Fenchel–Young {fy_worst:.1e}, strong convexity {sc_worst:.1e}, \
                 FD {fd_worst:.1e}, grid {grid_worst:.1e} ({probes_2d} 2-D probes), \
                 adjoint {adj_worst:.1e}"
            )
        } else {
            failures.join("; ")
        },
    }
}

fn criterion_8(instances: &[(String, ProblemInstance)]) -> Outcome {
    let mut worst_y: f64 = 0.0;
    let mut worst_c: f64 = 0.0;
    for (_, problem) in instances.iter().take(6) {
        let start = SolverState::from_dual(problem, vec![0.0; problem.n()]).unwrap();
        let (mut md, mut gcg) = (start.clone(), start);
        let mut sum_y = vec![0.0; problem.n()];
        let mut sum_c = vec![0.0; problem.p()];
        let mut sum_y_gcg = vec![0.0; problem.n()];
        for t in 1..=1000usize {
            let rho = 2.0 / (t as f64 + 1.0);
            md = md_step(problem, &md, rho).unwrap();
            gcg = gcg_step(problem, &gcg, rho).unwrap();
            let y_bar = md.last_oracle_y.as_ref().unwrap();
            let aty = problem.operator.adjoint_apply(y_bar).unwrap();
            for (s, v) in sum_y.iter_mut().zip(y_bar) {
                *s += t as f64 * v;
            }
            for (s, v) in sum_c.iter_mut().zip(&aty) {
                *s -= t as f64 * v;
            }
            for (s, v) in sum_y_gcg.iter_mut().zip(gcg.last_oracle_y.as_ref().unwrap()) {
                *s += t as f64 * v;
            }
            let w = 2.0 / (t as f64 * (t as f64 + 1.0));
            let avg_y: Vec<f64> = sum_y.iter().map(|s| w * s).collect();
            let avg_c: Vec<f64> = sum_c.iter().map(|s| w * s).collect();
            let avg_y_gcg: Vec<f64> = sum_y_gcg.iter().map(|s| w * s).collect();
            worst_y = worst_y
                .max(max_abs_diff(&md.y, &avg_y))
                .max(max_abs_diff(&gcg.y, &avg_y_gcg));
            worst_c = worst_c.max(max_abs_diff(&md.carried_h_sub, &avg_c));
        }
    }
    Outcome {
        pass: worst_y <= 1e-10 && worst_c <= 1e-10,
        detail: format!("dual average {worst_y:.2e}, carried subgradient {worst_c:.2e} (tol 1e-10)"),
    }
}

fn criterion_9(instances: &[(String, ProblemInstance)]) -> Outcome {
    let mut failures = Vec::new();
    let mut slowest = 0usize;
    for (label, problem) in instances {
        let result = run(
            problem,
            Algorithm::MirrorDescent,
            StepSchedule::OneOverT,
            &Init::default_for(problem),
            StopRule::iterations(10_000),
            None,
        )
        .unwrap();
        let initial = result.trace[0].avg_gap;
        match result.trace.iter().find(|r| r.avg_gap <= 1e-2 * initial) {
            Some(r) => slowest = slowest.max(r.t),
            None => failures.push(format!(
                "{label}: final {:.3e} vs initial {initial:.3e}",
                result.trace.last().unwrap().avg_gap
            )),
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("all 20 instances reached 1% of the initial gap by t={slowest}")
        } else {
            failures.join("; ")
        },
    }
}

fn criterion_10() -> Outcome {
    let spec = GeneratorSpec::new(LossKind::Svm, RegularizerKind::SquaredL2, 40, 6);
    let base = generate_problem(&spec, 10).unwrap();
    // a box slightly larger than the unconstrained solution, so that early
    // iterates overshoot it and later ones come back inside
    let free = reference_solution(&base, 1e-9, 1_000_000).unwrap();
    let r = 1.1 * free.x_star.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let (lo, hi) = (-r, r);
    let problem = ProblemInstance::new(
        base.operator.clone(),
        Regularizer::squared_l2_box(1.0, vec![lo; 6], vec![hi; 6]).unwrap(),
        base.loss.clone(),
    )
    .unwrap();
    let mu = problem.regularizer.modulus();
    let start = SolverState::from_dual(&problem, vec![0.0; 40]).unwrap();
    let (mut md, mut gcg) = (start.clone(), start.clone());
    let mut pg = start.x.clone();
    let mut pg_hits_boundary = false;
    let (mut pg_dev, mut md_dev): (f64, f64) = (0.0, 0.0);
    for t in 1..=300usize {
        let rho = 2.0 / (t as f64 + 1.0);
        // projected subgradient step on μ/2‖x‖² + f(Ax)
        let y_bar = problem.loss.subgradient(&problem.operator.apply(&pg).unwrap()).unwrap();
        let aty = problem.operator.adjoint_apply(&y_bar).unwrap();
        pg = pg
            .iter()
            .zip(&aty)
            .map(|(x, a)| (x - rho / mu * (mu * x + a)).clamp(lo, hi))
            .collect();
        pg_hits_boundary |= pg.iter().any(|v| *v == lo || *v == hi);
        md = md_step(&problem, &md, rho).unwrap();
        gcg = gcg_step(&problem, &gcg, rho).unwrap();
        pg_dev = pg_dev.max(max_abs_diff(&pg, &gcg.x));
        md_dev = md_dev.max(max_abs_diff(&md.x, &gcg.x));
    }
    let check = lockstep(
        &problem,
        start.clone(),
        start,
        &StepSchedule::TwoOverTPlusOne,
        &StepSchedule::TwoOverTPlusOne,
        300,
        1e-9,
    )
    .unwrap();
    Outcome {
        pass: pg_hits_boundary && pg_dev > 10.0 * 1e-9 && md_dev <= 1e-9 && check.pass,
        detail: format!(
            "box half-width {r:.3}; projected gradient deviates by {pg_dev:.2e} \
             (boundary hit: {pg_hits_boundary}), \
             carried-subgradient mirror descent by {md_dev:.2e}"
        ),
    }
}

fn criterion_5() -> Outcome {
    let mut spec = GeneratorSpec::new(LossKind::Lad, RegularizerKind::Entropy, 20, 50);
    spec.outlier_fraction = 0.2;
    let problem = generate_problem(&spec, 5).unwrap();
    let init = Init::default_for(&problem);
    let x0 =
        SolverState::initialize(&problem, Algorithm::NonStronglyConvexMirrorDescent, &init).unwrap().x;
    let geo = geometry(&problem, Some(&x0));
    let delta2 = geo.delta2.unwrap();
    let schedule = StepSchedule::SqrtDecay {
        delta: delta2.sqrt(),
        r: geo.r2_origin.sqrt(),
    };
    let result = run(
        &problem,
        Algorithm::NonStronglyConvexMirrorDescent,
        schedule,
        &init,
        StopRule::iterations(10_000),
        None,
    )
    .unwrap();
    let rep = check_bound(&result, &geo, 1.0, Proposition::AppendixAGap, None).unwrap();
    let last = rep.observed.len() - 1;
    Outcome {
        pass: rep.pass && (delta2 - 50f64.ln()).abs() < 1e-12,
        detail: format!(
            "δ² = {delta2:.6} (log 50 = {:.6}); at t=10⁴ gap {:.3e} ≤ bound {:.3e}",
            50f64.ln(),
            rep.observed[last],
            rep.bounds[last]
        ),
    }
}

#[test]
fn acceptance_criteria() {
    let instances = bound_instances();
    let mut all = true;
    let mut record = |id: usize, title: &str, f: &mut dyn FnMut() -> Outcome, limit: Option<f64>| {
        let start = Instant::now();
        let mut outcome = f();
        let elapsed = start.elapsed();
        if let Some(limit) = limit {
            if elapsed.as_secs_f64() > limit {
                outcome.pass = false;
                outcome.detail += &format!("; runtime above {limit}s");
            }
        }
        report(id, title, elapsed, &outcome);
        all &= outcome.pass;
    };

    record(1, "mirror descent / conditional gradient equivalence", &mut criterion_1, None);
    record(
        2,
        "mirror descent bounds, ρ = 2/(t+1)",
        &mut || {
            let s = bound_criterion(
                &instances,
                Algorithm::MirrorDescent,
                |_, _| StepSchedule::TwoOverTPlusOne,
                &[Proposition::Prop1Avg, Proposition::Prop1Min, Proposition::Prop1Bregman],
            );
            Outcome {
                pass: s.pass,
                detail: s.detail("20 instances × 3 bounds × 1000 iterations"),
            }
        },
        Some(30.0),
    );
    record(
        3,
        "conditional gradient bounds, ρ = 2/(t+1)",
        &mut || {
            let s = bound_criterion(
                &instances,
                Algorithm::ConditionalGradient,
                |_, _| StepSchedule::TwoOverTPlusOne,
                &[Proposition::Prop3Dual, Proposition::Prop3Gap],
            );
            Outcome {
                pass: s.pass,
                detail: s.detail("20 instances × 2 bounds × 1000 iterations"),
            }
        },
        None,
    );
    record(
        4,
        "conditional gradient bounds, line search",
        &mut || {
            let s = bound_criterion(
                &instances,
                Algorithm::ConditionalGradient,
                |p, g| StepSchedule::LineSearch {
                    mu: p.regularizer.modulus(),
                    r2: g.r2_primal,
                },
                &[Proposition::Prop4Dual, Proposition::Prop4Gap],
            );
            let literal = literal_line_search_gap_violations(&instances);
            Outcome {
                pass: s.pass,
                detail: s.detail(&format!(
                    "20 instances × 2 bounds × 1000 iterations; \
                     same gap bound required at t = 1: {literal}"
                )),
            }
        },
        None,
    );
    record(5, "non-strongly-convex mirror descent gap bound", &mut criterion_5, Some(10.0));
    record(6, "synthetic step-size recursion", &mut criterion_6, None);
    record(7, "oracle property suites", &mut criterion_7, Some(20.0));
    record(8, "averaging identities", &mut || criterion_8(&instances), None);
    record(9, "1/t schedule reduces the averaged gap", &mut || criterion_9(&instances), None);
    record(10, "projected gradient is not equivalent", &mut criterion_10, None);

    assert!(all, "some acceptance criteria failed; see the lines above");
}
