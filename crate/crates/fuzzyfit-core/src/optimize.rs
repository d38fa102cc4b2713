//! Fitting linear models by minimizing generalized risks.
//!
//! The optimizer is deliberately plain: full-batch gradient descent with a
//! fixed step, a gradient-norm stopping rule, and random restarts against
//! the non-convexity that the symmetric part of the fuzzy margin loss and
//! the likelihood losses introduce. The objective adapts to the data: purely
//! set-valued observations pay their generalized (minimum) loss, fuzzy ones
//! its exact level integral, which for the absolute loss and for discounted
//! margin losses exists in closed form. Selections are implicit: each
//! gradient step differentiates through the current optimal instantiation,
//! so descent alternates between disambiguating the data and improving the
//! model without materializing the selections.
//!
//! Everything is deterministic given the seed; restarts draw from per-index
//! streams, and the best iterate ever seen is returned, so more iterations
//! never yield a worse model.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data::Example;
use crate::fuzzy::FuzzyDatum;
use crate::gmli::{
    gmli_interval_loss_grad, gmli_logistic_parts, gmli_logistic_score_deriv,
    gmli_precise_loss_grad, GmliConfig, GmliError,
};
use crate::loss::{
    discounted_box_margin_grad, discounted_box_margin_parts, l1_ramp, l1_ramp_deriv, BaseLoss,
    CrispLoss, LossError,
};
use crate::math::sign;
use crate::model::{LinearModel, ModelError};
use crate::risk::{Complexity, RiskConfig};

/// What [`fit`] minimizes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LossSpec {
    /// Optimistic generalization of a crisp loss: set-valued examples pay
    /// the minimum over their instantiations, fuzzy ones the level integral
    /// of that minimum.
    Generalized(CrispLoss),
    /// Gaussian interval likelihood on real observations (precise inputs).
    GmliInterval(GmliConfig),
    /// Discounted logistic likelihood on binary observations (precise
    /// inputs); zero-confidence examples carry no likelihood term and drop
    /// out of the mean.
    GmliLogistic,
}

/// Gradient descent settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizerConfig {
    /// Fixed step size.
    pub learning_rate: f64,
    /// Iteration budget per restart.
    pub max_iters: usize,
    /// Stop when the gradient norm falls below this.
    pub grad_tol: f64,
    /// Number of random initializations.
    pub restarts: usize,
    /// Initial parameters drawn uniformly from `[-init_scale, init_scale]`.
    pub init_scale: f64,
    /// Seed for the initializations.
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            learning_rate: 0.1,
            max_iters: 5000,
            grad_tol: 1e-6,
            restarts: 10,
            init_scale: 1.0,
            seed: 0,
        }
    }
}

/// Errors from fitting.
#[derive(Clone, Debug, PartialEq)]
pub enum OptimizeError {
    EmptyDataset,
    /// Example whose observation kind the selected loss cannot price.
    Incompatible { index: usize },
    /// The 0/1 family has no usable gradient; fit with a margin surrogate.
    NonSmoothLoss,
    /// Non-positive learning rate, iteration budget, restart count, or
    /// gradient tolerance, or a negative initialization scale.
    BadConfig,
    /// Every observation has zero confidence, so the likelihood is constant.
    NoInformativeExamples,
    /// The gradient turned non-finite at this iterate.
    NonFiniteGradient { restart: usize, iteration: usize, weights: Vec<f64>, bias: f64 },
    Loss(LossError),
    Gmli(GmliError),
    Model(ModelError),
}

impl fmt::Display for OptimizeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OptimizeError::EmptyDataset => write!(f, "fit on an empty dataset"),
            OptimizeError::Incompatible { index } => {
                write!(f, "example {index} has a kind the selected loss cannot price")
            }
            OptimizeError::NonSmoothLoss => {
                write!(f, "the 0/1 loss has no usable gradient; fit a margin surrogate")
            }
            OptimizeError::BadConfig => write!(f, "optimizer configuration out of range"),
            OptimizeError::NoInformativeExamples => {
                write!(f, "every observation has zero confidence; the likelihood is constant")
            }
            OptimizeError::NonFiniteGradient { restart, iteration, .. } => {
                write!(f, "non-finite gradient in restart {restart} at iteration {iteration}")
            }
            OptimizeError::Loss(e) => write!(f, "{e}"),
            OptimizeError::Gmli(e) => write!(f, "{e}"),
            OptimizeError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for OptimizeError {}

impl From<LossError> for OptimizeError {
    fn from(e: LossError) -> Self {
        OptimizeError::Loss(e)
    }
}

impl From<GmliError> for OptimizeError {
    fn from(e: GmliError) -> Self {
        OptimizeError::Gmli(e)
    }
}

impl From<ModelError> for OptimizeError {
    fn from(e: ModelError) -> Self {
        OptimizeError::Model(e)
    }
}

/// How a fit went.
#[derive(Clone, Debug, PartialEq)]
pub struct FitDiagnostics {
    /// Restart that produced the returned model.
    pub best_restart: usize,
    /// Iterations that restart ran.
    pub iterations: usize,
    /// Gradient norm when that restart stopped.
    pub grad_norm: f64,
    /// Whether that restart met the gradient tolerance.
    pub converged: bool,
    /// Best risk seen in each restart, in order.
    pub restart_risks: Vec<f64>,
    /// Whether the closed-form least-squares path answered directly.
    pub least_squares: bool,
}

/// Fit a linear model by minimizing the selected risk over the data, plus
/// the penalty from `risk_cfg`.
///
/// Runs `restarts` independent descents from random initializations and
/// returns the best iterate seen anywhere (ties keep the earlier restart).
/// For the squared loss on fully precise data the normal equations answer
/// in closed form instead. Deterministic given the seed.
pub fn fit(
    data: &[Example],
    spec: &LossSpec,
    risk_cfg: &RiskConfig,
    opt_cfg: &OptimizerConfig,
) -> Result<(LinearModel, f64, FitDiagnostics), OptimizeError> {
    let objective = Objective::new(data, spec, risk_cfg)?;
    check_opt_config(opt_cfg)?;
    if let Some(model) = objective.least_squares(risk_cfg)? {
        let (risk, grad) = objective.eval(&model)?;
        let diagnostics = FitDiagnostics {
            best_restart: 0,
            iterations: 0,
            grad_norm: norm(&grad),
            converged: true,
            restart_risks: vec![risk],
            least_squares: true,
        };
        return Ok((model, risk, diagnostics));
    }

    let dim = objective.dim;
    let mut best: Option<(LinearModel, f64, usize, usize, f64, bool)> = None;
    let mut restart_risks = Vec::with_capacity(opt_cfg.restarts);
    for restart in 0..opt_cfg.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(opt_cfg.seed);
        rng.set_stream(restart as u64);
        let s = opt_cfg.init_scale;
        let mut model = LinearModel::new(
            (0..dim).map(|_| rng.random_range(-s..=s)).collect(),
            rng.random_range(-s..=s),
        );
        let mut local: Option<(LinearModel, f64)> = None;
        let mut iterations = 0;
        let mut grad_norm = f64::INFINITY;
        let mut converged = false;
        for iteration in 0..opt_cfg.max_iters {
            let (risk, grad) = objective.eval(&model)?;
            if !grad.iter().all(|g| g.is_finite()) {
                return Err(OptimizeError::NonFiniteGradient {
                    restart,
                    iteration,
                    weights: model.weights,
                    bias: model.bias,
                });
            }
            // Monotone acceptance: keep the best iterate ever seen.
            if local.as_ref().map_or(true, |(_, r)| risk < *r) {
                local = Some((model.clone(), risk));
            }
            grad_norm = norm(&grad);
            iterations = iteration;
            if grad_norm <= opt_cfg.grad_tol {
                converged = true;
                break;
            }
            for j in 0..dim {
                model.weights[j] -= opt_cfg.learning_rate * grad[j];
            }
            model.bias -= opt_cfg.learning_rate * grad[dim];
        }
        if !converged {
            // The final step produced an iterate the loop never scored.
            let (risk, _) = objective.eval(&model)?;
            if local.as_ref().map_or(true, |(_, r)| risk < *r) {
                local = Some((model, risk));
            }
        }
        let (local_model, local_risk) = local.expect("max_iters > 0");
        restart_risks.push(local_risk);
        if best.as_ref().map_or(true, |(_, r, ..)| local_risk < *r) {
            best = Some((local_model, local_risk, restart, iterations, grad_norm, converged));
        }
    }
    let (model, risk, best_restart, iterations, grad_norm, converged) =
        best.expect("restarts > 0");
    let diagnostics = FitDiagnostics {
        best_restart,
        iterations,
        grad_norm,
        converged,
        restart_risks,
        least_squares: false,
    };
    Ok((model, risk, diagnostics))
}

/// Largest scaled deviation between the analytic risk gradient and central
/// finite differences (step `1e-6`), over all coordinates.
///
/// Meaningful away from kinks: the subgradient conventions at `s = 0`, at
/// ramp edges, and at hinge corners do not match one-sided differences, so
/// callers sample models at least `1e-3` from any such locus.
pub fn gradient_check(
    data: &[Example],
    spec: &LossSpec,
    risk_cfg: &RiskConfig,
    model: &LinearModel,
) -> Result<f64, OptimizeError> {
    let objective = Objective::new(data, spec, risk_cfg)?;
    let (_, analytic) = objective.eval(model)?;
    let h = 1e-6;
    let mut worst = 0.0f64;
    for j in 0..=objective.dim {
        let mut plus = model.clone();
        let mut minus = model.clone();
        if j < objective.dim {
            plus.weights[j] += h;
            minus.weights[j] -= h;
        } else {
            plus.bias += h;
            minus.bias -= h;
        }
        let numeric = (objective.eval(&plus)?.0 - objective.eval(&minus)?.0) / (2.0 * h);
        let denom = 1.0f64.max(analytic[j].abs()).max(numeric.abs());
        worst = worst.max((analytic[j] - numeric).abs() / denom);
    }
    Ok(worst)
}

fn check_opt_config(cfg: &OptimizerConfig) -> Result<(), OptimizeError> {
    let ok = cfg.learning_rate > 0.0
        && cfg.learning_rate.is_finite()
        && cfg.max_iters > 0
        && cfg.grad_tol > 0.0
        && cfg.restarts > 0
        && cfg.init_scale >= 0.0
        && cfg.init_scale.is_finite();
    if ok {
        Ok(())
    } else {
        Err(OptimizeError::BadConfig)
    }
}

fn norm(g: &[f64]) -> f64 {
    crate::math::sqrt(g.iter().map(|v| v * v).sum())
}

/// The risk being minimized, with all per-example dispatch settled upfront.
struct Objective<'a> {
    data: &'a [Example],
    spec: &'a LossSpec,
    lambda: f64,
    complexity: Complexity,
    levels: usize,
    dim: usize,
}

impl<'a> Objective<'a> {
    fn new(
        data: &'a [Example],
        spec: &'a LossSpec,
        risk_cfg: &RiskConfig,
    ) -> Result<Self, OptimizeError> {
        if data.is_empty() {
            return Err(OptimizeError::EmptyDataset);
        }
        let dim = data[0].dim();
        let mut informative = false;
        for (index, e) in data.iter().enumerate() {
            if e.dim() != dim {
                return Err(ModelError::DimensionMismatch { expected: dim, got: e.dim() }.into());
            }
            let compatible = match spec {
                LossSpec::Generalized(CrispLoss::Base(BaseLoss::ZeroOne)) => {
                    return Err(OptimizeError::NonSmoothLoss);
                }
                LossSpec::Generalized(CrispLoss::Base(_)) => e.y.is_real_kind(),
                LossSpec::Generalized(CrispLoss::Margin(_)) | LossSpec::GmliLogistic => {
                    e.y.as_binary_discounted().is_some()
                }
                LossSpec::GmliInterval(_) => {
                    e.y.is_real_kind()
                        && !matches!(e.y, FuzzyDatum::Trapezoid(_))
                        && e.is_precise_x()
                }
            };
            if !compatible || (matches!(spec, LossSpec::GmliLogistic) && !e.is_precise_x()) {
                return Err(OptimizeError::Incompatible { index });
            }
            if let Some((_, w)) = e.y.as_binary_discounted() {
                informative |= w > 0.0;
            }
        }
        if matches!(spec, LossSpec::GmliLogistic) && !informative {
            return Err(OptimizeError::NoInformativeExamples);
        }
        if risk_cfg.alpha_grid_size == 0 {
            return Err(LossError::ZeroLevels.into());
        }
        Ok(Objective {
            data,
            spec,
            lambda: risk_cfg.lambda,
            complexity: risk_cfg.complexity,
            levels: risk_cfg.alpha_grid_size,
            dim,
        })
    }

    /// Risk and its gradient in `(weights..., bias)`.
    fn eval(&self, model: &LinearModel) -> Result<(f64, Vec<f64>), OptimizeError> {
        let mut total = 0.0;
        let mut grad = vec![0.0; self.dim + 1];
        let mut count = 0usize;
        for e in self.data {
            let (s, d) = model.score_parts(&e.x)?;
            // Per-example loss value and its derivative in (s, d).
            let (value, dls, dld) = match self.spec {
                LossSpec::Generalized(CrispLoss::Base(BaseLoss::L1)) => box_l1(&e.y, s, d),
                LossSpec::Generalized(CrispLoss::Base(BaseLoss::L2)) => {
                    box_l2(&e.y, s, d, self.levels)
                }
                LossSpec::Generalized(CrispLoss::Base(BaseLoss::ZeroOne)) => unreachable!(),
                LossSpec::Generalized(CrispLoss::Margin(f)) => {
                    let (y, w) = e.y.as_binary_discounted().expect("validated");
                    let v = discounted_box_margin_parts(*f, w, y, s, d);
                    let (dls, dld) = discounted_box_margin_grad(*f, w, y, s, d);
                    (v, dls, dld)
                }
                LossSpec::GmliInterval(cfg) => {
                    let (v, g) = match &e.y {
                        FuzzyDatum::Real(y) => gmli_precise_loss_grad(*y, s, cfg)?,
                        FuzzyDatum::Interval(iv) if iv.width() < cfg.min_width => {
                            gmli_precise_loss_grad(iv.mid(), s, cfg)?
                        }
                        FuzzyDatum::Interval(iv) => gmli_interval_loss_grad(*iv, s, cfg)?,
                        _ => unreachable!("validated"),
                    };
                    (v, g, 0.0)
                }
                LossSpec::GmliLogistic => {
                    let (y, w) = e.y.as_binary_discounted().expect("validated");
                    if w == 0.0 {
                        continue;
                    }
                    (gmli_logistic_parts(w, y, s), gmli_logistic_score_deriv(w, y, s), 0.0)
                }
            };
            count += 1;
            total += value;
            let mid = e.x_mid();
            let rad = e.x_rad();
            for j in 0..self.dim {
                grad[j] += dls * mid[j] + dld * sign(model.weights[j]) * rad[j];
            }
            grad[self.dim] += dls;
        }
        debug_assert!(count > 0, "informativeness was validated");
        let n = count as f64;
        total /= n;
        for g in grad.iter_mut() {
            *g /= n;
        }
        total += self.lambda * self.complexity.of(model);
        if let Complexity::SquaredNorm = self.complexity {
            for j in 0..self.dim {
                grad[j] += self.lambda * 2.0 * model.weights[j];
            }
        }
        Ok((total, grad))
    }

    /// Normal equations for the squared loss on fully precise data; `None`
    /// when the shortcut does not apply or the system is singular.
    fn least_squares(&self, risk_cfg: &RiskConfig) -> Result<Option<LinearModel>, OptimizeError> {
        if !matches!(self.spec, LossSpec::Generalized(CrispLoss::Base(BaseLoss::L2))) {
            return Ok(None);
        }
        let precise = self
            .data
            .iter()
            .all(|e| e.is_precise_x() && matches!(e.y, FuzzyDatum::Real(_)));
        if !precise {
            return Ok(None);
        }
        // Minimize mean (y - w.x - b)^2 + lambda |w|^2: in augmented
        // coordinates theta = (w, b), solve (X'X / n + lambda D) theta =
        // X'y / n with D killing the bias row.
        let p = self.dim + 1;
        let n = self.data.len() as f64;
        let mut a = vec![vec![0.0; p]; p];
        let mut rhs = vec![0.0; p];
        for e in self.data {
            let mut row = e.x_mid();
            row.push(1.0);
            let FuzzyDatum::Real(y) = e.y else { unreachable!("precise") };
            for i in 0..p {
                for j in 0..p {
                    a[i][j] += row[i] * row[j] / n;
                }
                rhs[i] += row[i] * y / n;
            }
        }
        if let Complexity::SquaredNorm = self.complexity {
            for i in 0..self.dim {
                a[i][i] += risk_cfg.lambda;
            }
        }
        let Some(theta) = solve(a, rhs) else {
            return Ok(None);
        };
        let (weights, bias) = theta.split_at(self.dim);
        Ok(Some(LinearModel::new(weights.to_vec(), bias[0])))
    }
}

/// Absolute loss of a box score against any real-kind observation: both
/// ramps of the trapezoidal closed form, shifted by the score radius.
fn box_l1(y: &FuzzyDatum, s: f64, d: f64) -> (f64, f64, f64) {
    let (a, b, c, dd) = match y {
        FuzzyDatum::Real(v) => (*v, *v, *v, *v),
        FuzzyDatum::Interval(iv) => (iv.lo(), iv.lo(), iv.hi(), iv.hi()),
        FuzzyDatum::Trapezoid(t) => (t.a(), t.b(), t.c(), t.d()),
        _ => unreachable!("validated"),
    };
    // Right ramp: the low end of the score range exceeds the core's right
    // edge. Left ramp: the high end falls short of the left edge.
    let (er, el) = ((s - d) - c, b - (s + d));
    let (gr, gl) = (l1_ramp_deriv(er, dd - c), l1_ramp_deriv(el, b - a));
    (l1_ramp(er, dd - c) + l1_ramp(el, b - a), gr - gl, -gr - gl)
}

/// Squared loss of a box score against a real-kind observation: exact gap
/// for crisp sets, level quadrature for trapezoids.
fn box_l2(y: &FuzzyDatum, s: f64, d: f64, levels: usize) -> (f64, f64, f64) {
    match y {
        FuzzyDatum::Real(v) => l2_gap(*v, *v, s, d),
        FuzzyDatum::Interval(iv) => l2_gap(iv.lo(), iv.hi(), s, d),
        FuzzyDatum::Trapezoid(t) => {
            let k = levels as f64;
            let (mut v, mut dls, mut dld) = (0.0, 0.0, 0.0);
            for j in 0..levels {
                let alpha = (j as f64 + 0.5) / k;
                let cut = t.cut(alpha);
                let (lv, ls, ld) = l2_gap(cut.lo(), cut.hi(), s, d);
                v += lv;
                dls += ls;
                dld += ld;
            }
            (v / k, dls / k, dld / k)
        }
        _ => unreachable!("validated"),
    }
}

/// Squared gap between the score range `[s - d, s + d]` and `[lo, hi]`.
fn l2_gap(lo: f64, hi: f64, s: f64, d: f64) -> (f64, f64, f64) {
    if s + d < lo {
        let e = lo - (s + d);
        (e * e, -2.0 * e, -2.0 * e)
    } else if s - d > hi {
        let e = (s - d) - hi;
        (e * e, 2.0 * e, -2.0 * e)
    } else {
        (0.0, 0.0, 0.0)
    }
}

/// Gaussian elimination with partial pivoting; `None` on (near) singular.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let p = b.len();
    for col in 0..p {
        let pivot = (col..p).max_by(|&i, &j| {
            a[i][col].abs().partial_cmp(&a[j][col].abs()).expect("finite")
        })?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..p {
            let factor = a[row][col] / a[col][col];
            for k in col..p {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; p];
    for col in (0..p).rev() {
        let mut acc = b[col];
        for k in (col + 1)..p {
            acc -= a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::{Interval, Label};
    use crate::loss::MarginLoss;
    use crate::risk::generalized_empirical_risk;
    use alloc::collections::BTreeMap;

    fn line_data() -> Vec<Example> {
        // y = 2x - 1 exactly.
        [0.0, 1.0, 2.0, 3.0]
            .iter()
            .map(|&x| Example::precise(&[x], 2.0 * x - 1.0).unwrap())
            .collect()
    }

    #[test]
    fn least_squares_recovers_an_exact_line() {
        let spec = LossSpec::Generalized(CrispLoss::Base(BaseLoss::L2));
        let (m, risk, diag) =
            fit(&line_data(), &spec, &RiskConfig::default(), &OptimizerConfig::default()).unwrap();
        assert!(diag.least_squares);
        assert!((m.weights[0] - 2.0).abs() < 1e-8);
        assert!((m.bias + 1.0).abs() < 1e-8);
        assert!(risk < 1e-12);
        assert!(diag.converged);
    }

    #[test]
    fn ridge_least_squares_is_stationary() {
        let cfg = RiskConfig {
            lambda: 0.1,
            complexity: Complexity::SquaredNorm,
            ..Default::default()
        };
        let spec = LossSpec::Generalized(CrispLoss::Base(BaseLoss::L2));
        let (m, _, diag) = fit(&line_data(), &spec, &cfg, &OptimizerConfig::default()).unwrap();
        assert!(diag.least_squares);
        // Stationarity of the regularized objective at the solution.
        assert!(diag.grad_norm < 1e-10, "gradient norm {}", diag.grad_norm);
        assert!(m.weights[0] < 2.0, "ridge shrinks the slope");
    }

    #[test]
    fn collinear_instantiation_reaches_zero_risk() {
        // Interval outputs all containing the line y = x: the generalized
        // squared risk can vanish, and its minimizing selections sit on the
        // fitted line.
        let data: Vec<Example> = [0.0, 1.0, 2.0, 3.0, 4.0]
            .iter()
            .map(|&x| Example::with_interval(&[x], x - 1.0, x + 1.0).unwrap())
            .collect();
        let spec = LossSpec::Generalized(CrispLoss::Base(BaseLoss::L2));
        let rc = RiskConfig::default();
        let (m, risk, diag) = fit(&data, &spec, &rc, &OptimizerConfig::default()).unwrap();
        assert!(!diag.least_squares);
        assert!(risk < 1e-6, "risk {risk}");
        let (check, picks) = generalized_empirical_risk(&rc, &CrispLoss::Base(BaseLoss::L2), &m, &data).unwrap();
        assert!(check < 1e-6);
        for p in picks {
            let crate::fuzzy::CrispValue::Real(y) = p.y else { panic!("real") };
            assert!((m.predict(&p.x).unwrap() - y).abs() < 1e-3);
        }
    }

    #[test]
    fn logistic_fit_is_deterministic_and_restarts_agree() {
        let data = vec![
            Example::labeled(&[2.0, 1.0], "+1").unwrap(),
            Example::labeled(&[1.5, 2.0], "+1").unwrap(),
            Example::labeled(&[-1.0, -0.5], "-1").unwrap(),
            Example::labeled(&[-2.0, -1.5], "-1").unwrap(),
            Example::labeled(&[0.5, -2.0], "-1").unwrap(),
        ];
        let spec = LossSpec::Generalized(CrispLoss::Margin(MarginLoss::Logistic));
        let rc = RiskConfig { lambda: 0.05, complexity: Complexity::SquaredNorm, ..Default::default() };
        let oc = OptimizerConfig { restarts: 3, max_iters: 4000, ..Default::default() };
        let (m1, r1, d1) = fit(&data, &spec, &rc, &oc).unwrap();
        let (m2, r2, _) = fit(&data, &spec, &rc, &oc).unwrap();
        assert_eq!(m1.weights, m2.weights);
        assert_eq!(m1.bias, m2.bias);
        assert_eq!(r1.to_bits(), r2.to_bits());
        // Regularized logistic risk is convex: every restart lands together.
        for r in &d1.restart_risks {
            assert!((r - r1).abs() < 1e-6, "restart risks {:?}", d1.restart_risks);
        }
        assert!(m1.weights[0] > 0.0 && m1.weights[1] > 0.0);
    }

    #[test]
    fn returned_risk_is_the_minimum_over_restart_bests() {
        let data = vec![
            Example::labeled(&[1.0], "+1").unwrap(),
            Example::labeled(&[-1.0], "-1").unwrap(),
            Example::new(
                vec![Interval::degenerate(0.3).unwrap()],
                fuzzy_label(&[("+1", 1.0), ("-1", 1.0)]),
            ),
        ];
        let spec = LossSpec::Generalized(CrispLoss::Margin(MarginLoss::Logistic));
        let oc = OptimizerConfig { restarts: 4, max_iters: 300, ..Default::default() };
        let (_, risk, diag) = fit(&data, &spec, &RiskConfig::default(), &oc).unwrap();
        for r in &diag.restart_risks {
            assert!(risk <= r + 1e-15);
        }
        assert!((risk - diag.restart_risks.iter().cloned().fold(f64::INFINITY, f64::min)).abs() < 1e-15);
    }

    fn fuzzy_label(pairs: &[(&str, f64)]) -> FuzzyDatum {
        let mut m = BTreeMap::new();
        for (name, degree) in pairs {
            m.insert(Label::new(*name), *degree);
        }
        FuzzyDatum::fuzzy_label(m).unwrap()
    }

    #[test]
    fn gradient_checks_pass_at_smooth_points() {
        let rc = RiskConfig::default();
        // Logistic on crisp labels.
        let labels = vec![
            Example::labeled(&[1.0, 0.5], "+1").unwrap(),
            Example::labeled(&[-0.5, -1.0], "-1").unwrap(),
            Example::labeled(&[0.3, -0.7], "+1").unwrap(),
        ];
        let m = LinearModel::new(vec![0.4, -0.3], 0.2);
        let spec = LossSpec::Generalized(CrispLoss::Margin(MarginLoss::Logistic));
        assert!(gradient_check(&labels, &spec, &rc, &m).unwrap() < 1e-5);

        // Fuzzy margin at intermediate confidence, away from s = 0.
        let fuzzy = vec![
            Example::new(vec![Interval::degenerate(1.0).unwrap()], fuzzy_label(&[("+1", 1.0), ("-1", 0.7)])),
            Example::new(vec![Interval::degenerate(-2.0).unwrap()], fuzzy_label(&[("-1", 1.0), ("+1", 0.3)])),
        ];
        for f in [MarginLoss::Logistic, MarginLoss::Exponential] {
            let spec = LossSpec::Generalized(CrispLoss::Margin(f));
            assert!(gradient_check(&fuzzy, &spec, &rc, &m_1d()).unwrap() < 1e-5);
        }
        let spec = LossSpec::GmliLogistic;
        assert!(gradient_check(&fuzzy, &spec, &rc, &m_1d()).unwrap() < 1e-5);

        // Interval likelihood and precise fallback.
        let reg = vec![
            Example::with_interval(&[1.0], 2.0, 3.0).unwrap(),
            Example::precise(&[2.0], 1.0).unwrap(),
        ];
        let spec = LossSpec::GmliInterval(GmliConfig::default());
        assert!(gradient_check(&reg, &spec, &rc, &m_1d()).unwrap() < 1e-5);

        // Fuzzy absolute and squared losses on a box input, off the kinks.
        let mixed = vec![
            Example::with_trapezoid(&[1.3], 0.0, 1.0, 2.0, 4.0).unwrap(),
            Example::with_interval(&[2.1], -1.0, 0.5).unwrap(),
            Example::new(
                vec![Interval::new(0.4, 0.9).unwrap()],
                FuzzyDatum::trapezoid(3.0, 3.5, 4.0, 5.0).unwrap(),
            ),
        ];
        let rc_coarse = RiskConfig { alpha_grid_size: 64, ..Default::default() };
        for base in [BaseLoss::L1, BaseLoss::L2] {
            let spec = LossSpec::Generalized(CrispLoss::Base(base));
            let dev = gradient_check(&mixed, &spec, &rc_coarse, &m_1d()).unwrap();
            assert!(dev < 1e-4, "{base:?} deviation {dev}");
        }
    }

    fn m_1d() -> LinearModel {
        LinearModel::new(vec![1.1], -0.4)
    }

    #[test]
    fn incompatibilities_are_rejected() {
        let rc = RiskConfig::default();
        let oc = OptimizerConfig::default();
        let real = vec![Example::precise(&[0.0], 0.0).unwrap()];
        let labeled = vec![Example::labeled(&[0.0], "+1").unwrap()];
        assert_eq!(
            fit(&[], &LossSpec::GmliLogistic, &rc, &oc),
            Err(OptimizeError::EmptyDataset)
        );
        assert_eq!(
            fit(&real, &LossSpec::Generalized(CrispLoss::Base(BaseLoss::ZeroOne)), &rc, &oc),
            Err(OptimizeError::NonSmoothLoss)
        );
        assert_eq!(
            fit(&real, &LossSpec::GmliLogistic, &rc, &oc),
            Err(OptimizeError::Incompatible { index: 0 })
        );
        assert_eq!(
            fit(&labeled, &LossSpec::Generalized(CrispLoss::Base(BaseLoss::L1)), &rc, &oc),
            Err(OptimizeError::Incompatible { index: 0 })
        );
        // Trapezoid outputs and box inputs have no interval likelihood.
        let trap = vec![Example::with_trapezoid(&[0.0], 0.0, 1.0, 2.0, 3.0).unwrap()];
        assert_eq!(
            fit(&trap, &LossSpec::GmliInterval(GmliConfig::default()), &rc, &oc),
            Err(OptimizeError::Incompatible { index: 0 })
        );
        // All-unlabeled likelihood data carry no information.
        let blank = vec![Example::new(
            vec![Interval::degenerate(0.0).unwrap()],
            fuzzy_label(&[("+1", 1.0), ("-1", 1.0)]),
        )];
        assert_eq!(
            fit(&blank, &LossSpec::GmliLogistic, &rc, &oc),
            Err(OptimizeError::NoInformativeExamples)
        );
        let bad = OptimizerConfig { learning_rate: 0.0, ..Default::default() };
        assert_eq!(
            fit(&labeled, &LossSpec::Generalized(CrispLoss::Margin(MarginLoss::Hinge)), &rc, &bad),
            Err(OptimizeError::BadConfig)
        );
    }

    #[test]
    fn fuzzy_l1_descent_moves_into_the_core() {
        // One wide trapezoid: the absolute fuzzy risk vanishes on the core
        // [4, 6]. The quadratic ramps flatten toward the core edge, so the
        // descent approaches it asymptotically and parks within tolerance.
        let data = vec![Example::with_trapezoid(&[1.0], 0.0, 4.0, 6.0, 10.0).unwrap()];
        let spec = LossSpec::Generalized(CrispLoss::Base(BaseLoss::L1));
        let (m, risk, _) =
            fit(&data, &spec, &RiskConfig::default(), &OptimizerConfig::default()).unwrap();
        let s = m.predict(&[1.0]).unwrap();
        assert!(risk < 1e-9, "risk {risk}");
        let gap = (4.0 - s).max(s - 6.0).max(0.0);
        assert!(gap < 1e-4, "score {s} should end within tolerance of the core");
    }
}
