//! Synthetic benchmarks comparing the fuzzy-loss learner against a
//! likelihood baseline and plain logistic regression.
//!
//! Two spherical Gaussian classes in the plane, means `(1,1)` and `(-1,-1)`,
//! are sampled and then degraded: either a fraction of labels is masked
//! entirely (semi-supervised setting) or labels are flipped with a known
//! probability and reported as graded observations that keep the alternative
//! plausible to that degree (label noise setting). Each learner fits a
//! linear classifier to the degraded sample and is scored by its *exact*
//! generalization error, available in closed form because the class
//! densities are known. Curves report the mean error over many repetitions
//! per corruption level.
//!
//! Every repetition derives its own random streams from the experiment seed,
//! so cells can run in any order (or in parallel) and still produce
//! identical bytes; within a cell all learners share one sample, one
//! corruption, and one optimizer seed, which makes paired comparisons sharp.
//! With shared seeds the likelihood baseline and plain logistic regression
//! are not merely close on masked data: masked examples contribute no
//! likelihood term, so both minimize the same objective over the same
//! labeled subsample from the same initializations, and the fitted models
//! agree bit for bit.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::data::Example;
use crate::fuzzy::{DiscreteFuzzyLabel, FuzzyDatum, FuzzyError, Label};
use crate::loss::{CrispLoss, MarginLoss};
use crate::math::{normal_cdf, sqrt};
use crate::model::LinearModel;
use crate::optimize::{fit, LossSpec, OptimizeError, OptimizerConfig};
use crate::risk::RiskConfig;

/// Optimizer settings shared by every learner: one plain gradient descent
/// from the zero model. The zero start is deliberate, not a shortcut. The
/// symmetric part of the fuzzy loss rewards confidence in whatever the model
/// already believes, so it turns bad beliefs into traps: a random start can
/// commit to a wrong orientation, and under heavy label flipping the
/// objective even develops a spurious minimum that classifies by a bias
/// shift toward the majority observed class. From zero the first steps are
/// driven by the labeled signal alone (the symmetric term is flat there),
/// which reliably lands descent in the basin where that signal keeps
/// mattering.
const FIT_LEARNING_RATE: f64 = 0.5;
const FIT_MAX_ITERS: usize = 600;
const FIT_GRAD_TOL: f64 = 1e-5;
const FIT_INIT_SCALE: f64 = 0.0;
const FIT_RESTARTS: usize = 1;

/// Which corruption process degrades the sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    /// Labels vanish with probability gamma; the observation becomes fully
    /// ambiguous between the classes.
    SemiSupervised,
    /// Labels flip with probability gamma; the observation keeps the
    /// alternative class plausible to degree gamma.
    LabelNoise,
}

/// The learners under comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Discounted logistic margin loss over all observations, graded ones
    /// included.
    Fuzzy,
    /// Discounted logistic likelihood; zero-confidence observations carry no
    /// term.
    Gmli,
    /// Plain logistic regression on the observed labels, taken at face
    /// value; fully ambiguous observations are dropped.
    Standard,
}

impl Method {
    /// Identifier used in curve output.
    pub fn name(&self) -> &'static str {
        match self {
            Method::Fuzzy => "fuzzy",
            Method::Gmli => "gmli",
            Method::Standard => "standard",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Benchmark shape: class geometry, corruption grid, repetition count.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    /// Sample size per class.
    pub n_per_class: usize,
    /// Mean of the positive class.
    pub mu_plus: [f64; 2],
    /// Mean of the negative class.
    pub mu_minus: [f64; 2],
    /// Scale of the (isotropic) class covariance.
    pub covariance: f64,
    /// Corruption probabilities, one curve point each.
    pub gamma_grid: Vec<f64>,
    /// Repetitions averaged per curve point.
    pub repetitions: usize,
    /// Master seed; every cell derives its own streams from it.
    pub seed: u64,
    /// Learners to run, in output order.
    pub methods: Vec<Method>,
}

impl ExperimentConfig {
    /// Defaults with the corruption grid appropriate for `which`.
    pub fn for_experiment(which: Which) -> Self {
        ExperimentConfig {
            n_per_class: 100,
            mu_plus: [1.0, 1.0],
            mu_minus: [-1.0, -1.0],
            covariance: 1.0,
            gamma_grid: default_gamma_grid(which),
            repetitions: 200,
            seed: 2026,
            methods: vec![Method::Fuzzy, Method::Gmli, Method::Standard],
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let finite =
            self.mu_plus.iter().chain(&self.mu_minus).all(|v| v.is_finite());
        if !finite {
            return Err(ExperimentError::BadConfig("class means must be finite"));
        }
        if !(self.covariance.is_finite() && self.covariance > 0.0) {
            return Err(ExperimentError::BadConfig("covariance scale must be positive"));
        }
        if self.n_per_class == 0 {
            return Err(ExperimentError::BadConfig("n_per_class must be at least 1"));
        }
        if self.repetitions == 0 {
            return Err(ExperimentError::BadConfig("repetitions must be at least 1"));
        }
        if self.gamma_grid.is_empty() {
            return Err(ExperimentError::BadConfig("gamma grid must be non-empty"));
        }
        // Corruption level 1 is excluded: flipping every label with
        // certainty is label inversion, not noise, and masking every label
        // leaves nothing for the baselines to fit.
        if !self.gamma_grid.iter().all(|g| g.is_finite() && (0.0..1.0).contains(g)) {
            return Err(ExperimentError::BadConfig("gamma values must lie in [0, 1)"));
        }
        if self.methods.is_empty() {
            return Err(ExperimentError::BadConfig("at least one method is required"));
        }
        Ok(())
    }

    /// The error of the best possible classifier for this geometry: the
    /// midline between the means, at distance half the mean separation.
    pub fn bayes_error(&self) -> f64 {
        let dx = self.mu_plus[0] - self.mu_minus[0];
        let dy = self.mu_plus[1] - self.mu_minus[1];
        let separation = sqrt(dx * dx + dy * dy);
        normal_cdf(-0.5 * separation / sqrt(self.covariance))
    }
}

/// Corruption grids matching the published curves: coarse up to heavy
/// masking, finer for noise since flipping beyond one half makes labels
/// uninformative.
pub fn default_gamma_grid(which: Which) -> Vec<f64> {
    match which {
        Which::SemiSupervised => (0..10).map(|i| i as f64 * 0.1).collect(),
        Which::LabelNoise => (0..10).map(|i| i as f64 * 0.05).collect(),
    }
}

/// One point of an error curve.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvePoint {
    pub gamma: f64,
    pub method: Method,
    /// Mean exact error over the repetitions.
    pub mean_error: f64,
    /// Standard error of that mean.
    pub stderr: f64,
    pub repetitions: usize,
}

/// Errors from the benchmark harness.
#[derive(Clone, Debug, PartialEq)]
pub enum ExperimentError {
    BadConfig(&'static str),
    /// Corruption level outside `[0, 1]`.
    GammaOutOfRange { gamma: f64 },
    /// Cell index outside the configured grid.
    GammaIndexOutOfRange { index: usize, len: usize },
    /// Observation without a binary class reading where one is required.
    NotBinary { index: usize },
    /// Model of the wrong dimension for the plane.
    NotPlanar { dim: usize },
    Fuzzy(FuzzyError),
    Optimize(OptimizeError),
}

impl fmt::Display for ExperimentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExperimentError::BadConfig(reason) => write!(f, "bad experiment config: {reason}"),
            ExperimentError::GammaOutOfRange { gamma } => {
                write!(f, "corruption probability {gamma} outside [0, 1]")
            }
            ExperimentError::GammaIndexOutOfRange { index, len } => {
                write!(f, "gamma index {index} outside grid of length {len}")
            }
            ExperimentError::NotBinary { index } => {
                write!(f, "example {index} has no binary class reading")
            }
            ExperimentError::NotPlanar { dim } => {
                write!(f, "model has dimension {dim}, the benchmark is planar")
            }
            ExperimentError::Fuzzy(e) => write!(f, "{e}"),
            ExperimentError::Optimize(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ExperimentError {}

impl From<FuzzyError> for ExperimentError {
    fn from(e: FuzzyError) -> Self {
        ExperimentError::Fuzzy(e)
    }
}

impl From<OptimizeError> for ExperimentError {
    fn from(e: OptimizeError) -> Self {
        ExperimentError::Optimize(e)
    }
}

/// Draw `n_per_class` points from each class, positives first, labels crisp.
/// Identical bytes for identical `(cfg, seed)`.
pub fn generate_sample(cfg: &ExperimentConfig, seed: u64) -> Result<Vec<Example>, ExperimentError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sd = sqrt(cfg.covariance);
    let mut data = Vec::with_capacity(2 * cfg.n_per_class);
    for (mu, label) in [(cfg.mu_plus, "+1"), (cfg.mu_minus, "-1")] {
        for _ in 0..cfg.n_per_class {
            let z0: f64 = rng.sample(StandardNormal);
            let z1: f64 = rng.sample(StandardNormal);
            let x = [mu[0] + sd * z0, mu[1] + sd * z1];
            data.push(Example::labeled(&x, label)?);
        }
    }
    Ok(data)
}

fn check_gamma(gamma: f64) -> Result<(), ExperimentError> {
    if gamma.is_finite() && (0.0..=1.0).contains(&gamma) {
        Ok(())
    } else {
        Err(ExperimentError::GammaOutOfRange { gamma })
    }
}

/// Hide each label independently with probability `gamma`: the observation
/// becomes fully ambiguous, both classes plausible to degree 1.
pub fn mask_labels(
    data: &[Example],
    gamma: f64,
    seed: u64,
) -> Result<Vec<Example>, ExperimentError> {
    check_gamma(gamma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = alloc::collections::BTreeMap::new();
    m.insert(Label::positive(), 1.0);
    m.insert(Label::negative(), 1.0);
    let ambiguous = FuzzyDatum::FuzzyLabel(DiscreteFuzzyLabel::new(m)?);
    let mut out = Vec::with_capacity(data.len());
    for e in data {
        if rng.random::<f64>() < gamma {
            out.push(Example::new(e.x.clone(), ambiguous.clone()));
        } else {
            out.push(e.clone());
        }
    }
    Ok(out)
}

/// Flip each label independently with probability `gamma` and report the
/// result as a graded observation: degree 1 on the observed class, `gamma`
/// on the other, so the observed class carries confidence `1 - gamma`. The
/// true signs are returned for reference; scoring uses the known class
/// geometry and never touches them.
pub fn flip_labels(
    data: &[Example],
    gamma: f64,
    seed: u64,
) -> Result<(Vec<Example>, Vec<f64>), ExperimentError> {
    check_gamma(gamma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(data.len());
    let mut truth = Vec::with_capacity(data.len());
    for (index, e) in data.iter().enumerate() {
        let y = match e.y.as_binary_discounted() {
            Some((y, w)) if w == 1.0 => y,
            _ => return Err(ExperimentError::NotBinary { index }),
        };
        truth.push(y);
        let flipped = rng.random::<f64>() < gamma;
        let observed = if flipped { -y } else { y };
        let label = DiscreteFuzzyLabel::binary_discounted(Label::from_sign(observed), gamma)?;
        out.push(Example::new(e.x.clone(), FuzzyDatum::FuzzyLabel(label)));
    }
    Ok((out, truth))
}

/// Exact generalization error of a linear classifier under the configured
/// class geometry. The score of a Gaussian input is itself Gaussian, so each
/// class's error is one tail probability; classes are balanced.
///
/// A zero weight vector classifies constantly and errs on exactly one class:
/// error one half, returned without consulting the bias.
pub fn exact_error_rate(
    model: &LinearModel,
    cfg: &ExperimentConfig,
) -> Result<f64, ExperimentError> {
    if model.dim() != 2 {
        return Err(ExperimentError::NotPlanar { dim: model.dim() });
    }
    let norm = sqrt(model.weights[0] * model.weights[0] + model.weights[1] * model.weights[1]);
    if norm == 0.0 {
        return Ok(0.5);
    }
    let scale = sqrt(cfg.covariance) * norm;
    let score_plus = model.weights[0] * cfg.mu_plus[0] + model.weights[1] * cfg.mu_plus[1]
        + model.bias;
    let score_minus = model.weights[0] * cfg.mu_minus[0] + model.weights[1] * cfg.mu_minus[1]
        + model.bias;
    Ok(0.5 * normal_cdf(-score_plus / scale) + 0.5 * normal_cdf(score_minus / scale))
}

/// Observed labels taken at face value: the fully plausible class of each
/// observation as a crisp label, with fully ambiguous observations dropped.
fn observed_crisp(data: &[Example]) -> Result<Vec<Example>, ExperimentError> {
    let mut kept = Vec::new();
    for (index, e) in data.iter().enumerate() {
        let Some((y, w)) = e.y.as_binary_discounted() else {
            return Err(ExperimentError::NotBinary { index });
        };
        if w > 0.0 {
            kept.push(Example::new(e.x.clone(), FuzzyDatum::Label(Label::from_sign(y))));
        }
    }
    Ok(kept)
}

fn fit_method(
    method: Method,
    data: &[Example],
    fit_seed: u64,
) -> Result<LinearModel, ExperimentError> {
    let risk_cfg = RiskConfig::default();
    let opt_cfg = OptimizerConfig {
        learning_rate: FIT_LEARNING_RATE,
        max_iters: FIT_MAX_ITERS,
        grad_tol: FIT_GRAD_TOL,
        restarts: FIT_RESTARTS,
        init_scale: FIT_INIT_SCALE,
        seed: fit_seed,
    };
    let logistic = LossSpec::Generalized(CrispLoss::Margin(MarginLoss::Logistic));
    let dim = data.first().map_or(2, Example::dim);
    let result = match method {
        Method::Fuzzy => fit(data, &logistic, &risk_cfg, &opt_cfg),
        Method::Gmli => fit(data, &LossSpec::GmliLogistic, &risk_cfg, &opt_cfg),
        Method::Standard => {
            let kept = observed_crisp(data)?;
            if kept.is_empty() {
                // Nothing labeled: abstain, like the likelihood baseline on
                // the same cell.
                return Ok(LinearModel::zeros(dim));
            }
            fit(&kept, &logistic, &risk_cfg, &opt_cfg)
        }
    };
    match result {
        Ok((model, _, _)) => Ok(model),
        Err(OptimizeError::NoInformativeExamples) => Ok(LinearModel::zeros(dim)),
        Err(e) => Err(e.into()),
    }
}

/// Random streams for one repetition, derived so cells are independent of
/// evaluation order. Deliberately not keyed by the corruption level: every
/// level of a repetition reuses the same clean sample and the same
/// corruption draws, so raising gamma only extends the set of corrupted
/// points. Columns of the curve are then positively correlated and
/// comparisons across levels are sharper than the per-column error bars
/// suggest (common random numbers).
fn cell_rng(cfg: &ExperimentConfig, which: Which, rep: usize) -> ChaCha8Rng {
    let tag: u64 = match which {
        Which::SemiSupervised => 0,
        Which::LabelNoise => 1,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(tag << 48 | rep as u64);
    rng
}

/// Exact errors of every configured method on one cell: one fresh sample,
/// one corruption, every learner fitted from the same optimizer seed.
pub fn cell_errors(
    which: Which,
    cfg: &ExperimentConfig,
    gamma_index: usize,
    rep: usize,
) -> Result<Vec<f64>, ExperimentError> {
    cfg.validate()?;
    let Some(&gamma) = cfg.gamma_grid.get(gamma_index) else {
        return Err(ExperimentError::GammaIndexOutOfRange {
            index: gamma_index,
            len: cfg.gamma_grid.len(),
        });
    };
    let mut rng = cell_rng(cfg, which, rep);
    let sample_seed = rng.next_u64();
    let corrupt_seed = rng.next_u64();
    let fit_seed = rng.next_u64();

    let clean = generate_sample(cfg, sample_seed)?;
    let corrupted = match which {
        Which::SemiSupervised => mask_labels(&clean, gamma, corrupt_seed)?,
        Which::LabelNoise => flip_labels(&clean, gamma, corrupt_seed)?.0,
    };
    let mut errors = Vec::with_capacity(cfg.methods.len());
    for &method in &cfg.methods {
        let model = fit_method(method, &corrupted, fit_seed)?;
        errors.push(exact_error_rate(&model, cfg)?);
    }
    Ok(errors)
}

/// Fold per-cell errors into curve points; `raw[gamma_index][rep][method]`
/// must match the config's grid, repetition count, and method order. The
/// aggregation order is fixed, so curves are byte-identical however the
/// cells were produced.
pub fn summarize(cfg: &ExperimentConfig, raw: &[Vec<Vec<f64>>]) -> Vec<CurvePoint> {
    let mut out = Vec::with_capacity(cfg.gamma_grid.len() * cfg.methods.len());
    for (gi, &gamma) in cfg.gamma_grid.iter().enumerate() {
        for (mi, &method) in cfg.methods.iter().enumerate() {
            let n = raw[gi].len();
            let mean = raw[gi].iter().map(|r| r[mi]).sum::<f64>() / n as f64;
            let stderr = if n > 1 {
                let ss = raw[gi].iter().map(|r| (r[mi] - mean) * (r[mi] - mean)).sum::<f64>();
                sqrt(ss / (n - 1) as f64 / n as f64)
            } else {
                0.0
            };
            out.push(CurvePoint { gamma, method, mean_error: mean, stderr, repetitions: n });
        }
    }
    out
}

/// Run the full benchmark sequentially. Deterministic per `(which, cfg)`.
pub fn run_experiment(
    which: Which,
    cfg: &ExperimentConfig,
) -> Result<Vec<CurvePoint>, ExperimentError> {
    cfg.validate()?;
    let mut raw = Vec::with_capacity(cfg.gamma_grid.len());
    for gamma_index in 0..cfg.gamma_grid.len() {
        let mut cells = Vec::with_capacity(cfg.repetitions);
        for rep in 0..cfg.repetitions {
            cells.push(cell_errors(which, cfg, gamma_index, rep)?);
        }
        raw.push(cells);
    }
    Ok(summarize(cfg, &raw))
}
