//! Empirical risk over imprecise data, its level-indexed refinement, and
//! comparison of models by risk functions.
//!
//! On precise data the empirical risk is the plain mean loss. On set-valued
//! data it generalizes optimistically: each example contributes the smallest
//! loss over its admissible instantiations, so evaluating the risk also
//! disambiguates the data. On fuzzy data the cuts at every membership level
//! give a whole *risk function* `alpha -> r(alpha)`: the optimistic risk on
//! the level-alpha sets. Cuts are nested, so `r` is non-decreasing; its level
//! integral is the aggregated risk, a scalar that equals the mean fuzzy loss
//! of the examples whenever the same level grid runs on both sides.
//!
//! Risk functions compare pointwise. One model dominates another when it is
//! no worse at every level and better somewhere beyond tolerance; functions
//! that cross are incomparable, which is what makes the Pareto front of
//! models meaningful ([`pareto_front`]).

use alloc::vec::Vec;
use core::fmt;

use crate::data::Example;
use crate::disambiguate::{disambiguate, DisambiguateError, Selection};
use crate::loss::{
    crisp_loss_value, set_loss_xy, CrispLoss, LevelGrid, LossError, DEFAULT_LEVELS,
};
use crate::model::LinearModel;

/// Slack for pointwise risk comparisons: values closer than this count as
/// ties, so functions equal up to rounding come out [`Dominance::Equal`].
pub const DOMINANCE_TOL: f64 = 1e-9;

/// Errors from risk evaluation.
#[derive(Clone, Debug, PartialEq)]
pub enum RiskError {
    /// No examples.
    EmptyDataset,
    /// An imprecise example where a fully precise one is required.
    NonPreciseExample { index: usize },
    /// A fuzzy example where a set-valued one is required.
    FuzzyExample { index: usize },
    /// Risk functions sampled on different level grids.
    GridMismatch,
    Loss(LossError),
}

impl fmt::Display for RiskError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RiskError::EmptyDataset => write!(f, "risk of an empty dataset"),
            RiskError::NonPreciseExample { index } => {
                write!(f, "example {index} is imprecise; this risk needs precise data")
            }
            RiskError::FuzzyExample { index } => {
                write!(f, "example {index} is fuzzy; this risk needs set-valued data")
            }
            RiskError::GridMismatch => {
                write!(f, "risk functions sampled on different level grids")
            }
            RiskError::Loss(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for RiskError {}

impl From<LossError> for RiskError {
    fn from(e: LossError) -> Self {
        RiskError::Loss(e)
    }
}

impl From<DisambiguateError> for RiskError {
    fn from(e: DisambiguateError) -> Self {
        match e {
            DisambiguateError::Loss(l) => RiskError::Loss(l),
            // Risk evaluation only ever cuts at grid levels, which are valid.
            _ => RiskError::Loss(LossError::KindMismatch),
        }
    }
}

/// Complexity functional for regularized risks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Complexity {
    /// No penalty.
    #[default]
    None,
    /// Squared Euclidean norm of the weights; the bias is free.
    SquaredNorm,
}

impl Complexity {
    pub fn of(&self, model: &LinearModel) -> f64 {
        match self {
            Complexity::None => 0.0,
            Complexity::SquaredNorm => model.weight_norm_sq(),
        }
    }
}

/// Settings for risk evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RiskConfig {
    /// Number of midpoint levels for risk functions and their integrals.
    pub alpha_grid_size: usize,
    /// Weight of the complexity penalty.
    pub lambda: f64,
    /// Complexity functional the penalty applies to.
    pub complexity: Complexity,
}

impl Default for RiskConfig {
    fn default() -> Self {
        RiskConfig { alpha_grid_size: DEFAULT_LEVELS, lambda: 0.0, complexity: Complexity::None }
    }
}

impl RiskConfig {
    /// The additive penalty `lambda * complexity(model)`.
    pub fn penalty(&self, model: &LinearModel) -> f64 {
        self.lambda * self.complexity.of(model)
    }

    fn grid(&self) -> Result<LevelGrid, RiskError> {
        Ok(LevelGrid::midpoint(self.alpha_grid_size)?)
    }
}

/// Mean loss of a model on precise data, plus the complexity penalty.
pub fn empirical_risk(
    cfg: &RiskConfig,
    loss: &CrispLoss,
    model: &LinearModel,
    data: &[Example],
) -> Result<f64, RiskError> {
    if data.is_empty() {
        return Err(RiskError::EmptyDataset);
    }
    let mut sum = 0.0;
    for (index, e) in data.iter().enumerate() {
        if !e.is_precise_x() || !e.y.is_precise() {
            return Err(RiskError::NonPreciseExample { index });
        }
        let score = model.predict(&e.x_mid()).map_err(LossError::from)?;
        sum += crisp_loss_value(loss, &e.y.as_crisp().expect("precise"), score)?;
    }
    Ok(sum / data.len() as f64 + cfg.penalty(model))
}

/// Optimistic mean loss of a model on set-valued data, plus the penalty,
/// with the per-example instantiations attaining it.
///
/// Each example pays the smallest loss over its input box and output set.
/// Precise examples are degenerate sets, so on precise data this equals
/// [`empirical_risk`]. Fuzzy examples are rejected; cut them to a level
/// first, or use [`risk_function`].
pub fn generalized_empirical_risk(
    cfg: &RiskConfig,
    loss: &CrispLoss,
    model: &LinearModel,
    data: &[Example],
) -> Result<(f64, Vec<Selection>), RiskError> {
    if data.is_empty() {
        return Err(RiskError::EmptyDataset);
    }
    let mut sum = 0.0;
    let mut picks = Vec::with_capacity(data.len());
    for (index, e) in data.iter().enumerate() {
        if e.y.is_fuzzy() {
            return Err(RiskError::FuzzyExample { index });
        }
        let r = set_loss_xy(loss, model, &e.x, &e.y.cut(1.0))?;
        sum += r.loss;
        picks.push(Selection { x: r.x_star, y: r.y_star, loss: r.loss });
    }
    Ok((sum / data.len() as f64 + cfg.penalty(model), picks))
}

/// A risk function sampled on a level grid.
#[derive(Clone, Debug, PartialEq)]
pub struct RiskFunction {
    /// Membership levels, increasing.
    pub alphas: Vec<f64>,
    /// Risk at each level (penalty included, so levels of one model shift
    /// together and comparisons see the regularized objective).
    pub values: Vec<f64>,
}

impl RiskFunction {
    /// Level integral of the function: the aggregated risk.
    pub fn aggregate(&self) -> f64 {
        let mut sum = 0.0;
        for v in &self.values {
            sum += v;
        }
        sum / self.values.len() as f64
    }
}

/// The risk function of a model on fuzzy data: at each grid level, the
/// optimistic risk of the level cuts, plus the penalty.
///
/// Cuts are nested, so the admissible sets only shrink as the level grows
/// and the values never decrease along the grid.
pub fn risk_function(
    cfg: &RiskConfig,
    loss: &CrispLoss,
    model: &LinearModel,
    data: &[Example],
) -> Result<RiskFunction, RiskError> {
    Ok(risk_function_with_selections(cfg, loss, model, data)?.0)
}

/// [`risk_function`] together with the selection of every example at every
/// level; `selections[j][i]` instantiates example `i` at level `alphas[j]`.
pub fn risk_function_with_selections(
    cfg: &RiskConfig,
    loss: &CrispLoss,
    model: &LinearModel,
    data: &[Example],
) -> Result<(RiskFunction, Vec<Vec<Selection>>), RiskError> {
    if data.is_empty() {
        return Err(RiskError::EmptyDataset);
    }
    let grid = cfg.grid()?;
    let penalty = cfg.penalty(model);
    let n = data.len() as f64;
    let mut values = Vec::with_capacity(grid.len());
    let mut selections = Vec::with_capacity(grid.len());
    for &alpha in grid.alphas() {
        let mut sum = 0.0;
        let mut level = Vec::with_capacity(data.len());
        for e in data {
            let s = disambiguate(loss, model, e, alpha)?;
            sum += s.loss;
            level.push(s);
        }
        values.push(sum / n + penalty);
        selections.push(level);
    }
    Ok((RiskFunction { alphas: grid.alphas().to_vec(), values }, selections))
}

/// Aggregated risk: the level integral of the risk function.
///
/// Equals the mean fuzzy loss of the examples (plus the penalty) when the
/// fuzzy losses run plain quadrature on the same grid, by exchanging the sum
/// over examples with the integral over levels.
pub fn aggregated_risk(
    cfg: &RiskConfig,
    loss: &CrispLoss,
    model: &LinearModel,
    data: &[Example],
) -> Result<f64, RiskError> {
    Ok(risk_function(cfg, loss, model, data)?.aggregate())
}

/// Outcome of the pointwise comparison of two risk functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dominance {
    /// Equal at every level, up to [`DOMINANCE_TOL`].
    Equal,
    /// First no worse everywhere, better somewhere.
    Dominates,
    /// Second no worse everywhere, better somewhere.
    DominatedBy,
    /// Each is better somewhere: the functions cross.
    Incomparable,
}

/// Pointwise comparison of two risk functions on the same level grid.
pub fn dominates(a: &RiskFunction, b: &RiskFunction) -> Result<Dominance, RiskError> {
    if a.alphas.len() != b.alphas.len()
        || a.alphas.iter().zip(&b.alphas).any(|(x, y)| x != y)
    {
        return Err(RiskError::GridMismatch);
    }
    let mut better = false;
    let mut worse = false;
    for (x, y) in a.values.iter().zip(&b.values) {
        if *x < y - DOMINANCE_TOL {
            better = true;
        } else if *x > y + DOMINANCE_TOL {
            worse = true;
        }
    }
    Ok(match (better, worse) {
        (false, false) => Dominance::Equal,
        (true, false) => Dominance::Dominates,
        (false, true) => Dominance::DominatedBy,
        (true, true) => Dominance::Incomparable,
    })
}

/// Indices of the risk functions not strictly dominated by any other.
///
/// Ties survive: functions equal within tolerance all stay on the front.
pub fn pareto_front(fns: &[RiskFunction]) -> Result<Vec<usize>, RiskError> {
    let mut front = Vec::new();
    for (i, a) in fns.iter().enumerate() {
        let mut dominated = false;
        for (j, b) in fns.iter().enumerate() {
            if i != j && dominates(b, a)? == Dominance::Dominates {
                dominated = true;
                break;
            }
        }
        if !dominated {
            front.push(i);
        }
    }
    Ok(front)
}
