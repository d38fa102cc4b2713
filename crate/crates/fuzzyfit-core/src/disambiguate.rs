//! Model-based disambiguation: picking precise values out of set-valued and
//! fuzzy observations.
//!
//! Generalized loss minimization and disambiguation are two sides of one
//! coin: the instantiation a model pays for is the one where the data are
//! cheapest for it, so every evaluation of a set loss also proposes precise
//! values for the imprecise parts of an example. [`disambiguate`] extracts
//! that proposal at one membership level, [`gradual_selection`] traces it
//! across levels (yielding a gradual, level-indexed instantiation of a fuzzy
//! observation), and [`brute_force_instantiation_risk`] recovers the same
//! minimum by exhaustive search over a grid of instantiations, which is the
//! oracle the analytic route is tested against.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::data::Example;
use crate::fuzzy::{check_alpha, CrispValue, FuzzyDatum, FuzzyError, Interval, OutputSet};
use crate::loss::{crisp_loss_value, set_loss_xy, CrispLoss, LevelGrid, LossError};
use crate::model::LinearModel;

/// Most examples the exhaustive search accepts.
pub const BRUTE_FORCE_MAX_EXAMPLES: usize = 6;

/// Most grid points the exhaustive search accepts per set.
pub const BRUTE_FORCE_MAX_POINTS: usize = 50;

/// Errors from disambiguation.
#[derive(Clone, Debug, PartialEq)]
pub enum DisambiguateError {
    Loss(LossError),
    Fuzzy(FuzzyError),
    /// More examples than the exhaustive search bound.
    TooManyExamples { count: usize },
    /// A set's grid exceeds the per-set point bound.
    TooManyPoints { index: usize, count: usize },
    /// The exhaustive search takes set-valued observations, not fuzzy ones.
    FuzzyExample { index: usize },
    /// A grid step that is not a positive finite number.
    InvalidGridStep { step: f64 },
}

impl fmt::Display for DisambiguateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DisambiguateError::Loss(e) => write!(f, "{e}"),
            DisambiguateError::Fuzzy(e) => write!(f, "{e}"),
            DisambiguateError::TooManyExamples { count } => write!(
                f,
                "exhaustive search over {count} examples; the bound is {BRUTE_FORCE_MAX_EXAMPLES}"
            ),
            DisambiguateError::TooManyPoints { index, count } => write!(
                f,
                "set {index} grids to {count} points; the bound is {BRUTE_FORCE_MAX_POINTS}"
            ),
            DisambiguateError::FuzzyExample { index } => {
                write!(f, "example {index} is fuzzy; cut it to a set first")
            }
            DisambiguateError::InvalidGridStep { step } => {
                write!(f, "grid step {step} is not a positive finite number")
            }
        }
    }
}

impl core::error::Error for DisambiguateError {}

impl From<LossError> for DisambiguateError {
    fn from(e: LossError) -> Self {
        DisambiguateError::Loss(e)
    }
}

impl From<FuzzyError> for DisambiguateError {
    fn from(e: FuzzyError) -> Self {
        DisambiguateError::Fuzzy(e)
    }
}

/// A precise instantiation of one example: the input point and output value
/// the model finds cheapest, and the loss it pays there.
#[derive(Clone, Debug, PartialEq)]
pub struct Selection {
    pub x: Vec<f64>,
    pub y: CrispValue,
    pub loss: f64,
}

/// The model's preferred instantiation of one example at membership level
/// `alpha`.
///
/// The output observation is cut at `alpha` (crisp and set-valued
/// observations do not depend on the level) and the joint set minimization
/// of the loss over the input box and the cut picks the precise pair. Ties
/// resolve to the midpoint of the tied region, or the first label in sorted
/// order, so the result is deterministic.
pub fn disambiguate(
    loss: &CrispLoss,
    model: &LinearModel,
    example: &Example,
    alpha: f64,
) -> Result<Selection, DisambiguateError> {
    check_alpha(alpha)?;
    let set = example.y.cut(alpha);
    let r = set_loss_xy(loss, model, &example.x, &set)?;
    Ok(Selection { x: r.x_star, y: r.y_star, loss: r.loss })
}

/// A fuzzy example instantiated level by level.
#[derive(Clone, Debug, PartialEq)]
pub struct GradualSelection {
    /// Membership levels, increasing.
    pub alphas: Vec<f64>,
    /// The selection at each level.
    pub selections: Vec<Selection>,
}

/// Disambiguation of one example across a whole level grid.
///
/// Level cuts are nested, so the admissible sets shrink as `alpha` grows and
/// the selected loss is non-decreasing along the grid; the selected values
/// trace a gradual (level-indexed) instantiation of the fuzzy observation.
pub fn gradual_selection(
    loss: &CrispLoss,
    model: &LinearModel,
    example: &Example,
    grid: &LevelGrid,
) -> Result<GradualSelection, DisambiguateError> {
    let mut selections = Vec::with_capacity(grid.len());
    for &alpha in grid.alphas() {
        selections.push(disambiguate(loss, model, example, alpha)?);
    }
    Ok(GradualSelection { alphas: grid.alphas().to_vec(), selections })
}

/// Exhaustive minimum of the mean loss over a grid of instantiations of
/// set-valued data, with the instantiation attaining it.
///
/// Each interval (input coordinates and interval outputs alike) becomes an
/// evenly spaced grid that always includes both endpoints; label sets
/// enumerate their members. The search then minimizes the loss per example
/// over the product of its grids and averages the minima. Since the data are
/// set-valued, every grid instantiation is fully admissible (its membership,
/// the least membership over its points, is one), so this is a direct oracle
/// for the analytic set-loss route, up to grid resolution on the interval
/// parts.
///
/// `grid_step` is the spacing; `None` sizes it per interval so that the grid
/// has [`BRUTE_FORCE_MAX_POINTS`] points. The search is exponential in the
/// number of sets per example, hence the deliberately tight bounds:
/// at most [`BRUTE_FORCE_MAX_EXAMPLES`] examples and
/// [`BRUTE_FORCE_MAX_POINTS`] points per set.
pub fn brute_force_instantiation_risk(
    loss: &CrispLoss,
    model: &LinearModel,
    data: &[Example],
    grid_step: Option<f64>,
) -> Result<(f64, Vec<Selection>), DisambiguateError> {
    if data.is_empty() {
        return Err(LossError::EmptySet.into());
    }
    if data.len() > BRUTE_FORCE_MAX_EXAMPLES {
        return Err(DisambiguateError::TooManyExamples { count: data.len() });
    }
    if let Some(step) = grid_step {
        if !(step > 0.0) || !step.is_finite() {
            return Err(DisambiguateError::InvalidGridStep { step });
        }
    }
    let mut total = 0.0;
    let mut picks = Vec::with_capacity(data.len());
    for (index, example) in data.iter().enumerate() {
        if matches!(example.y, FuzzyDatum::Trapezoid(_) | FuzzyDatum::FuzzyLabel(_)) {
            return Err(DisambiguateError::FuzzyExample { index });
        }
        let best = minimize_example(loss, model, example, grid_step, index)?;
        total += best.loss;
        picks.push(best);
    }
    Ok((total / data.len() as f64, picks))
}

/// Grid over one interval: evenly spaced by `step`, endpoints always in.
fn interval_grid(
    iv: &Interval,
    step: Option<f64>,
    index: usize,
) -> Result<Vec<f64>, DisambiguateError> {
    if iv.is_degenerate() {
        return Ok(vec![iv.lo()]);
    }
    let Some(step) = step else {
        // Default spacing: exhaust the point budget evenly.
        let n = BRUTE_FORCE_MAX_POINTS;
        let h = iv.width() / (n - 1) as f64;
        return Ok((0..n)
            .map(|k| if k == n - 1 { iv.hi() } else { iv.lo() + k as f64 * h })
            .collect());
    };
    let n = crate::math::floor(iv.width() / step) as usize;
    if n + 1 > BRUTE_FORCE_MAX_POINTS {
        return Err(DisambiguateError::TooManyPoints { index, count: n + 1 });
    }
    let mut points: Vec<f64> =
        (0..=n).map(|k| (iv.lo() + k as f64 * step).min(iv.hi())).collect();
    if *points.last().expect("nonempty") < iv.hi() {
        if points.len() == BRUTE_FORCE_MAX_POINTS {
            return Err(DisambiguateError::TooManyPoints { index, count: points.len() + 1 });
        }
        points.push(iv.hi());
    }
    Ok(points)
}

fn minimize_example(
    loss: &CrispLoss,
    model: &LinearModel,
    example: &Example,
    step: Option<f64>,
    index: usize,
) -> Result<Selection, DisambiguateError> {
    let mut grids = Vec::with_capacity(example.dim());
    for iv in &example.x {
        grids.push(interval_grid(iv, step, index)?);
    }
    let candidates: Vec<CrispValue> = match example.y.cut(1.0) {
        OutputSet::Interval(iv) => {
            interval_grid(&iv, step, index)?.into_iter().map(CrispValue::Real).collect()
        }
        OutputSet::Labels(labels) => {
            if labels.len() > BRUTE_FORCE_MAX_POINTS {
                return Err(DisambiguateError::TooManyPoints { index, count: labels.len() });
            }
            labels.into_iter().map(CrispValue::Label).collect()
        }
    };
    if candidates.is_empty() {
        return Err(LossError::EmptySet.into());
    }

    // Odometer over the coordinate grids.
    let mut idx = vec![0usize; grids.len()];
    let mut best: Option<Selection> = None;
    loop {
        let x: Vec<f64> = idx.iter().zip(&grids).map(|(&k, g)| g[k]).collect();
        let score = model.predict(&x).map_err(LossError::from)?;
        for y in &candidates {
            let value = crisp_loss_value(loss, y, score)?;
            if best.as_ref().map_or(true, |b| value < b.loss) {
                best = Some(Selection { x: x.clone(), y: y.clone(), loss: value });
            }
        }
        // Advance; rightmost digit fastest.
        let mut pos = grids.len();
        loop {
            if pos == 0 {
                return Ok(best.expect("candidates nonempty"));
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < grids[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}
