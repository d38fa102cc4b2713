//! Base losses and their generalizations to set-valued and fuzzy data.
//!
//! The generalization principle is optimistic: against a set `Y` of
//! admissible values a prediction pays the *smallest* loss over the set,
//! `min { L(y, yhat) : y in Y }`, and against a fuzzy observation it pays
//! the integral of that set loss over the level cuts. The minimizing value
//! is the disambiguation the current model proposes.
//!
//! For the absolute loss these integrals collapse to closed forms: a
//! triangular observation yields the Huber loss, an interval the
//! epsilon-insensitive loss, and a general trapezoid an insensitive core
//! with quadratic ramps that turn linear beyond the support
//! ([`closed_form_fuzzy_l1`]). For binary margin losses the fuzzy loss
//! collapses to a confidence-weighted mix of the plain loss and its
//! symmetrized version ([`fuzzy_margin_loss`]), and interval-valued inputs
//! shift the margin argument by the score radius
//! ([`shifted_margin_loss`]). Everything else goes through level-grid
//! quadrature with a configurable number of levels.

use alloc::vec::Vec;
use core::fmt;

use crate::fuzzy::{
    CrispValue, DiscreteFuzzyLabel, FuzzyDatum, Interval, Label, OutputSet, Trapezoid,
};
use crate::math::{exp, sign, sigmoid, softplus};
use crate::model::{LinearModel, ModelError};

/// Errors from loss evaluation.
#[derive(Clone, Debug, PartialEq)]
pub enum LossError {
    /// Real/label operands mixed, or a loss applied to the wrong kind.
    KindMismatch,
    /// The candidate set was empty.
    EmptySet,
    /// A fuzzy-real operation applied to label-kind data.
    LabelKind,
    /// A confidence weight outside `[0, 1]`.
    WeightOutOfRange { w: f64 },
    /// A negative score radius.
    NegativeShift { d: f64 },
    /// A class sign other than -1 or +1.
    InvalidClassSign { y: f64 },
    /// A margin loss met a label that is not one of the binary classes.
    NonBinaryLabel,
    /// A level grid with no levels.
    ZeroLevels,
    /// Model application failed (dimension mismatch).
    Model(ModelError),
}

impl fmt::Display for LossError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LossError::KindMismatch => write!(f, "loss operands have incompatible kinds"),
            LossError::EmptySet => write!(f, "candidate set is empty"),
            LossError::LabelKind => {
                write!(f, "fuzzy real loss applied to label-kind data; use the label losses")
            }
            LossError::WeightOutOfRange { w } => {
                write!(f, "confidence weight {w} outside [0, 1]")
            }
            LossError::NegativeShift { d } => write!(f, "score radius {d} is negative"),
            LossError::InvalidClassSign { y } => {
                write!(f, "class sign must be -1 or +1, got {y}")
            }
            LossError::NonBinaryLabel => {
                write!(f, "margin losses require the binary alphabet {{+1, -1}}")
            }
            LossError::ZeroLevels => write!(f, "level grid needs at least one level"),
            LossError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for LossError {}

impl From<ModelError> for LossError {
    fn from(e: ModelError) -> Self {
        LossError::Model(e)
    }
}

/// A conventional loss on precise values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseLoss {
    /// Absolute loss `|y - yhat|` on reals.
    L1,
    /// Squared loss `(y - yhat)^2` on reals.
    L2,
    /// Indicator of inequality, on labels or reals.
    ZeroOne,
}

/// Loss of a precise prediction against a precise observation.
///
/// Both operands must be of the same kind; the real losses apply to reals,
/// the 0/1 loss to either kind.
pub fn base_loss(kind: BaseLoss, y: &CrispValue, yhat: &CrispValue) -> Result<f64, LossError> {
    match (kind, y, yhat) {
        (BaseLoss::L1, CrispValue::Real(y), CrispValue::Real(p)) => Ok((y - p).abs()),
        (BaseLoss::L2, CrispValue::Real(y), CrispValue::Real(p)) => Ok((y - p) * (y - p)),
        (BaseLoss::ZeroOne, CrispValue::Real(y), CrispValue::Real(p)) => {
            Ok(if y == p { 0.0 } else { 1.0 })
        }
        (BaseLoss::ZeroOne, CrispValue::Label(y), CrispValue::Label(p)) => {
            Ok(if y == p { 0.0 } else { 1.0 })
        }
        _ => Err(LossError::KindMismatch),
    }
}

/// A margin loss `f(t)` of the margin `t = y s`: nonnegative and
/// non-increasing, so larger margins are never penalized more.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MarginLoss {
    /// `max(1 - t, 0)`.
    Hinge,
    /// `exp(-t)`.
    Exponential,
    /// `log(1 + exp(-t))`.
    Logistic,
}

impl MarginLoss {
    /// `f(t)`.
    pub fn loss(&self, t: f64) -> f64 {
        match self {
            MarginLoss::Hinge => (1.0 - t).max(0.0),
            MarginLoss::Exponential => exp(-t),
            MarginLoss::Logistic => softplus(-t),
        }
    }

    /// `f'(t)`, with the zero subgradient at the hinge kink.
    pub fn deriv(&self, t: f64) -> f64 {
        match self {
            MarginLoss::Hinge => {
                if t < 1.0 {
                    -1.0
                } else {
                    0.0
                }
            }
            MarginLoss::Exponential => -exp(-t),
            MarginLoss::Logistic => -sigmoid(-t),
        }
    }
}

/// Margin loss `f(y s)` of a real score against a crisp class sign.
pub fn margin_loss(kind: MarginLoss, y: f64, s: f64) -> Result<f64, LossError> {
    check_sign(y)?;
    Ok(kind.loss(y * s))
}

fn check_sign(y: f64) -> Result<(), LossError> {
    if y == 1.0 || y == -1.0 {
        Ok(())
    } else {
        Err(LossError::InvalidClassSign { y })
    }
}

fn check_weight(w: f64) -> Result<(), LossError> {
    if (0.0..=1.0).contains(&w) {
        Ok(())
    } else {
        Err(LossError::WeightOutOfRange { w })
    }
}

/// Either family of crisp losses, for the operations that accept both.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrispLoss {
    Base(BaseLoss),
    Margin(MarginLoss),
}

/// Loss of a precise observation against a score.
///
/// Real observations go through the base losses on the score itself; label
/// observations through the sign classification (0/1 loss) or the margin
/// losses. Agrees with [`set_loss_xy`] on singleton sets.
pub(crate) fn crisp_loss_value(
    loss: &CrispLoss,
    y: &CrispValue,
    score: f64,
) -> Result<f64, LossError> {
    match (loss, y) {
        (CrispLoss::Base(kind), CrispValue::Real(_)) => {
            base_loss(*kind, y, &CrispValue::Real(score))
        }
        (CrispLoss::Base(BaseLoss::ZeroOne), CrispValue::Label(_)) => {
            base_loss(BaseLoss::ZeroOne, y, &CrispValue::Label(Label::from_sign(score)))
        }
        (CrispLoss::Margin(f), CrispValue::Label(l)) => {
            let sign = l.to_sign().ok_or(LossError::NonBinaryLabel)?;
            margin_loss(*f, sign, score)
        }
        _ => Err(LossError::KindMismatch),
    }
}

/// Quadrature settings for level integrals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossConfig {
    /// Number of midpoint levels on `(0, 1]`.
    pub levels: usize,
    /// Use exact closed forms where the (loss, shape) pair has one. Turned
    /// off, every fuzzy loss runs the level grid, which is what the
    /// sum-integral exchange identities compare against.
    pub closed_forms: bool,
}

impl Default for LossConfig {
    fn default() -> Self {
        LossConfig { levels: DEFAULT_LEVELS, closed_forms: true }
    }
}

/// Default number of quadrature levels.
pub const DEFAULT_LEVELS: usize = 101;

/// The uniform midpoint grid `alpha_j = (j + 1/2) / K` on `(0, 1)`.
///
/// All level integrals in the crate run over this grid, so risk functions
/// built with equal level counts share their levels exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelGrid {
    alphas: Vec<f64>,
}

impl LevelGrid {
    pub fn midpoint(levels: usize) -> Result<Self, LossError> {
        if levels == 0 {
            return Err(LossError::ZeroLevels);
        }
        let k = levels as f64;
        Ok(LevelGrid {
            alphas: (0..levels).map(|j| (j as f64 + 0.5) / k).collect(),
        })
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// Midpoint-rule integral over `(0, 1)`: the mean of the values.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.alphas.len());
        values.iter().sum::<f64>() / self.alphas.len() as f64
    }
}

/// Loss and minimizer of a set-valued observation.
#[derive(Clone, Debug, PartialEq)]
pub struct SetLoss {
    pub loss: f64,
    /// The element of the set attaining the minimum.
    pub minimizer: CrispValue,
}

/// Smallest base loss over a set of admissible values, with its minimizer.
///
/// For the convex real losses on an interval this is the loss of the
/// prediction clamped to the interval: zero inside, distance-based outside.
/// When several values tie (the 0/1 loss off the set), the minimizer is the
/// midpoint of the tied interval, or the lexicographically first label of a
/// tied label set.
///
/// # Examples
///
/// ```
/// use fuzzyfit_core::fuzzy::{CrispValue, Interval, OutputSet};
/// use fuzzyfit_core::loss::{set_loss, BaseLoss};
///
/// let y = OutputSet::Interval(Interval::new(3.0, 7.0).unwrap());
/// let inside = set_loss(BaseLoss::L1, &y, &CrispValue::Real(5.0)).unwrap();
/// assert_eq!(inside.loss, 0.0);
/// assert_eq!(inside.minimizer, CrispValue::Real(5.0));
/// let outside = set_loss(BaseLoss::L1, &y, &CrispValue::Real(8.0)).unwrap();
/// assert_eq!(outside.loss, 1.0);
/// assert_eq!(outside.minimizer, CrispValue::Real(7.0));
/// ```
pub fn set_loss(kind: BaseLoss, set: &OutputSet, yhat: &CrispValue) -> Result<SetLoss, LossError> {
    match (set, yhat) {
        (OutputSet::Interval(iv), CrispValue::Real(p)) => {
            let (loss, y_star) = match kind {
                BaseLoss::L1 => (iv.distance(*p), iv.clamp(*p)),
                BaseLoss::L2 => {
                    let e = iv.distance(*p);
                    (e * e, iv.clamp(*p))
                }
                BaseLoss::ZeroOne => {
                    if iv.contains(*p) {
                        (0.0, *p)
                    } else {
                        // A miss costs 1 everywhere on the interval, so the
                        // whole interval ties; report its midpoint.
                        (1.0, iv.mid())
                    }
                }
            };
            Ok(SetLoss { loss, minimizer: CrispValue::Real(y_star) })
        }
        (OutputSet::Labels(labels), CrispValue::Label(p)) => {
            if labels.is_empty() {
                return Err(LossError::EmptySet);
            }
            if kind != BaseLoss::ZeroOne {
                return Err(LossError::KindMismatch);
            }
            if labels.contains(p) {
                Ok(SetLoss { loss: 0.0, minimizer: CrispValue::Label(p.clone()) })
            } else {
                let first = labels.iter().next().expect("nonempty").clone();
                Ok(SetLoss { loss: 1.0, minimizer: CrispValue::Label(first) })
            }
        }
        _ => Err(LossError::KindMismatch),
    }
}

/// Loss and minimizing instantiation of a joint input-output set.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxSetLoss {
    pub loss: f64,
    /// Input point of the box attaining the minimum.
    pub x_star: Vec<f64>,
    /// Output value attaining the minimum.
    pub y_star: CrispValue,
}

/// Smallest loss over an input box times an output set:
/// `min { L(y, M(x)) : x in X, y in Y }`.
///
/// The score of a linear model over a box ranges exactly over the interval
/// `[s - d, s + d]` with midpoint score `s` and radius `d = sum |w_j| rad_j`,
/// so the joint minimum reduces to a minimum over that interval. For margin
/// losses the observation set holds class signs and the loss compares them
/// against the score; for the 0/1 loss on labels it compares them against the
/// sign classification. Tied minimizers resolve to the midpoint of the tied
/// region on real sets and to the first label in sorted order on label sets.
pub fn set_loss_xy(
    loss: &CrispLoss,
    model: &LinearModel,
    x: &[Interval],
    y_set: &OutputSet,
) -> Result<BoxSetLoss, LossError> {
    let (s_mid, s_rad) = model.score_parts(x)?;
    let s_lo = s_mid - s_rad;
    let s_hi = s_mid + s_rad;
    let at = |target: f64| -> Result<Vec<f64>, LossError> {
        Ok(model.input_attaining(x, target)?)
    };
    match (loss, y_set) {
        (CrispLoss::Base(kind), OutputSet::Interval(y)) => {
            // Gap between the score interval and the observation interval.
            let overlap = s_hi >= y.lo() && s_lo <= y.hi();
            let (s_star, y_star) = if overlap {
                // Zero-loss pairs fill the intersection; take its midpoint.
                let m = 0.5 * (s_lo.max(y.lo()) + s_hi.min(y.hi()));
                (m, m)
            } else if *kind == BaseLoss::ZeroOne {
                // Every pair misses, so every pair ties.
                (s_mid, y.mid())
            } else if s_hi < y.lo() {
                (s_hi, y.lo())
            } else {
                (s_lo, y.hi())
            };
            let e = (y_star - s_star).abs();
            let loss = match kind {
                BaseLoss::L1 => e,
                BaseLoss::L2 => e * e,
                BaseLoss::ZeroOne => {
                    if overlap {
                        0.0
                    } else {
                        1.0
                    }
                }
            };
            Ok(BoxSetLoss { loss, x_star: at(s_star)?, y_star: CrispValue::Real(y_star) })
        }
        (CrispLoss::Base(BaseLoss::ZeroOne), OutputSet::Labels(labels)) => {
            if labels.is_empty() {
                return Err(LossError::EmptySet);
            }
            // Classifications reachable over the box: score >= 0 gives the
            // positive class, score < 0 the negative one.
            for label in labels {
                let reachable = match label.to_sign() {
                    Some(y) if y > 0.0 => s_hi >= 0.0,
                    Some(_) => s_lo < 0.0,
                    None => false,
                };
                if reachable {
                    let s_star = if label.to_sign() == Some(1.0) {
                        s_hi.max(0.0).min(s_hi)
                    } else {
                        s_lo
                    };
                    return Ok(BoxSetLoss {
                        loss: 0.0,
                        x_star: at(s_star)?,
                        y_star: CrispValue::Label(label.clone()),
                    });
                }
            }
            let first = labels.iter().next().expect("nonempty").clone();
            Ok(BoxSetLoss { loss: 1.0, x_star: at(s_mid)?, y_star: CrispValue::Label(first) })
        }
        (CrispLoss::Margin(f), OutputSet::Labels(labels)) => {
            if labels.is_empty() {
                return Err(LossError::EmptySet);
            }
            // Per class sign y the box minimum is f(y s + d); labels iterate
            // in sorted order, so ties go to the positive class.
            let mut best: Option<(f64, f64, &Label)> = None;
            for label in labels {
                let y = label.to_sign().ok_or(LossError::NonBinaryLabel)?;
                let value = f.loss(y * s_mid + s_rad);
                if best.as_ref().map_or(true, |(b, _, _)| value < *b) {
                    best = Some((value, s_mid + y * s_rad, label));
                }
            }
            let (loss, s_star, label) = best.expect("nonempty");
            Ok(BoxSetLoss { loss, x_star: at(s_star)?, y_star: CrispValue::Label(label.clone()) })
        }
        _ => Err(LossError::KindMismatch),
    }
}

/// Level integral of the set loss of a fuzzy real observation:
/// `integral_0^1 min { L(y, yhat) : y in [Y]_alpha } d alpha`.
///
/// Uses the absolute-loss closed form when the configuration allows;
/// otherwise (and for the other base losses on trapezoids) runs the midpoint
/// level grid.
pub fn fuzzy_loss(
    kind: BaseLoss,
    y: &FuzzyDatum,
    yhat: f64,
    cfg: &LossConfig,
) -> Result<f64, LossError> {
    if y.is_label_kind() {
        return Err(LossError::LabelKind);
    }
    if cfg.levels == 0 {
        return Err(LossError::ZeroLevels);
    }
    let pred = CrispValue::Real(yhat);
    if cfg.closed_forms {
        match y {
            FuzzyDatum::Trapezoid(t) if kind == BaseLoss::L1 => {
                return Ok(closed_form_fuzzy_l1(t, yhat));
            }
            // Cuts of precise and interval data do not depend on the level.
            FuzzyDatum::Real(_) | FuzzyDatum::Interval(_) => {
                return Ok(set_loss(kind, &y.cut(1.0), &pred)?.loss);
            }
            _ => {}
        }
    }
    let k = cfg.levels as f64;
    let mut sum = 0.0;
    for j in 0..cfg.levels {
        let alpha = (j as f64 + 0.5) / k;
        sum += set_loss(kind, &y.cut(alpha), &pred)?.loss;
    }
    Ok(sum / k)
}

/// One side of the trapezoidal absolute-loss closed form: excess `e` over
/// the core edge against a ramp of width `width`.
///
/// Insensitive for `e <= 0`, quadratic `e^2 / (2 width)` across the ramp,
/// linear `e - width/2` beyond it; a zero-width ramp is the insensitive
/// limit `max(e, 0)`.
pub(crate) fn l1_ramp(e: f64, width: f64) -> f64 {
    if e <= 0.0 {
        0.0
    } else if e <= width {
        e * e / (2.0 * width)
    } else if width > 0.0 {
        e - width / 2.0
    } else {
        e
    }
}

/// Derivative of [`l1_ramp`] in `e`; continuous except at `e = 0` when
/// `width = 0`, where the zero subgradient is taken.
pub(crate) fn l1_ramp_deriv(e: f64, width: f64) -> f64 {
    if e <= 0.0 {
        0.0
    } else if e <= width {
        e / width
    } else {
        1.0
    }
}

/// Exact level integral of the absolute set loss of a trapezoidal
/// observation: zero on the core, one quadratic ramp per side, linear with
/// slope one beyond the support.
///
/// A triangular observation recovers the Huber loss with threshold equal to
/// its spread; an interval recovers the epsilon-insensitive loss; mixed and
/// asymmetric shapes combine their two sides independently.
///
/// # Examples
///
/// ```
/// use fuzzyfit_core::fuzzy::Trapezoid;
/// use fuzzyfit_core::loss::closed_form_fuzzy_l1;
///
/// // Triangular at 5 with spread 2: the Huber loss around 5.
/// let tri = Trapezoid::triangular(3.0, 5.0, 7.0).unwrap();
/// assert_eq!(closed_form_fuzzy_l1(&tri, 6.0), 0.25);
/// assert_eq!(closed_form_fuzzy_l1(&tri, 9.0), 3.0);
/// // Interval: epsilon-insensitive.
/// let iv = Trapezoid::new(3.0, 3.0, 7.0, 7.0).unwrap();
/// assert_eq!(closed_form_fuzzy_l1(&iv, 8.0), 1.0);
/// ```
pub fn closed_form_fuzzy_l1(y: &Trapezoid, yhat: f64) -> f64 {
    // At most one side is active: the prediction is right of the core, left
    // of it, or inside (both sides zero).
    l1_ramp(yhat - y.c(), y.d() - y.c()) + l1_ramp(y.b() - yhat, y.b() - y.a())
}

/// Level integral of the 0/1 set loss of a fuzzy label: one minus the
/// membership degree of the predicted label.
///
/// A prediction is free exactly when it is fully plausible; predicting a
/// class discounted to degree `1 - w` costs `w`, and a completely ambiguous
/// observation costs nothing for any prediction.
pub fn fuzzy_label_loss(y: &DiscreteFuzzyLabel, yhat: &Label) -> f64 {
    1.0 - y.membership(yhat)
}

/// Confidence-discounted margin loss
/// `f_w(y, s) = w f(y s) + (1 - w) f(|s|)`: the level integral of the
/// margin set loss of a binary observation with class sign `y` and
/// confidence `w`.
///
/// With full confidence this is the plain margin loss. With none it is the
/// symmetric part alone, which rewards *any* confident score: it falls in
/// `|s|` and peaks at the decision boundary, so unlabeled instances push the
/// boundary away from themselves.
pub fn fuzzy_margin_loss(f: MarginLoss, w: f64, y: f64, s: f64) -> Result<f64, LossError> {
    check_weight(w)?;
    check_sign(y)?;
    Ok(fuzzy_margin_parts(f, w, y, s))
}

pub(crate) fn fuzzy_margin_parts(f: MarginLoss, w: f64, y: f64, s: f64) -> f64 {
    w * f.loss(y * s) + (1.0 - w) * f.loss(s.abs())
}

/// Margin loss of an interval-valued input: the box minimum
/// `min { f(y M(x)) : x in X }` equals `f(y s + d)` for the midpoint score
/// `s` and score radius `d` of the box.
pub fn shifted_margin_loss(f: MarginLoss, y: f64, s: f64, d: f64) -> Result<f64, LossError> {
    check_sign(y)?;
    if d < 0.0 {
        return Err(LossError::NegativeShift { d });
    }
    Ok(f.loss(y * s + d))
}

/// The fully generalized binary margin loss: class sign `y` at confidence
/// `w`, midpoint score `s`, score radius `d`. Reduces to
/// [`fuzzy_margin_loss`] at `d = 0` and to [`shifted_margin_loss`] at
/// `w = 1`.
pub fn discounted_box_margin_loss(
    f: MarginLoss,
    w: f64,
    y: f64,
    s: f64,
    d: f64,
) -> Result<f64, LossError> {
    check_weight(w)?;
    check_sign(y)?;
    if d < 0.0 {
        return Err(LossError::NegativeShift { d });
    }
    Ok(discounted_box_margin_parts(f, w, y, s, d))
}

pub(crate) fn discounted_box_margin_parts(f: MarginLoss, w: f64, y: f64, s: f64, d: f64) -> f64 {
    w * f.loss(y * s + d) + (1.0 - w) * f.loss(s.abs() + d)
}

/// Derivative of [`discounted_box_margin_parts`] in `(s, d)`, using the
/// zero-subgradient convention of [`crate::math::sign`] at `s = 0`.
pub(crate) fn discounted_box_margin_grad(
    f: MarginLoss,
    w: f64,
    y: f64,
    s: f64,
    d: f64,
) -> (f64, f64) {
    let g1 = w * f.deriv(y * s + d);
    let g2 = (1.0 - w) * f.deriv(s.abs() + d);
    (g1 * y + g2 * sign(s), g1 + g2)
}
