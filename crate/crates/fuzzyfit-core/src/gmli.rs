//! Likelihood-based losses for set-valued observations, the probabilistic
//! baseline the optimistic set losses are compared against.
//!
//! Where the set losses charge nothing when the prediction is compatible
//! with the observation, these charge the negative log-probability that a
//! Gaussian prediction error lands inside the observed set. The interval
//! loss is therefore never zero, shrinks as the interval widens, and is
//! minimized at the interval midpoint; the binary variant discounts the
//! logistic loss multiplicatively and ignores uninformative observations
//! entirely.

use core::fmt;

use crate::fuzzy::Interval;
use crate::loss::MarginLoss;
use crate::math::{erf, exp, ln, ln_1p, normal_pdf, sigmoid};

/// Configuration of the Gaussian observation model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GmliConfig {
    /// Scale of the Gaussian prediction error.
    pub sigma: f64,
    /// Intervals narrower than this are rejected as degenerate; precise
    /// observations take [`gmli_precise_loss`] instead.
    pub min_width: f64,
}

impl Default for GmliConfig {
    fn default() -> Self {
        GmliConfig { sigma: 1.0, min_width: 1e-6 }
    }
}

/// Errors from the likelihood losses.
#[derive(Clone, Debug, PartialEq)]
pub enum GmliError {
    /// Interval too narrow for the interval likelihood; its probability mass
    /// vanishes and the loss diverges.
    DegenerateInterval { width: f64, min_width: f64 },
    /// Non-positive sigma or min_width.
    BadConfig,
    /// A confidence weight outside `[0, 1]`.
    WeightOutOfRange { w: f64 },
    /// A class sign other than -1 or +1.
    InvalidClassSign { y: f64 },
}

impl fmt::Display for GmliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GmliError::DegenerateInterval { width, min_width } => write!(
                f,
                "interval width {width} below {min_width}: the interval likelihood degenerates; use the precise-observation loss"
            ),
            GmliError::BadConfig => write!(f, "sigma and min_width must be positive"),
            GmliError::WeightOutOfRange { w } => write!(f, "confidence weight {w} outside [0, 1]"),
            GmliError::InvalidClassSign { y } => write!(f, "class sign must be -1 or +1, got {y}"),
        }
    }
}

impl core::error::Error for GmliError {}

const SQRT_2: f64 = core::f64::consts::SQRT_2;
/// `ln(2 pi) / 2`, the constant part of the Gaussian log-density.
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

fn check_config(cfg: &GmliConfig) -> Result<(), GmliError> {
    if cfg.sigma > 0.0 && cfg.min_width > 0.0 {
        Ok(())
    } else {
        Err(GmliError::BadConfig)
    }
}

/// Probability that a `N(yhat, sigma^2)` variable falls in `[lo, hi]`,
/// evaluated through complementary error functions on the side that avoids
/// cancellation.
fn interval_mass(lo: f64, hi: f64, yhat: f64, sigma: f64) -> f64 {
    // In erfc units: P = (erfc(a) - erfc(b)) / 2 over the right tail, with
    // a <= b the standardized distances from yhat.
    let a = (lo - yhat) / (sigma * SQRT_2);
    let b = (hi - yhat) / (sigma * SQRT_2);
    if a + b >= 0.0 {
        // Interval sits at or right of the center: right-tail complements.
        0.5 * (crate::math::erfc(a) - crate::math::erfc(b))
    } else {
        // Mirror image for the left side.
        0.5 * (crate::math::erfc(-b) - crate::math::erfc(-a))
    }
}

/// Negative log-probability that the Gaussian prediction error keeps the
/// observation inside its interval:
/// `-log(Phi((hi - yhat)/sigma) - Phi((lo - yhat)/sigma))`.
///
/// Strictly positive for every bounded interval; decreasing in the interval
/// (wider intervals catch more mass); minimized at the midpoint. A
/// prediction so remote that the mass underflows yields an infinite loss.
pub fn gmli_interval_loss(y: Interval, yhat: f64, cfg: &GmliConfig) -> Result<f64, GmliError> {
    check_config(cfg)?;
    if y.width() < cfg.min_width {
        return Err(GmliError::DegenerateInterval { width: y.width(), min_width: cfg.min_width });
    }
    let p = interval_mass(y.lo(), y.hi(), yhat, cfg.sigma);
    Ok(if p > 0.0 { -ln(p) } else { f64::INFINITY })
}

/// [`gmli_interval_loss`] together with its derivative in the prediction.
///
/// When the mass underflows the derivative falls back to the Gaussian tail
/// asymptote `(yhat - nearest bound) / sigma^2`, which still points back
/// toward the interval.
pub fn gmli_interval_loss_grad(
    y: Interval,
    yhat: f64,
    cfg: &GmliConfig,
) -> Result<(f64, f64), GmliError> {
    check_config(cfg)?;
    if y.width() < cfg.min_width {
        return Err(GmliError::DegenerateInterval { width: y.width(), min_width: cfg.min_width });
    }
    let sigma = cfg.sigma;
    let u = (y.hi() - yhat) / sigma;
    let l = (y.lo() - yhat) / sigma;
    let p = interval_mass(y.lo(), y.hi(), yhat, sigma);
    if p > 0.0 {
        let grad = (normal_pdf(u) - normal_pdf(l)) / (sigma * p);
        Ok((-ln(p), grad))
    } else {
        Ok((f64::INFINITY, (yhat - y.clamp(yhat)) / (sigma * sigma)))
    }
}

/// Interval likelihood loss with its unavoidable part removed: zero at the
/// interval midpoint, the minimizer, and positive elsewhere. The shift is
/// `-log(erf(halfwidth / (sigma sqrt 2)))`, the loss at the midpoint.
pub fn normalized_gmli_interval_loss(
    y: Interval,
    yhat: f64,
    cfg: &GmliConfig,
) -> Result<f64, GmliError> {
    let raw = gmli_interval_loss(y, yhat, cfg)?;
    let at_mid = -ln(erf(y.rad() / (cfg.sigma * SQRT_2)));
    Ok((raw - at_mid).max(0.0))
}

/// Gaussian negative log-likelihood of a precise observation,
/// `((yhat - y) / sigma)^2 / 2 + log sigma + log(2 pi)/2`: the fallback for
/// precise data, where the interval likelihood does not apply.
pub fn gmli_precise_loss(y: f64, yhat: f64, cfg: &GmliConfig) -> Result<f64, GmliError> {
    check_config(cfg)?;
    let z = (yhat - y) / cfg.sigma;
    Ok(0.5 * z * z + ln(cfg.sigma) + HALF_LN_2PI)
}

/// [`gmli_precise_loss`] with its derivative in the prediction.
pub fn gmli_precise_loss_grad(y: f64, yhat: f64, cfg: &GmliConfig) -> Result<(f64, f64), GmliError> {
    let loss = gmli_precise_loss(y, yhat, cfg)?;
    Ok((loss, (yhat - y) / (cfg.sigma * cfg.sigma)))
}

/// Likelihood loss of a binary observation with class sign `y` discounted to
/// confidence `w`: `-log(1 - w sigma(-ys))` for the logistic link.
///
/// Full confidence recovers the logistic margin loss exactly (the same code
/// path, so the two are bit-identical); zero confidence yields the constant
/// 0, which is how uninformative observations drop out of the likelihood.
pub fn gmli_logistic_loss(w: f64, y: f64, s: f64) -> Result<f64, GmliError> {
    check_w_y(w, y)?;
    Ok(gmli_logistic_parts(w, y, s))
}

fn check_w_y(w: f64, y: f64) -> Result<(), GmliError> {
    if !(0.0..=1.0).contains(&w) {
        return Err(GmliError::WeightOutOfRange { w });
    }
    if y != 1.0 && y != -1.0 {
        return Err(GmliError::InvalidClassSign { y });
    }
    Ok(())
}

pub(crate) fn gmli_logistic_parts(w: f64, y: f64, s: f64) -> f64 {
    if w == 0.0 {
        return 0.0;
    }
    let t = y * s;
    if w == 1.0 {
        return MarginLoss::Logistic.loss(t);
    }
    // -log(1 - w sigma(-t)) = log(1 + e^t) - log(1 + e^t - w), arranged so
    // every exponential argument is non-positive.
    if t > 0.0 {
        let et = exp(-t);
        ln_1p(et) - ln_1p((1.0 - w) * et)
    } else {
        let et = exp(t);
        ln_1p(et) - ln_1p(et - w)
    }
}

/// [`gmli_logistic_loss`] with its derivative in the score.
pub fn gmli_logistic_loss_grad(w: f64, y: f64, s: f64) -> Result<(f64, f64), GmliError> {
    check_w_y(w, y)?;
    Ok((gmli_logistic_parts(w, y, s), gmli_logistic_score_deriv(w, y, s)))
}

pub(crate) fn gmli_logistic_score_deriv(w: f64, y: f64, s: f64) -> f64 {
    if w == 0.0 {
        return 0.0;
    }
    let t = y * s;
    if w == 1.0 {
        return y * MarginLoss::Logistic.deriv(t);
    }
    // d/dt [log(1+e^t) - log(1+e^t-w)] = sigma(t) - e^t/(1+e^t-w).
    let dt = if t > 0.0 {
        let et = exp(-t);
        sigmoid(t) - 1.0 / (1.0 + (1.0 - w) * et)
    } else {
        let et = exp(t);
        sigmoid(t) - et / (1.0 + et - w)
    };
    y * dt
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loss::margin_loss;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    // Frozen mpmath references (50 digits): -log(Phi(2) - Phi(-2)) and
    // -log(Phi(0) - Phi(-4)) for the interval [3, 7] at sigma 1.
    const LOSS_37_AT_5: f64 = 0.046_567_912_292_390_16;
    const LOSS_37_AT_7: f64 = 0.693_210_525_049_831_4;

    #[test]
    fn interval_loss_reference_values() {
        let cfg = GmliConfig::default();
        let at5 = gmli_interval_loss(iv(3.0, 7.0), 5.0, &cfg).unwrap();
        assert!((at5 - LOSS_37_AT_5).abs() < 1e-12, "got {at5}");
        let at7 = gmli_interval_loss(iv(3.0, 7.0), 7.0, &cfg).unwrap();
        assert!((at7 - LOSS_37_AT_7).abs() < 1e-12, "got {at7}");
        // Near-total mass inside: loss about 0 but still positive.
        let huge = gmli_interval_loss(iv(-1e12, 1e12), 0.0, &cfg).unwrap();
        assert!(huge >= 0.0 && huge < 1e-12);
    }

    #[test]
    fn interval_loss_is_strictly_positive_and_guards_degeneracy() {
        let cfg = GmliConfig::default();
        for yhat in [-10.0, 0.0, 5.0, 7.0, 30.0] {
            let v = gmli_interval_loss(iv(3.0, 7.0), yhat, &cfg).unwrap();
            assert!(v > 0.0, "loss must stay positive, got {v} at {yhat}");
        }
        assert!(matches!(
            gmli_interval_loss(iv(1.0, 1.0 + 1e-9), 1.0, &cfg),
            Err(GmliError::DegenerateInterval { .. })
        ));
        let bad = GmliConfig { sigma: 0.0, min_width: 1e-6 };
        assert_eq!(gmli_interval_loss(iv(0.0, 1.0), 0.0, &bad), Err(GmliError::BadConfig));
    }

    #[test]
    fn interval_loss_minimum_sits_at_the_midpoint() {
        // Golden-section search over a bracketing interval must land on the
        // midpoint for several shapes and scales.
        let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
        for (lo, hi, sigma) in [(3.0, 7.0, 1.0), (-2.0, 1.0, 0.5), (0.0, 0.1, 2.0)] {
            let cfg = GmliConfig { sigma, min_width: 1e-6 };
            let f = |x: f64| gmli_interval_loss(iv(lo, hi), x, &cfg).unwrap();
            let (mut a, mut b) = (lo - 5.0, hi + 5.0);
            while b - a > 1e-10 {
                let c = b - phi * (b - a);
                let d = a + phi * (b - a);
                if f(c) < f(d) {
                    b = d;
                } else {
                    a = c;
                }
            }
            let mid = 0.5 * (lo + hi);
            assert!((0.5 * (a + b) - mid).abs() < 1e-6, "minimum at {}", 0.5 * (a + b));
        }
    }

    #[test]
    fn wider_intervals_cost_less_everywhere() {
        let cfg = GmliConfig::default();
        let narrow = iv(2.0, 5.0);
        let wide = iv(1.0, 6.0);
        let mut yhat = -4.0;
        while yhat <= 10.0 {
            let n = gmli_interval_loss(narrow, yhat, &cfg).unwrap();
            let w = gmli_interval_loss(wide, yhat, &cfg).unwrap();
            assert!(w < n, "at {yhat}: wide {w} vs narrow {n}");
            yhat += 0.37;
        }
    }

    #[test]
    fn normalized_interval_loss_vanishes_at_the_midpoint() {
        let cfg = GmliConfig::default();
        let v = normalized_gmli_interval_loss(iv(3.0, 7.0), 5.0, &cfg).unwrap();
        assert!(v.abs() < 1e-12);
        let v = normalized_gmli_interval_loss(iv(3.0, 7.0), 7.0, &cfg).unwrap();
        let want = LOSS_37_AT_7 - LOSS_37_AT_5;
        assert!((v - want).abs() < 1e-12, "got {v}, want {want}");
        // A constant shift: differences of losses are preserved.
        for (p, q) in [(4.0, 6.5), (2.0, 9.0)] {
            let raw = gmli_interval_loss(iv(3.0, 7.0), p, &cfg).unwrap()
                - gmli_interval_loss(iv(3.0, 7.0), q, &cfg).unwrap();
            let norm = normalized_gmli_interval_loss(iv(3.0, 7.0), p, &cfg).unwrap()
                - normalized_gmli_interval_loss(iv(3.0, 7.0), q, &cfg).unwrap();
            assert!((raw - norm).abs() < 1e-12);
        }
    }

    #[test]
    fn interval_gradient_matches_finite_differences() {
        let cfg = GmliConfig::default();
        let h = 1e-6;
        for yhat in [-3.0, 2.9, 5.0, 7.2, 12.0] {
            let (_, g) = gmli_interval_loss_grad(iv(3.0, 7.0), yhat, &cfg).unwrap();
            let up = gmli_interval_loss(iv(3.0, 7.0), yhat + h, &cfg).unwrap();
            let dn = gmli_interval_loss(iv(3.0, 7.0), yhat - h, &cfg).unwrap();
            let num = (up - dn) / (2.0 * h);
            assert!(
                (g - num).abs() <= 1e-5 * (1.0 + num.abs()),
                "at {yhat}: analytic {g}, numeric {num}"
            );
        }
    }

    #[test]
    fn precise_fallback_is_the_gaussian_nll() {
        let cfg = GmliConfig::default();
        let v = gmli_precise_loss(2.0, 2.0, &cfg).unwrap();
        assert!((v - HALF_LN_2PI).abs() < 1e-15);
        let v = gmli_precise_loss(2.0, 4.0, &cfg).unwrap();
        assert!((v - (2.0 + HALF_LN_2PI)).abs() < 1e-15);
        let (_, g) = gmli_precise_loss_grad(2.0, 4.0, &cfg).unwrap();
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn logistic_likelihood_reference_values() {
        assert_eq!(gmli_logistic_loss(0.0, 1.0, 3.7).unwrap(), 0.0);
        assert_eq!(gmli_logistic_loss(0.0, -1.0, -2.0).unwrap(), 0.0);
        let v = gmli_logistic_loss(1.0, 1.0, 0.0).unwrap();
        assert!((v - core::f64::consts::LN_2).abs() < 1e-15);
        let v = gmli_logistic_loss(0.5, 1.0, 0.0).unwrap();
        assert!((v - 0.287_682_072_451_780_9).abs() < 1e-15);
        assert!(gmli_logistic_loss(1.5, 1.0, 0.0).is_err());
        assert!(gmli_logistic_loss(0.5, 0.0, 0.0).is_err());
    }

    #[test]
    fn full_confidence_is_bit_identical_to_the_logistic_loss() {
        for y in [-1.0, 1.0] {
            let mut s = -30.0;
            while s <= 30.0 {
                let a = gmli_logistic_loss(1.0, y, s).unwrap();
                let b = margin_loss(MarginLoss::Logistic, y, s).unwrap();
                assert_eq!(a.to_bits(), b.to_bits(), "y={y} s={s}");
                s += 0.618;
            }
        }
    }

    #[test]
    fn discounting_never_exceeds_the_logistic_loss() {
        for w in [0.0, 0.2, 0.5, 0.8, 1.0] {
            for y in [-1.0, 1.0] {
                let mut s = -20.0;
                while s <= 20.0 {
                    let g = gmli_logistic_loss(w, y, s).unwrap();
                    let f = margin_loss(MarginLoss::Logistic, y, s).unwrap();
                    assert!(g <= f + 1e-15, "w={w} y={y} s={s}: {g} > {f}");
                    assert!(g >= 0.0);
                    s += 0.73;
                }
            }
        }
    }

    #[test]
    fn logistic_likelihood_gradient_matches_finite_differences() {
        let h = 1e-6;
        for w in [0.25, 0.6, 1.0] {
            for y in [-1.0, 1.0] {
                for s in [-4.0, -0.8, 0.0, 1.3, 6.0] {
                    let (_, g) = gmli_logistic_loss_grad(w, y, s).unwrap();
                    let up = gmli_logistic_loss(w, y, s + h).unwrap();
                    let dn = gmli_logistic_loss(w, y, s - h).unwrap();
                    let num = (up - dn) / (2.0 * h);
                    assert!(
                        (g - num).abs() < 1e-5,
                        "w={w} y={y} s={s}: analytic {g}, numeric {num}"
                    );
                }
            }
        }
    }

    #[test]
    fn extreme_scores_stay_finite_for_partial_confidence() {
        // w < 1: the loss saturates at -log(1 - w) instead of diverging.
        let v = gmli_logistic_loss(0.5, 1.0, -1000.0).unwrap();
        assert!((v - core::f64::consts::LN_2).abs() < 1e-12);
        let v = gmli_logistic_loss(0.9, -1.0, 800.0).unwrap();
        assert!((v - -ln(0.1)).abs() < 1e-9);
        // And vanishes on the favorable side.
        let v = gmli_logistic_loss(0.9, 1.0, 900.0).unwrap();
        assert_eq!(v, 0.0);
    }
}
