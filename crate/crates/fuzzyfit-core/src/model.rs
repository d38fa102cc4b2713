//! Linear models over interval-valued inputs.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::fuzzy::{Interval, Label};
use crate::math::sign;

/// Errors from applying a model to data.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelError {
    /// Input dimension differs from the number of weights.
    DimensionMismatch { expected: usize, got: usize },
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::DimensionMismatch { expected, got } => {
                write!(f, "input has {got} coordinates, model expects {expected}")
            }
        }
    }
}

impl core::error::Error for ModelError {}

/// A linear model `x -> w . x + b`, used directly for regression and through
/// its sign for binary classification.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl LinearModel {
    pub fn new(weights: Vec<f64>, bias: f64) -> Self {
        LinearModel { weights, bias }
    }

    /// The zero model of dimension `dim`; predicts 0 everywhere and abstains
    /// (positive class by the sign convention) as a classifier.
    pub fn zeros(dim: usize) -> Self {
        LinearModel { weights: vec![0.0; dim], bias: 0.0 }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Score `w . x + b` of a precise input.
    pub fn predict(&self, x: &[f64]) -> Result<f64, ModelError> {
        self.check_dim(x.len())?;
        let mut s = self.bias;
        for (w, v) in self.weights.iter().zip(x) {
            s += w * v;
        }
        Ok(s)
    }

    /// Midpoint score and score radius over an input box: the score ranges
    /// exactly over `[mid - rad, mid + rad]` with
    /// `rad = sum_j |w_j| rad_j`.
    pub fn score_parts(&self, x: &[Interval]) -> Result<(f64, f64), ModelError> {
        self.check_dim(x.len())?;
        let mut mid = self.bias;
        let mut rad = 0.0;
        for (w, iv) in self.weights.iter().zip(x) {
            mid += w * iv.mid();
            rad += w.abs() * iv.rad();
        }
        Ok((mid, rad))
    }

    /// The exact range of scores over an input box.
    pub fn predict_interval(&self, x: &[Interval]) -> Result<Interval, ModelError> {
        let (mid, rad) = self.score_parts(x)?;
        Ok(Interval::new(mid - rad, mid + rad).expect("score range is ordered"))
    }

    /// Class label by the sign of the score; a score of exactly 0 maps to the
    /// positive class.
    pub fn classify(&self, x: &[f64]) -> Result<Label, ModelError> {
        Ok(Label::from_sign(self.predict(x)?))
    }

    /// Squared Euclidean norm of the weights, bias excluded; the quantity the
    /// ridge penalty acts on.
    pub fn weight_norm_sq(&self) -> f64 {
        self.weights.iter().map(|w| w * w).sum()
    }

    /// An input point of the box whose score is `target`, which must lie in
    /// the box's score range. Coordinates interpolate linearly between the
    /// two extreme vertices, so the returned point is always inside the box.
    pub fn input_attaining(&self, x: &[Interval], target: f64) -> Result<Vec<f64>, ModelError> {
        let (mid, rad) = self.score_parts(x)?;
        let lo_score = mid - rad;
        let hi_score = mid + rad;
        let t = if hi_score > lo_score {
            ((target - lo_score) / (hi_score - lo_score)).clamp(0.0, 1.0)
        } else {
            0.0
        };
        Ok(self
            .weights
            .iter()
            .zip(x)
            .map(|(w, iv)| {
                // Vertex attaining the low score, per coordinate.
                let (lo_v, hi_v) = if sign(*w) >= 0.0 {
                    (iv.lo(), iv.hi())
                } else {
                    (iv.hi(), iv.lo())
                };
                lo_v + t * (hi_v - lo_v)
            })
            .collect())
    }

    fn check_dim(&self, got: usize) -> Result<(), ModelError> {
        if got != self.weights.len() {
            Err(ModelError::DimensionMismatch { expected: self.weights.len(), got })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predict_and_classify() {
        let m = LinearModel::new(vec![2.0, -1.0], 0.5);
        assert_eq!(m.predict(&[1.0, 1.0]).unwrap(), 1.5);
        assert_eq!(m.classify(&[1.0, 1.0]).unwrap(), Label::positive());
        assert_eq!(m.classify(&[-1.0, 1.0]).unwrap(), Label::negative());
        assert!(m.predict(&[1.0]).is_err());
        assert_eq!(m.weight_norm_sq(), 5.0);
        // Score 0 is the positive class.
        let z = LinearModel::zeros(2);
        assert_eq!(z.classify(&[3.0, 4.0]).unwrap(), Label::positive());
    }

    #[test]
    fn score_range_over_a_box() {
        let m = LinearModel::new(vec![1.0, -2.0], 1.0);
        let x = vec![
            Interval::new(0.0, 2.0).unwrap(),  // contributes [0, 2]
            Interval::new(-1.0, 1.0).unwrap(), // contributes [-2, 2]
        ];
        // Coordinate terms span [0, 2] and [-2, 2]; the bias shifts by 1.
        let iv = m.predict_interval(&x).unwrap();
        assert_eq!((iv.lo(), iv.hi()), (-1.0, 5.0));
        let (mid, rad) = m.score_parts(&x).unwrap();
        assert_eq!(mid, 2.0);
        assert_eq!(rad, 3.0);
    }

    #[test]
    fn input_attaining_reaches_the_target_score() {
        let m = LinearModel::new(vec![1.0, -2.0], 1.0);
        let x = vec![Interval::new(0.0, 2.0).unwrap(), Interval::new(-1.0, 1.0).unwrap()];
        for target in [-1.0, -0.5, 1.0, 3.999, 5.0] {
            let p = m.input_attaining(&x, target).unwrap();
            let s = m.predict(&p).unwrap();
            assert!((s - target).abs() < 1e-12, "target {target}, got {s}");
            for (v, iv) in p.iter().zip(&x) {
                assert!(iv.contains(*v));
            }
        }
        // Targets outside the range clamp to the nearest attainable score.
        let p = m.input_attaining(&x, -100.0).unwrap();
        assert!((m.predict(&p).unwrap() - -1.0).abs() < 1e-12);
        // Degenerate box: the only point there is.
        let x = vec![Interval::degenerate(1.0).unwrap(), Interval::degenerate(2.0).unwrap()];
        let p = m.input_attaining(&x, 123.0).unwrap();
        assert_eq!(p, vec![1.0, 2.0]);
    }
}
