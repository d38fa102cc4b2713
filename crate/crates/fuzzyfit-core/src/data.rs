//! Training examples over imprecise inputs and outputs.

use alloc::string::String;
use alloc::vec::Vec;

use crate::fuzzy::{FuzzyDatum, FuzzyError, Interval, Label};

/// One training example: an input vector whose coordinates are intervals
/// (degenerate ones are precise) and an output observation at any precision.
#[derive(Clone, Debug, PartialEq)]
pub struct Example {
    pub x: Vec<Interval>,
    pub y: FuzzyDatum,
}

impl Example {
    pub fn new(x: Vec<Interval>, y: FuzzyDatum) -> Self {
        Example { x, y }
    }

    /// Precise regression example.
    pub fn precise(x: &[f64], y: f64) -> Result<Self, FuzzyError> {
        Ok(Example { x: precise_coords(x)?, y: FuzzyDatum::real(y)? })
    }

    /// Precise input with an interval-valued output.
    pub fn with_interval(x: &[f64], lo: f64, hi: f64) -> Result<Self, FuzzyError> {
        Ok(Example { x: precise_coords(x)?, y: FuzzyDatum::interval(lo, hi)? })
    }

    /// Precise input with a trapezoidal fuzzy output.
    pub fn with_trapezoid(x: &[f64], a: f64, b: f64, c: f64, d: f64) -> Result<Self, FuzzyError> {
        Ok(Example { x: precise_coords(x)?, y: FuzzyDatum::trapezoid(a, b, c, d)? })
    }

    /// Precise input with a crisp class label.
    pub fn labeled(x: &[f64], label: impl Into<String>) -> Result<Self, FuzzyError> {
        Ok(Example { x: precise_coords(x)?, y: FuzzyDatum::Label(Label::new(label)) })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// Whether every input coordinate is precise.
    pub fn is_precise_x(&self) -> bool {
        self.x.iter().all(Interval::is_degenerate)
    }

    /// Coordinate midpoints.
    pub fn x_mid(&self) -> Vec<f64> {
        self.x.iter().map(Interval::mid).collect()
    }

    /// Coordinate half-widths; all zero for precise inputs.
    pub fn x_rad(&self) -> Vec<f64> {
        self.x.iter().map(Interval::rad).collect()
    }
}

fn precise_coords(x: &[f64]) -> Result<Vec<Interval>, FuzzyError> {
    x.iter().map(|&v| Interval::degenerate(v)).collect()
}
