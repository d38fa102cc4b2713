//! Loss minimization over imprecise and fuzzy observations.
//!
//! An observation that cannot be pinned down to a single value is modeled as a
//! set (an interval, a subset of labels) or more generally as a fuzzy set whose
//! level cuts form a nested family of such sets. A conventional loss `L` is
//! extended in two steps:
//!
//! * over a set `Y` the loss of a prediction is the *smallest* loss over the
//!   candidates, `min { L(y, yhat) : y in Y }`, which credits the model for
//!   being compatible with at least one admissible value, and
//! * over a fuzzy set it is the integral of that set loss over the level cuts
//!   `[Y]_alpha` for `alpha` in (0, 1].
//!
//! Minimizing the resulting empirical risk simultaneously fits the model and
//! *disambiguates* the data: every level selects the candidate value the
//! current model explains best. The crate provides these losses in closed form
//! where they exist (kinked absolute-error variants, discounted margin
//! losses), by level-grid quadrature otherwise, together with level-wise risk
//! functions, Pareto comparison of models, gradient-based fitting, and the
//! synthetic benchmark generators used to compare against a probabilistic
//! baseline that treats set-valued observations through their likelihood.
//!
//! The crate is `no_std` (with `alloc`); transcendentals come from `libm`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod data;
pub mod disambiguate;
pub mod experiment;
pub mod fuzzy;
pub mod gmli;
pub mod loss;
pub mod math;
pub mod model;
pub mod optimize;
pub mod risk;
