//! Standard-library companion to `fuzzyfit-core`: dataset and model file
//! formats (JSON Lines / JSON), loss specification parsing, CSV emission,
//! and a deterministic parallel driver for the synthetic experiments.

pub use fuzzyfit_core as core;

pub mod io;
pub mod runner;
