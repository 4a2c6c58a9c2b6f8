//! A-priori power analysis for cluster analysis.
//!
//! Answers "how many observations do I need before a clustering pipeline can
//! recover the subgroup structure I expect?" by Monte-Carlo simulation:
//! generate synthetic populations with known subgroups, sample datasets at a
//! candidate N, run a clustering pipeline, and count how often the structure
//! is recovered.

pub mod cluster;
pub mod config;
pub mod datagen;
pub mod error;
pub mod io;
pub mod numeric;
pub mod power;
pub mod reduce;
pub mod seed;
pub mod validate;

pub use error::{Error, Result};
