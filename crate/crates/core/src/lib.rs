//! Constructive pipeline for computing large collinear sets in planar
//! triangulations: build the dual, find a long cycle, classify faces against
//! it, grow the caressed count by cycle surgery, and extract a proper good
//! curve certifying the set.

pub mod auxtrees;
pub mod classify;
pub mod curve;
pub mod cycles;
pub mod dual;
pub mod embedding;
pub mod error;
pub mod generate;
pub mod pipeline;
pub mod render;
pub mod surgery;

pub use error::{Error, Result};
