//! Compact dilation sets E ⊂ [1,2] stored as exact rational intervals,
//! their covering numbers and dimension estimates.

mod dimension;
mod generator;
mod set;

pub use dimension::{estimate_dimensions, DimensionReport, MIN_WINDOW_RATIO};
pub use generator::FractalGenerator;
pub use set::{FractalSet, Interval};
