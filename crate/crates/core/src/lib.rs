//! Spherical means of radial functions, maximal operators over fractal
//! dilation sets, and the associated L^p-improving type-set regions.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod fractal_set;
pub mod norm_probe;
pub mod quadrature;
pub mod radial_operator;
pub mod rational;
pub mod regression;
pub mod type_set_geometry;

pub use error::{Error, Result};
pub use rational::Q;
