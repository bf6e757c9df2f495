//! Spherical means A_t f(x) of radial functions through the one-dimensional
//! kernel reduction, the maximal operator over a dilation grid, norms and
//! the pointwise decomposition operators.

mod decomposition;
mod kernel;
mod mean;
mod monte_carlo;
mod norms;
mod profile;

pub use decomposition::{
    circular_components, circular_indicator_components, decomposition_components,
    higher_components, Component, ComponentValues,
};
pub use kernel::{calibrate_normalization, kernel, normalization_constant};
pub use mean::{grid_size, maximal_value, spherical_mean, spherical_mean_with_error, DilationGrid, MaximalValue};
pub use monte_carlo::{monte_carlo_mean, MonteCarloEstimate};
pub use norms::{lorentz_level_integral, lp_norm, mu_d, weak_lq_quasinorm, Norm};
pub use profile::{Monomial, Piece, RadialProfile, Term};
