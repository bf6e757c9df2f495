//! Exact vertices and polygons of the L^p-improving regions in the
//! (1/p, 1/q) square, and the theorem-driven radial type sets.

mod point;
mod predict;
mod region;
mod theorem;

pub use point::{vertex, RegionPoint, VertexName};
pub use predict::{critical_functional, predicted_probe_exponents, PredictedExponents, ProbeFamily};
pub use region::{membership, region, Membership, RegionKind, Status, TypeSetRegion};
pub use theorem::{radial_type_set, TypeSetFlags};
