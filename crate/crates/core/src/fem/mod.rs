//! Axisymmetric linear elasticity of the eye with six-node triangles.

mod assembly;
pub mod element;
mod field;
pub mod quadrature;
mod stress;
mod surface;

pub use assembly::{element_matrices, DofMap, ElasticSystem, LoadVector, SurfaceTraction};
pub use field::{DisplacementField, SurfaceSample};
pub use stress::{recover_stresses, traction_component, von_mises, StressField, StripValue};
pub use surface::{DeformedSurface, RadialMap, DEFAULT_SURFACE_KNOTS, DEFAULT_SURFACE_SPAN};
