//! Coupled simulation of a soft contact lens resting on a deformable eye.
//!
//! The lens is a thin membrane-shell solved by shooting on its tension ODE; the
//! eye is an axisymmetric linear-elastic body discretised with quadratic
//! triangles. The two are coupled by a staggered fixed-point iteration that
//! alternates lens solves on the current deformed surface with eye solves
//! under the resulting suction pressure.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod config;
pub mod coupling;
pub mod error;
pub mod fem;
pub mod geometry;
pub mod lens_shell;
pub mod mesh;
pub mod output;
pub mod runner;
pub mod spline;
pub mod study;

pub use error::{Error, Result};

/// Micrometres per centimetre; lengths are cm internally, displacements are
/// reported in µm.
pub const UM_PER_CM: f64 = 1e4;
