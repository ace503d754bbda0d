//! Mesh smoothing by geometric element transformation.
//!
//! Triangles are driven towards equilateral shape by rotating scaled
//! vertex-to-centroid vectors; quads, tetrahedra and hexahedra reuse the same
//! map on sub-triangles, closed face surfaces and dual octahedra. See
//! [`smooth`] for the mesh drivers and [`ode`] for the continuous model.

// `!(x > 0.0)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod io;
pub mod mesh;
pub mod ode;
pub mod quality;
pub mod smooth;

pub use error::{Error, Result};
pub use geometry::{AdaptiveParams, Point, Triangle};
pub use mesh::{ElementType, Mesh, OrientationReference};
pub use quality::QualityReport;
pub use smooth::{Guard, SmootherConfig, SmoothingResult};
