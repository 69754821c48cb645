//! Geometric transition from hyperbolic to anti-de Sitter geometry through
//! half-pipe geometry.
//!
//! The crate models the three geometries as projective quadrics in `RP^3`,
//! builds punctured-torus Fuchsian groups from trace coordinates, bends them
//! along weighted multicurves, rescales the bent holonomy towards half-pipe
//! geometry and doubles the resulting convex cores along their boundary.

pub mod bending;
pub mod config;
pub mod doubling;
pub mod error;
pub mod export;
pub mod fuchsian;
pub mod geometry;
pub mod isometry;
pub mod transition;

pub use error::{Error, Result};
pub use geometry::{Geometry, Plane, ProjectivePoint, SpacelikeGeodesicH2};
pub use isometry::{Isometry, IsometryClass, MinkowskiIsometry};
