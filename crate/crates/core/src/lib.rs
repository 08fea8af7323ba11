//! Cubications of compact surfaces as generalized maps, the cubical flips
//! acting on them, and the mod-2 invariant that classifies them up to flips.

pub mod bits;
pub mod canon;
pub mod curves;
pub mod flips;
pub mod gmap;
pub mod homology;
pub mod models;
pub mod qgm;
pub mod search;
pub mod subdivide;
pub mod surface;

pub use canon::{canonical_code, is_isomorphic, CanonicalCode};
pub use gmap::{Dart, GMap, QuadBuilder, QuadGMap, ValidationReport};
pub use surface::{boundary_signature, classify_surface, BoundarySignature, SurfaceClass};
