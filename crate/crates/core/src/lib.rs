//! Combinatorial patchworking of T-manifolds.
//!
//! Real phase structures on unimodular triangulations of lattice polytopes,
//! the glued space of mirrored copies, the canonical cell complex of the
//! resulting T-manifold with its F2 homology, stable intersection of phase
//! structures, and the combinatorial bounds on the number of components.

pub mod bounds;
pub mod complex;
pub mod error;
pub mod f2;
pub mod families;
pub mod glued;
pub mod homology;
pub mod intersection;
pub mod io;
pub mod lattice;
pub mod maxcurve;
pub mod mesh;
pub mod phase;
pub mod planarity;
pub mod poly;

pub use error::{Error, Result};
