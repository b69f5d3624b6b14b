//! Root polytopes of starred quivers.
//!
//! The crate builds the lattice polytope spanned by the arrow vectors of a
//! starred quiver, enumerates its facets through arrow labelings, and
//! computes the fan-level toric data attached to it: face and normal fans,
//! small resolutions, Cartier, Picard and class groups, superpotentials.
//! Posets enter through their Hasse quivers and (marked) order polytopes,
//! plane quivers through their planar duals and flow polytopes.
//!
//! All arithmetic is exact.

pub mod cli;
pub mod error;
pub mod exactlin;
pub mod facets;
pub mod fans;
pub mod planar;
pub mod polytope;
pub mod poset;
pub mod quiver;
pub mod toric;

pub use error::{Error, Result};
