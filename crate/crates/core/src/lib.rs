//! Dimer coverings of the square lattice with diagonal impurities.
//!
//! The lattice Γ is ℤ² with unit edges and, between white points
//! (`x + y` even), diagonal edges. A dimer covering of a finite subgraph may
//! use diagonal edges ("impurities"). This crate builds the graphs attached to
//! a simply connected region, enumerates and samples coverings, draws their
//! slit-curves, maps coverings to spanning-tree pairs, and computes impurity
//! probabilities exactly from a Laplacian system.

#![no_std]

#[macro_use]
extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod covering;
pub mod kirchhoff;
pub mod lattice;
pub mod moves;
pub mod oracle;
pub mod sampler;
pub mod slits;
pub mod temperley;

pub use covering::{validate_covering, CoveringError, DimerCovering};
pub use lattice::{
    build_normal_graph, build_region, Bond, Edge, EdgeKind, LatticeGraph, Midpoint, NormalGraph,
    Region, RegionError, TemperleyTriple, Vertex, VertexClass,
};
pub use moves::{LocalMove, MoveKind, MoveSite};
