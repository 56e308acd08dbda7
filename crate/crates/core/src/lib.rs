//! Ends of locally finite graphs and Cayley graphs of finitely generated groups.
//!
//! The crate works on finite *windows* (balls around a basepoint) of lazily
//! generated graphs and builds, on top of them:
//!
//! * the Boolean algebra of vertex sets with bounded edge boundary,
//! * component partitions of the complement of an edge set and the inverse
//!   system they form over the canonical exhaustion by balls,
//! * end threads (finite-depth points of the inverse limit) with their
//!   ultrafilter and Cauchy-filter descriptions,
//! * the left action of the group on sets and ends, convergence probes,
//!   component collapse and pullbacks of end quotients.
//!
//! All results are horizon-relative: a window only certifies what it can see.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod boundary;
pub mod dynamics;
pub mod ends;
mod error;
pub mod graph;
pub mod group;
pub mod quotient;
mod set;
pub mod uniformity;
pub mod window;

pub use error::{Error, Result};
pub use graph::{AdjacencyOracle, FiniteGraph, GraphKind, GraphSpec, VertexKey};
pub use set::VertexSet;
pub use window::{Edge, EdgeId, Limits, Neighborhood, VertexId, Window};
