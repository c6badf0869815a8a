//! Packing colorings of the hexagonal, square and triangular lattices.
//!
//! Upper bounds are established by building periodic colorings from sublattice
//! subdivisions and checking them vertex by vertex; lower and infinite bounds
//! come from exact rational density sums.

pub mod bounds;
pub mod coloring;
pub mod density;
pub mod lattice;
pub mod packings;

pub use density::{Rational, SequenceSpec};
pub use lattice::{distance, LatticeKind, Vertex, Window};
pub use packings::{LinearPackingSpec, SubdivisionScheme};
