//! Adjacency graphs on conjugacy classes of finite-rank self-adjoint
//! operators, computed with exact arithmetic.
//!
//! An operator `A = Σ a_i P_{X_i}` is stored as its eigen-flag `(X_i)`; two
//! operators of the same class are adjacent when `B − A` has rank 2 and its
//! image and kernel are invariant under both operators. The crate builds
//! these graphs exhaustively over finite hermitian geometries GF(q²)ⁿ and
//! checks constructions by witness over ℚ(i).

pub mod constructions;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod spectral;
pub mod starfield;

pub use error::{Error, Result};
