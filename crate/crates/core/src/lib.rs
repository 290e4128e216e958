//! Generation of 1-vertex-irreducible (1VI) and 1-particle-irreducible
//! (1PI) multigraphs with exact inverse-symmetry-factor weights.
//!
//! The crate builds weighted sums of vertex-numbered multigraphs through a
//! coalgebraic recursion (vertex splitting and gluing on blocks), dresses
//! them with self-loops and labeled external legs, evaluates them under
//! zero-dimensional Feynman rules, and checks everything against an
//! independent brute-force enumeration.

pub mod error;
pub mod eval;
pub mod graph;
pub mod hopf;
pub mod json;
pub mod ops;
pub mod oracle;
pub mod rational;
pub mod recursion;
pub mod sum;

pub use error::{Error, Result};
pub use graph::{Block, BlockDecomposition, Classification, Graph, Label};
pub use hopf::{Monomial, TensorSum};
pub use rational::{Int, Rational};
pub use sum::{ClassMap, FeynmanClass, GraphSum};
