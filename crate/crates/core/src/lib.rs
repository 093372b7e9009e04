//! Core algorithms for intersection graphs of similarly sized fat objects.
//!
//! The crate is organized around one structural fact: such a graph always has
//! a small vertex set whose removal leaves components of small independence
//! number. [`geometry::slab_separator`] computes that set from a geometric
//! representation, [`modulator`] packages it as a decomposition, and the two
//! solvers ([`subcoloring`], [`cutuncut`]) run dynamic programs over it.
//! [`reduction`] goes the other way and compiles Monotone NAE-3-SAT formulas
//! into hard instances, both as abstract graphs and as geometric object sets.
//!
//! Every solver ships with a brute-force oracle so results are checkable at
//! small scale.

pub mod cutuncut;
pub mod embed;
pub mod error;
pub mod flow;
pub mod geometry;
pub mod graph;
pub mod modulator;
pub mod reduction;
pub mod rng;
pub mod subcoloring;

pub use error::Error;
pub use graph::Graph;
