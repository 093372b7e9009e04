//! Shared error type for the fallible operations in this crate.

use std::fmt;

/// Errors reported by exact solvers, geometric predicates and parsers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An exact search was asked to run past its configured size cap.
    CapExceeded { size: usize, cap: usize, what: &'static str },
    /// Forced source and sink sides overlap, or forcing contradicts itself.
    Infeasible(String),
    /// A partial coloring handed to the extender already violates the
    /// no-monochromatic-P3 condition.
    InvalidPartial { a: u32, b: u32, c: u32 },
    /// A polytope has no extent (all vertices coincide).
    DegenerateGeometry(String),
    /// An emitted object set has a non-designed pair too close to the
    /// adjacency threshold for double precision to be trusted.
    SlackViolation { pair: (usize, usize), distance: f64, threshold: f64 },
    /// A graph handed to `check_propagation` is not two cliques joined by a
    /// matching of the required size.
    ShapeMismatch(String),
    /// The chosen grid has fewer non-central cells than the formula has
    /// clauses. Grid selection prevents this; seeing it is a bug.
    GridTooSmall { cells: usize, clauses: usize },
    /// Input text could not be parsed.
    Parse(String),
    /// An input value violates a documented precondition or invariant.
    InvalidInput(String),
    /// A formula contains a negative literal.
    NegativeLiteral { clause: usize, literal: i64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::CapExceeded { size, cap, what } => {
                write!(f, "{what}: instance size {size} exceeds exact-search cap {cap}")
            }
            Error::Infeasible(msg) => write!(f, "infeasible: {msg}"),
            Error::InvalidPartial { a, b, c } => {
                write!(f, "partial coloring has monochromatic induced path {a}-{b}-{c}")
            }
            Error::DegenerateGeometry(msg) => write!(f, "degenerate geometry: {msg}"),
            Error::SlackViolation { pair, distance, threshold } => write!(
                f,
                "objects {} and {} sit at distance {distance} within slack of threshold {threshold}",
                pair.0, pair.1
            ),
            Error::ShapeMismatch(msg) => write!(f, "shape mismatch: {msg}"),
            Error::GridTooSmall { cells, clauses } => {
                write!(f, "grid has {cells} usable cells for {clauses} clauses")
            }
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::NegativeLiteral { clause, literal } => {
                write!(f, "clause {clause} contains negative literal {literal}")
            }
        }
    }
}

impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
