//! Zero-pattern analysis of sets of stochastic matrices.
//!
//! A stochastic matrix belongs to the positive-column, scrambling,
//! Sarymsakov or SIA class depending only on which of its entries are
//! nonzero. This crate works with those zero patterns directly: it decides
//! class membership, computes the four shortest-product indices of a matrix
//! set (the SIA-index via Lyndon-word enumeration, the rest via
//! breadth-first search over the product pattern semigroup), generates the
//! Černý, Wielandt and line automaton families, runs exhaustive searches
//! for the maximum SIA-index over all automaton sets of a given dimension,
//! and encodes 3-SAT and set-cover instances as matrix sets.
//!
//! Quick tour:
//!
//! ```
//! use sia_core::{classes, families, indices};
//!
//! let set = families::cerny_set(4);
//! assert_eq!(indices::sia_index(&set, None).unwrap().value, Some(4));
//! assert_eq!(indices::pc_index(&set).unwrap().value, Some(9));
//!
//! let report = classes::classify(set.pattern(0)).unwrap();
//! assert!(!report.is_sia); // the bare cycle is periodic
//! ```

pub mod classes;
pub mod error;
pub mod families;
pub mod indices;
pub mod io;
pub mod pattern;
pub mod reductions;
pub mod search;
pub mod word;

pub use classes::ClassReport;
pub use error::{Error, Result};
pub use indices::{IndexResult, MatrixClass};
pub use pattern::{BooleanPattern, MatrixSet, StateSet, StochasticMatrix};
pub use search::{SearchOptions, SearchSummary};
pub use word::Word;
