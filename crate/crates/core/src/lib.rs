//! Lyndon-root machinery for counting runs in binary words.
//!
//! The crate computes, for a binary word, its period-maximal intervals and
//! their Lyndon-root sets, the charged and idle positions, and the sets
//! `D(w)` and `D′(w)` of positions that stay idle under extensions. On top of
//! that it runs the exhaustive search for the thresholds `m_d` and checks the
//! rational inequalities that turn them into upper bounds on the density of
//! runs.

pub mod analysis;
pub mod bounds;
pub mod cli;
pub mod budget;
pub mod error;
pub mod oracle;
pub mod search;
pub mod word;

pub use budget::Budget;
pub use error::{Error, Result};
pub use word::{Interval, Letter, Order, Word};

/// Exact rational used for all bound comparisons.
pub type Rational = num_rational::Ratio<i64>;
