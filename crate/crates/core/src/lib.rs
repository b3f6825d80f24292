//! Exact reconstruction of semisimple cohomological field theories.
//!
//! Correlators of a CohFT with unit are assembled from its topological part
//! and an R-matrix by a sum over stable graphs. Everything runs in exact
//! arithmetic over `Q` or over rings of truncated series and rational
//! functions built on it.

pub mod arith;
pub mod cohft;
pub mod correlators;
pub mod error;
pub mod graphs;
pub mod hilbert;
pub mod reconstruction;
pub mod rspin;
pub mod verlinde;

pub use error::{Error, Result};
