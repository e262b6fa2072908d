//! Exact computation of splitting types of normal bundles of rational
//! curves, their elementary modifications, and the slope bookkeeping used to
//! reason about stability of normal bundles of space curves.

pub mod curve;
pub mod error;
pub mod field;
pub mod graded;
pub mod linalg;
pub mod modifications;
pub mod planner;
pub mod poly;
pub mod stability;

pub use error::{Error, Result};
pub use field::FieldSpec;

/// Engine version reported in command results.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
