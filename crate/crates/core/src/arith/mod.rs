//! Exact arithmetic kernel: prime fields, truncated power series, and dense
//! linear algebra over a prime field.
//!
//! Everything here is immutable after construction and safe to share across
//! threads.

pub mod field;
pub mod matrix;
pub mod series;

pub use field::{PrimeField, Scalar};
pub use matrix::DenseMatrix;
pub use series::{TruncSeries, Valuation};
