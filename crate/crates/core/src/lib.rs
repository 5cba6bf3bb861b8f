//! Exact computation of splitting numbers of a smooth plane cubic under
//! simple cyclic covers of the projective plane.
//!
//! Everything runs over a prime field F_p with p < 2^16. The central
//! quantity is a divisor-class order on the cubic, computed two independent
//! ways: once through the elliptic group law, and once through interpolation
//! of plane curves with prescribed vanishing. The [`construct`] module builds
//! branch curves of type (b, m) realizing any prescribed class order mu | m,
//! and [`certificate`] packages every run into a machine-checkable record.

pub mod arith;
pub mod certificate;
pub mod construct;
pub mod elliptic;
pub mod error;
pub mod geometry;
pub mod splitting;

pub use error::{Error, Result};
