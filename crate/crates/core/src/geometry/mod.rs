//! Projective plane geometry: forms, points, local branches at smooth
//! points, intersection divisors, and smoothness certification.

pub mod branch;
pub mod divisor;
pub mod form;
pub mod point;
pub mod smooth;
mod unipoly;

pub use branch::{
    intersection_multiplicity, local_parametrization, local_parametrization_in_chart,
    BranchParametrization,
};
pub use divisor::{intersection_divisor, IntersectionDivisor};
pub use form::{form_space_dim, monomials_of_degree, HomogeneousForm};
pub use point::ProjPoint;
pub use smooth::{curve_is_smooth, EliminationCertificate, Smoothness};
