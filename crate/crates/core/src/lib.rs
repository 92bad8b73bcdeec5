//! Certified inhomogeneous Kronecker approximation in algebraic lattices,
//! avoiding algebraic sets and sublattices.

pub mod error;
pub mod exactnum;

pub use error::{Error, Result};
pub mod fieldlat;
pub mod geometry;
pub mod avoidance;
pub mod kronecker;
pub mod problem;
pub mod certificate;

pub use certificate::{verify, Certificate, VerifyReport};
pub use exactnum::{Field, FieldElement, Interval};
pub use kronecker::{solve_theorem1, solve_theorem2, Solution};
pub use problem::Problem;
