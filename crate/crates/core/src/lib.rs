//! Exact enumeration and cross-verification of binary Hermitian form classes
//! over imaginary quadratic rings, their representation numbers, the
//! associated quaternion ideal classes, partial zeta coefficients and Brandt
//! operators.

pub mod algebraic;
pub mod arith;
pub mod enumerate;
pub mod error;
pub mod hecke;
pub mod hermitian;
pub mod linalg;
pub mod orthogonal;
pub mod pipeline;
pub mod quad_field;
pub mod quaternion;
pub mod zeta;

pub use error::{Error, Result};
pub use quad_field::{FieldParams, QuadInt};
