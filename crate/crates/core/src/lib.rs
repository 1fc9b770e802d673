//! Exact computations with Dunkl operators, rational Cherednik algebras and
//! quasi-invariants of finite complex reflection groups.
//!
//! Every scalar lives in a cyclotomic field ([`CycNum`]); there is no
//! floating point anywhere in the computational path.

pub mod cyclotomic;
pub mod derham;
pub mod dunkl;
pub mod error;
pub mod groups;
pub mod kzconn;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod polyalg;
pub mod quasiinv;
pub mod report;
pub mod scalar;

pub use cyclotomic::CycNum;
pub use error::{Error, Result};
pub use groups::{Family, Multiplicity, ReflectionGroup, WRepresentation};
pub use scalar::{Field, Rat};

/// Polynomials over the cyclotomic scalars.
pub type Poly = poly::MPoly<CycNum>;
/// Matrices over the cyclotomic scalars.
pub type CMatrix = linalg::Matrix<CycNum>;
/// Polynomials with rational coefficients.
pub type RatPoly = poly::MPoly<Rat>;
