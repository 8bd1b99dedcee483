//! Reduce any system of k > n functions (in particular polynomials) on a
//! bounded set over a finite field to exactly n scalar linear
//! combinations with the identical zero set.
//!
//! The machinery: exact GF(p^m) arithmetic ([`gf`]), enumeration of
//! affine and projective space ([`space`]), sparse multivariate
//! polynomials ([`poly`]), the correspondence between projective points
//! and rank-n RREF matrices ([`bijection`]), the row-dropping reduction
//! itself ([`reducer`]), and a brute-force oracle plus the extremal
//! instance showing the cardinality bound is tight ([`oracle`]).

pub mod bijection;
pub mod cli;
pub mod error;
pub mod gf;
pub mod oracle;
pub mod poly;
pub mod reducer;
pub mod space;

pub use bijection::{GenericMatrix, RrefMatrix};
pub use error::{Error, Result};
pub use gf::{FieldElement, FieldSpec};
pub use poly::{Monomial, MultiPoly};
pub use reducer::{ReductionResult, StepRecord, SystemTable};
pub use space::{AffinePoint, ProjectivePoint};
