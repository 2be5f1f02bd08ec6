//! Exact arithmetic: integers and rationals, Q(sqrt p), Laurent polynomials,
//! q-expansions and rational linear algebra.

pub mod arith;
pub mod intmat;
pub mod laurent;
pub mod matrix;
pub mod qseries;
pub mod quadext;
pub mod rational;

pub use laurent::{symmetric_to_y, LaurentJson, LaurentPolyQuad, YPoly};
pub use matrix::{AffineSolution, MatrixQ};
pub use qseries::QExpansion;
pub use quadext::{QuadExt, QuadExtJson};
pub use rational::Rational;
