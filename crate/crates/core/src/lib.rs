//! Exact computation of Ikeda lift Fourier coefficients and of the generalized
//! Maass relations that cut out the image of the lift.

pub mod error;
pub mod exact;
pub mod lift;
pub mod modforms;
pub mod quadform;
pub mod siegel;

pub use error::{Error, Result};
pub use exact::{LaurentPolyQuad, MatrixQ, QExpansion, QuadExt, Rational};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
