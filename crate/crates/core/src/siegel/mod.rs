//! Local Siegel series and everything derived from them: the polynomials
//! `F_p`, `F~_p`, the Laurent polynomials `l_e`, `lambda_{p,N}`, `l_{p,S,N}`,
//! the weights `phi(d; h)` and exact evaluations at Satake parameters.

pub mod capability;
pub mod local;
pub mod lpoly;
pub mod series;

pub use capability::CapabilityTable;
pub use local::{gamma_poly, local_data_for, phi, LocalSiegelData, PhiTable};
pub use lpoly::{beta_eval, l_poly, lambda_normalized, lambda_poly, lsn_poly};
pub use series::{nu_exponent, siegel_bruteforce};
