//! Modular forms at desk scale: level one integral weight eigenforms and the
//! Kohnen plus space of level four, with the operators acting on them.

pub mod level1;
pub mod newform;
pub mod ops;
pub mod plus;

pub use level1::{eisenstein, level1_cusp_dim, level1_eigenform, EigenformInt};
pub use newform::{prop21_predicate, NewformPlusTable, Prop21Report};
pub use ops::{factorization_check, hecke_half_t2, p_op, shimura_match, u_sq, FactorizationReport, POpReport, ShimuraReport};
pub use plus::{f2_series, in_plus_progression, plus_cusp_space, plus_eigenform, theta_series, EigenformHalf};

/// Precision used when a caller does not ask for one.
pub const DEFAULT_PRECISION: usize = 300;
