//! The global layer: Ikeda lift coefficients, the Maass relation system,
//! Fourier-Jacobi coefficients and the lemmas relating them.

pub mod coeff;
pub mod jacobi;
pub mod lemmas;
pub mod maass;
pub mod table;

pub use coeff::{lift_coeff_a, lift_coeff_b, lift_table, ClassData, LiftTables};
pub use jacobi::{fj_extract, inks_det2, jacobi_keys, mtype_check, phi_bgh, thm31_coeff, JacobiKey, JacobiTable, MTypeReport};
pub use lemmas::{cor41_scan, eta_product, eta_product_with, lemma43, lemma44_check, Cor41Report, Lemma43Report, Lemma44Report};
pub use maass::{lemma11_check, maass_solve, maass_verify, square_shift, MaassReport, MaassSolution, SolutionKind};
pub use table::{CoefficientTable, MaassParameter};
