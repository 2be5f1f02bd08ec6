//! Half-integral forms, discriminant data, local invariants, enumeration of
//! classes and bordering.

pub mod disc;
pub mod enumerate;
pub mod form;
pub mod padic;

pub use disc::{disc_split, psi_p, DiscriminantData};
pub use enumerate::{enumerate_forms, find_prime_disc_form, FormIndex};
pub use form::{border, EvenLattice, HalfIntegralForm};
pub use padic::{eta, hilbert, is_maximal, radical_dim, witt_index, Place};
