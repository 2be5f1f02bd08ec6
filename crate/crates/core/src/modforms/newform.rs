use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{usage, Result};
use crate::exact::arith::big_pow;
use crate::exact::rational::Rational;
use crate::quadform::disc::psi_of;

/// Partial coefficients of a form in `S^{new,+}_{k+1/2}(4p)`; indices below
/// `precision` that are absent are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NewformPlusTable {
    pub k: u32,
    pub p: u64,
    pub eps: i8,
    pub precision: u64,
    pub coeffs: BTreeMap<u64, Rational>,
}

impl NewformPlusTable {
    pub fn zero(k: u32, p: u64, eps: i8, precision: u64) -> Self {
        NewformPlusTable { k, p, eps, precision, coeffs: BTreeMap::new() }
    }

    pub fn c(&self, m: u64) -> Rational {
        self.coeffs.get(&m).cloned().unwrap_or_default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prop21Report {
    /// `c(m) = 0` whenever `psi_p((-1)^k m) = eps`.
    pub vanishing: bool,
    pub vanishing_witness: Option<u64>,
    /// `c(p^2 m) = eps p^(k-1) c(m)`.
    pub u_eigen: bool,
    pub u_eigen_witness: Option<u64>,
}

/// Tests both conditions on `1 <= m <= m_max`.
pub fn prop21_predicate(table: &NewformPlusTable, m_max: u64) -> Result<Prop21Report> {
    let p = table.p;
    if table.precision <= m_max * p * p {
        return Err(usage!("table known below {} only, need more than {} for m_max = {m_max}", table.precision, m_max * p * p));
    }
    let sign = if table.k % 2 == 1 { -1 } else { 1 };
    let scale = Rational::from_integer(big_pow(p as i64, table.k - 1) * table.eps);
    let vanishing_witness = (1..=m_max).find(|&m| psi_of(sign * m as i128, p) == table.eps && !table.c(m).is_zero());
    let u_eigen_witness = (1..=m_max).find(|&m| table.c(p * p * m) != &scale * table.c(m));
    Ok(Prop21Report { vanishing: vanishing_witness.is_none(), vanishing_witness, u_eigen: u_eigen_witness.is_none(), u_eigen_witness })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_table_holds_vacuously() {
        let r = prop21_predicate(&NewformPlusTable::zero(6, 3, 1, 1000), 50).unwrap();
        assert!(r.vanishing && r.u_eigen);
    }

    #[test]
    fn violation_is_witnessed() {
        let mut t = NewformPlusTable::zero(6, 3, 1, 1000);
        // psi_3(1) = 1
        t.coeffs.insert(1, Rational::from_integer(5.into()));
        let r = prop21_predicate(&t, 50).unwrap();
        assert_eq!(r.vanishing_witness, Some(1));
    }

    #[test]
    fn constructed_u_eigenvector() {
        let (k, p, eps) = (6u32, 3u64, -1i8);
        let mut t = NewformPlusTable::zero(k, p, eps, 2000);
        let scale = big_pow(p as i64, k - 1) * eps;
        // seed on m with p not dividing m, then propagate c(p^2 m) = eps p^(k-1) c(m)
        for m in [1u64, 4, 7, 10] {
            let mut c = Rational::from_integer((m as i64 + 1).into());
            let mut idx = m;
            while idx < 2000 {
                t.coeffs.insert(idx, c.clone());
                c *= Rational::from_integer(scale.clone());
                idx *= p * p;
            }
        }
        let r = prop21_predicate(&t, 100).unwrap();
        assert!(r.u_eigen);
        assert!(r.vanishing);
    }

    #[test]
    fn insufficient_data() {
        assert!(prop21_predicate(&NewformPlusTable::zero(6, 5, 1, 100), 10).is_err());
    }
}
