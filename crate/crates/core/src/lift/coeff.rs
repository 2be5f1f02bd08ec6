use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;

use super::table::CoefficientTable;
use crate::error::{usage, Result};
use crate::exact::arith::big_pow;
use crate::exact::rational::Rational;
use crate::modforms::{EigenformHalf, EigenformInt};
use crate::quadform::{FormIndex, HalfIntegralForm};
use crate::siegel::local::normalized_value;
use crate::siegel::{local_data_for, CapabilityTable, LocalSiegelData, PhiTable};

/// Local data and Kohnen weights of one class.
#[derive(Clone, Debug)]
pub struct ClassData {
    pub h: HalfIntegralForm,
    pub locals: Vec<LocalSiegelData>,
    pub phi: PhiTable,
}

impl ClassData {
    pub fn compute(h: &HalfIntegralForm, caps: &CapabilityTable) -> Result<Self> {
        let locals = local_data_for(h, caps)?;
        let phi = PhiTable::from_local(h, &locals)?;
        Ok(ClassData { h: h.clone(), locals, phi })
    }

    /// All classes of `index`, in parallel; order follows the index.
    pub fn compute_all(index: &FormIndex, caps: &CapabilityTable) -> Result<BTreeMap<HalfIntegralForm, ClassData>> {
        let list: Result<Vec<ClassData>> = index.forms().par_iter().map(|h| Self::compute(h, caps)).collect();
        Ok(list?.into_iter().map(|cd| (cd.h.clone(), cd)).collect())
    }
}

fn check_parity(h: &HalfIntegralForm, k: u32) -> Result<()> {
    let n = h.size() / 2;
    if h.size() % 2 == 1 || (k as usize + n) % 2 == 1 {
        return Err(usage!("the lift needs even size 2n and k = n mod 2, got size {} and k = {k}", h.size()));
    }
    Ok(())
}

/// `c_g(d_h) f_h^(k-1/2) prod_p F~_{p,h}(alpha_p)`, each local factor evaluated
/// through the expansion of `F~` in `Y = X + 1/X`.
pub fn lift_coeff_a(cd: &ClassData, g: &EigenformHalf, f: &EigenformInt) -> Result<Rational> {
    let k = g.k;
    check_parity(&cd.h, k)?;
    let data = cd.h.disc_data()?;
    let mut value = g.c(data.d).cloned().ok_or_else(|| usage!("c_g({}) is beyond the precision of g", data.d))?;
    for ld in &cd.locals {
        value *= normalized_value(&ld.ftilde, ld.fp, f.a_p(ld.p)?, k)?;
    }
    Ok(value)
}

/// `sum_{d | f_h} d^(k-1) phi(d; h) c(d^-2 D_h)` for any coefficient function `c`.
pub fn maass_combination(phi: &PhiTable, k: u32, mut c: impl FnMut(u64) -> Result<Rational>) -> Result<Rational> {
    let disc = phi.h.disc();
    let mut acc = Rational::zero();
    for (&d, w) in &phi.entries {
        if w.is_zero() {
            continue;
        }
        let coeff = big_pow(d as i64, k - 1) * w;
        acc += Rational::from_integer(coeff) * c(disc / (d * d))?;
    }
    Ok(acc)
}

/// `sum_{d | f_h} d^(k-1) phi(d; h) c_g(d^-2 D_h)`.
pub fn lift_coeff_b(phi: &PhiTable, g: &EigenformHalf) -> Result<Rational> {
    check_parity(&phi.h, g.k)?;
    maass_combination(phi, g.k, |m| {
        g.c(m).cloned().ok_or_else(|| usage!("c_g({m}) is needed but g is known below q^{} only", g.expansion.precision()))
    })
}

/// Both routes over every class up to `d_max`.
#[derive(Clone, Debug)]
pub struct LiftTables {
    pub route_a: CoefficientTable,
    pub route_b: CoefficientTable,
    pub classes: BTreeMap<HalfIntegralForm, ClassData>,
}

impl LiftTables {
    /// Classes where the two routes differ.
    pub fn mismatches(&self) -> Vec<HalfIntegralForm> {
        self.route_a.iter().zip(self.route_b.iter()).filter(|((_, a), (_, b))| a != b).map(|((h, _), _)| h.clone()).collect()
    }
}

pub fn lift_table(genus: usize, g: &EigenformHalf, f: &EigenformInt, d_max: u64, caps: &CapabilityTable) -> Result<LiftTables> {
    if genus % 2 == 1 {
        return Err(usage!("genus must be even, got {genus}"));
    }
    let index = FormIndex::new(genus, d_max)?;
    let classes = ClassData::compute_all(&index, caps)?;
    let mut a = BTreeMap::new();
    let mut b = BTreeMap::new();
    for (h, cd) in &classes {
        a.insert(h.clone(), lift_coeff_a(cd, g, f)?);
        b.insert(h.clone(), lift_coeff_b(&cd.phi, g)?);
    }
    let weight = g.k + (genus / 2) as u32;
    Ok(LiftTables {
        route_a: CoefficientTable::from_canonical(weight, index.clone(), a)?,
        route_b: CoefficientTable::from_canonical(weight, index, b)?,
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modforms::{level1_eigenform, plus_eigenform};

    #[test]
    fn genus_two_routes_agree() {
        let g = plus_eigenform(9, 120).unwrap();
        let f = level1_eigenform(18, 20).unwrap();
        let lt = lift_table(2, &g, &f, 40, &CapabilityTable::default()).unwrap();
        assert!(lt.mismatches().is_empty(), "{:?}", lt.mismatches());
        for (h, v) in lt.route_b.iter() {
            let data = h.disc_data().unwrap();
            if data.f == 1 {
                assert_eq!(v, g.c(h.disc()).unwrap());
            }
        }
        // classical Maass relation at Siegel weight k + 1: sum over d dividing the content of d^k c(D / d^2)
        for (h, v) in lt.route_b.iter() {
            let mut expect = Rational::zero();
            for d in crate::exact::arith::divisors(h.content()) {
                expect += Rational::from_integer(big_pow(d as i64, 9)) * g.c(h.disc() / (d * d)).unwrap();
            }
            assert_eq!(v, &expect, "{h}");
        }
    }

    #[test]
    fn zero_form_lifts_to_zero() {
        let mut g = plus_eigenform(9, 120).unwrap();
        g.expansion = g.expansion.scale(&Rational::zero());
        let f = level1_eigenform(18, 20).unwrap();
        let h = HalfIntegralForm::parse("2,0;0,2").unwrap();
        let cd = ClassData::compute(&h, &CapabilityTable::default()).unwrap();
        assert!(lift_coeff_a(&cd, &g, &f).unwrap().is_zero());
        assert!(lift_coeff_b(&cd.phi, &g).unwrap().is_zero());
    }

    #[test]
    fn parity_is_enforced() {
        let g = plus_eigenform(6, 120).unwrap();
        let h = HalfIntegralForm::parse("2,0;0,2").unwrap();
        let cd = ClassData::compute(&h, &CapabilityTable::default()).unwrap();
        assert!(matches!(lift_coeff_b(&cd.phi, &g), Err(crate::Error::Usage(_))));
    }
}
