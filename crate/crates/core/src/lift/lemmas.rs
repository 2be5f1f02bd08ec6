use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::coeff::ClassData;
use super::jacobi::{jacobi_keys, JacobiKey};
use super::maass::maass_verify;
use super::table::{CoefficientTable, MaassParameter};
use crate::error::{usage, Result};
use crate::exact::arith::{big_pow, kronecker, prime_divisors};
use crate::exact::intmat;
use crate::exact::rational::{format_rational, Rational};
use crate::modforms::in_plus_progression;
use crate::quadform::disc::disc_split;
use crate::quadform::form::border;
use crate::quadform::padic::{eta, Place};
use crate::quadform::{enumerate_forms, EvenLattice, HalfIntegralForm};

/// `prod_{p | D_B} eta_p(B)` next to the value `+1` for `n = 0, 1 mod 4`, `-1` otherwise.
pub fn eta_product(b: &HalfIntegralForm) -> Result<(i8, i8)> {
    eta_product_with(b, eta)
}

/// As [`eta_product`] with `eta_p` supplied by the caller.
pub fn eta_product_with(b: &HalfIntegralForm, eta_fn: impl Fn(&EvenLattice, Place) -> Result<i8>) -> Result<(i8, i8)> {
    let s = b.lattice();
    let mut prod = 1;
    for p in prime_divisors(b.disc() as i128) {
        prod *= eta_fn(&s, Place::Prime(p))?;
    }
    let n = (b.size() + 1) / 2;
    let expect = if matches!(n % 4, 0 | 1) { 1 } else { -1 };
    Ok((prod, expect))
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma43Report {
    pub m: u64,
    pub admissible: bool,
    pub criterion: bool,
    pub witness: Option<JacobiKey>,
}

/// Residue criterion for `D(B_{a,alpha}) = m` next to a direct search.
///
/// `D` only depends on `x = 2B alpha` modulo `2B Z^(2n-1)` once `a` is solved
/// for, so searching `x` in `[0, search_bound)^(2n-1)` is exhaustive as soon as
/// `search_bound >= det(2B)`.
pub fn lemma43(b: &HalfIntegralForm, m: u64, search_bound: i128) -> Result<Lemma43Report> {
    let p = b.disc();
    if b.size() % 2 == 0 {
        return Err(usage!("B must have odd size, got {}", b.size()));
    }
    let n = (b.size() + 1) / 2;
    let signed = if n % 2 == 1 { -(m as i128) } else { m as i128 };
    let admissible = matches!(signed.rem_euclid(4), 0 | 1);
    let forbidden = if matches!(n % 4, 0 | 1) { -1 } else { 1 };
    let criterion = admissible && kronecker(signed, p as i128) != forbidden;
    let s2 = b.even();
    let det = b.det_even();
    let adj = intmat::adjugate(s2);
    let size = b.size();
    let mut witness = None;
    let mut x = vec![0i128; size];
    'search: loop {
        let num = m as i128 + intmat::quad_value(&adj, &x);
        if num % (2 * det) == 0 {
            witness = Some((num / (2 * det), x.clone()));
            break 'search;
        }
        let mut i = 0;
        while i < size {
            x[i] += 1;
            if x[i] < search_bound {
                break;
            }
            x[i] = 0;
            i += 1;
        }
        if i == size {
            break;
        }
    }
    if let Some((a, x)) = &witness {
        debug_assert_eq!(border(b, *a, x)?.disc(), m);
    }
    Ok(Lemma43Report { m, admissible, criterion, witness })
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma44Report {
    pub p: u64,
    pub eta: i8,
    pub premise: bool,
    pub checked: usize,
    pub failures: Vec<(JacobiKey, String, String)>,
}

impl Lemma44Report {
    pub fn pass(&self) -> bool {
        self.premise && self.failures.is_empty()
    }
}

/// `c_F(B_{a,alpha}) = c(D) + eta_p(2B) p^k c(p^-2 D)` over bordered entries with `D <= bound`;
/// the second term is present when `f_p(D) >= 1`.
pub fn lemma44_check(
    table: &CoefficientTable,
    b: &HalfIntegralForm,
    c: &MaassParameter,
    bound: u64,
    classes: &BTreeMap<HalfIntegralForm, ClassData>,
) -> Result<Lemma44Report> {
    let p = b.disc();
    let s = b.lattice();
    let e = eta(&s, Place::Prime(p))?;
    let premise = maass_verify(table, c, classes)?.pass;
    let parity = ((b.size() + 1) / 2 % 2) as u8;
    let pk = Rational::from_integer(big_pow(p as i64, c.k) * e);
    let radius = (0..s.rank()).map(|i| s.gram()[i][i]).max().unwrap_or(1);
    let mut failures = Vec::new();
    let mut checked = 0;
    for key in jacobi_keys(&s, bound, radius) {
        let h = border(b, key.0, &key.1)?;
        let d = h.disc();
        let mut expect = c.get(d)?.clone();
        if disc_split(d, parity)?.fp_at(p) >= 1 {
            expect += &pk * c.get(d / (p * p))?;
        }
        let actual = table.get(&h)?;
        checked += 1;
        if actual != &expect {
            failures.push((key, format_rational(actual), format_rational(&expect)));
        }
    }
    Ok(Lemma44Report { p, eta: e, premise, checked, failures })
}

#[derive(Clone, Debug, Serialize)]
pub struct Cor41Report {
    pub n: usize,
    pub bound: u64,
    pub achieved: BTreeSet<u64>,
    pub predicted: BTreeSet<u64>,
    pub equal: bool,
}

/// `{D_h : h in T_2n^+, D_h <= bound}` against `D_n`, without 1 when `n = 2 mod 4`.
pub fn cor41_scan(n: usize, bound: u64) -> Result<Cor41Report> {
    if !(n == 1 || n == 2) {
        return Err(usage!("the scan covers genus 2 and 4, got n = {n}"));
    }
    let achieved: BTreeSet<u64> = enumerate_forms(2 * n, bound)?.iter().map(|h| h.disc()).collect();
    let predicted: BTreeSet<u64> = (1..=bound).filter(|&m| in_plus_progression(m, n as u32) && !(m == 1 && n % 4 == 2)).collect();
    let equal = achieved == predicted;
    Ok(Cor41Report { n, bound, achieved, predicted, equal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadform::find_prime_disc_form;

    #[test]
    fn eta_products() {
        for p in [2u64, 3, 5, 7] {
            let b1 = find_prime_disc_form(p, 1).unwrap();
            let (prod, expect) = eta_product(&b1).unwrap();
            assert_eq!((prod, expect), (1, 1), "p = {p}, size 1");
            let b3 = find_prime_disc_form(p, 3).unwrap();
            let (prod, expect) = eta_product(&b3).unwrap();
            assert_eq!((prod, expect), (-1, -1), "p = {p}, size 3");
        }
    }

    #[test]
    fn border_discriminant_criterion() {
        for p in [2u64, 3, 5, 7] {
            for size in [1usize, 3] {
                let b = find_prime_disc_form(p, size).unwrap();
                let bound = b.det_even();
                for m in 1..=60 {
                    let r = lemma43(&b, m, bound).unwrap();
                    assert_eq!(r.criterion, r.witness.is_some(), "p = {p}, size {size}, m = {m}");
                    if let Some((a, x)) = &r.witness {
                        assert_eq!(border(&b, *a, x).unwrap().disc(), m);
                    }
                }
            }
        }
    }

    #[test]
    fn achieved_discriminants() {
        let r = cor41_scan(1, 100).unwrap();
        assert!(r.equal);
        assert!(!r.achieved.contains(&1) && !r.achieved.contains(&2));
        let r = cor41_scan(2, 40).unwrap();
        assert!(r.equal);
        assert!(!r.achieved.contains(&1));
        assert!(r.achieved.contains(&4) && r.achieved.contains(&5));
    }
}
