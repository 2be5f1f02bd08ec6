//! Sparse Laurent polynomials in `X` over Q(sqrt p), and the basis change
//! to polynomials in `Y = X + 1/X` for symmetric ones.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::quadext::{QuadExt, QuadExtJson};
use super::rational::Rational;
use crate::error::{precondition, usage, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPolyQuad {
    p: u64,
    terms: BTreeMap<i64, QuadExt>,
}

impl LaurentPolyQuad {
    pub fn zero(p: u64) -> Self {
        LaurentPolyQuad { p, terms: BTreeMap::new() }
    }

    pub fn constant(c: QuadExt) -> Self {
        Self::monomial(c, 0)
    }

    pub fn one(p: u64) -> Self {
        Self::constant(QuadExt::one(p))
    }

    pub fn monomial(c: QuadExt, exp: i64) -> Self {
        let mut out = Self::zero(c.prime());
        out.add_term(exp, c);
        out
    }

    pub fn from_terms(p: u64, terms: impl IntoIterator<Item = (i64, QuadExt)>) -> Result<Self> {
        let mut out = Self::zero(p);
        for (e, c) in terms {
            if c.prime() != p {
                return Err(usage!("coefficient over Q(sqrt {}) in polynomial over Q(sqrt {p})", c.prime()));
            }
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> QuadExt {
        self.terms.get(&exp).cloned().unwrap_or_else(|| QuadExt::zero(self.p))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &QuadExt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn add_term(&mut self, exp: i64, c: QuadExt) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&exp) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(exp, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "prime mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-QuadExt::one(self.p)))
    }

    pub fn scale(&self, c: &QuadExt) -> Self {
        let mut out = Self::zero(self.p);
        for (e, x) in &self.terms {
            out.add_term(*e, x * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "prime mismatch");
        let mut out = Self::zero(self.p);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    /// `P(X) = P(1/X)` coefficientwise.
    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(|(e, c)| self.coeff(-e) == *c)
    }

    pub fn eval(&self, x: &QuadExt) -> Result<QuadExt> {
        let mut acc = QuadExt::zero(self.p);
        for (e, c) in &self.terms {
            acc = &acc + &(c * &x.pow(*e)?);
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.terms.iter().map(|(e, c)| c.to_f64() * x.powi(*e as i32)).sum()
    }

    pub fn to_json(&self) -> LaurentJson {
        LaurentJson { p: self.p, terms: self.terms.iter().map(|(e, c)| (*e, c.to_json())).collect() }
    }

    pub fn from_json(j: &LaurentJson) -> Result<Self> {
        let terms = j.terms.iter().map(|(e, c)| Ok((*e, QuadExt::from_json(c)?))).collect::<Result<Vec<_>>>()?;
        Self::from_terms(j.p, terms)
    }
}

impl fmt::Display for LaurentPolyQuad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().rev().map(|(e, c)| format!("({c})X^{e}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Wire form `{"p":p,"terms":[[exp,coeff],...]}`, exponents ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentJson {
    pub p: u64,
    pub terms: Vec<(i64, QuadExtJson)>,
}

/// Polynomial in `Y` over Q(sqrt p), coefficient `i` belongs to `Y^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YPoly {
    p: u64,
    coeffs: Vec<QuadExt>,
}

impl YPoly {
    pub fn coeffs(&self) -> &[QuadExt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn eval(&self, y: &QuadExt) -> QuadExt {
        self.coeffs.iter().rev().fold(QuadExt::zero(self.p), |acc, c| &(&acc * y) + c)
    }

    /// Re-expands `Q(X + 1/X)` as a Laurent polynomial.
    pub fn to_laurent(&self) -> LaurentPolyQuad {
        let y = LaurentPolyQuad::from_terms(self.p, [(1, QuadExt::one(self.p)), (-1, QuadExt::one(self.p))]).expect("same prime");
        let mut acc = LaurentPolyQuad::zero(self.p);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&y).add(&LaurentPolyQuad::constant(c.clone()));
        }
        acc
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Rewrites a symmetric Laurent polynomial `P` as `Q(Y)` with `Q(X + 1/X) = P(X)`.
pub fn symmetric_to_y(poly: &LaurentPolyQuad) -> Result<YPoly> {
    if !poly.is_symmetric() {
        return Err(precondition!("Laurent polynomial is not symmetric under X -> 1/X: {poly}"));
    }
    let p = poly.prime();
    let deg = poly.max_exp().unwrap_or(0).max(0) as usize;
    let mut rest = poly.clone();
    let mut coeffs = vec![QuadExt::zero(p); deg + 1];
    for d in (0..=deg).rev() {
        let c = rest.coeff(d as i64);
        if c.is_zero() {
            continue;
        }
        // (X + 1/X)^d = sum_i binom(d, i) X^(d - 2i)
        let mut power = LaurentPolyQuad::zero(p);
        for i in 0..=d {
            let b = Rational::from_integer(binomial(d as u64, i as u64));
            power = power.add(&LaurentPolyQuad::monomial(QuadExt::from_rational(p, b), d as i64 - 2 * i as i64));
        }
        rest = rest.sub(&power.scale(&c));
        coeffs[d] = c;
    }
    debug_assert!(rest.is_zero());
    Ok(YPoly { p, coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};
    use proptest::prelude::*;

    fn lp(p: u64, terms: &[(i64, i64)]) -> LaurentPolyQuad {
        LaurentPolyQuad::from_terms(p, terms.iter().map(|&(e, c)| (e, QuadExt::from_int(p, c)))).unwrap()
    }

    #[test]
    fn basis_change_examples() {
        let q = symmetric_to_y(&lp(2, &[(1, 1), (-1, 1)])).unwrap();
        assert_eq!(q.coeffs(), &[QuadExt::zero(2), QuadExt::one(2)]);
        // (X + 1/X)^2 = X^2 + 2 + X^-2, so X^2 + X^-2 = Y^2 - 2
        let q = symmetric_to_y(&lp(3, &[(2, 1), (-2, 1)])).unwrap();
        assert_eq!(q.coeffs(), &[QuadExt::from_int(3, -2), QuadExt::zero(3), QuadExt::one(3)]);
        let c = QuadExt::new(5, rat(2, 3), int(1));
        let q = symmetric_to_y(&LaurentPolyQuad::constant(c.clone())).unwrap();
        assert_eq!(q.coeffs(), &[c]);
    }

    #[test]
    fn asymmetric_input_is_rejected() {
        let err = symmetric_to_y(&lp(2, &[(1, 1)])).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn json_terms_ascend() {
        let poly = lp(3, &[(2, 1), (-1, 4), (0, -2)]);
        let j = poly.to_json();
        let exps: Vec<i64> = j.terms.iter().map(|t| t.0).collect();
        assert_eq!(exps, vec![-1, 0, 2]);
        assert_eq!(LaurentPolyQuad::from_json(&j).unwrap(), poly);
    }

    proptest! {
        #[test]
        fn y_basis_round_trip(
            pi in 0usize..3,
            coeffs in proptest::collection::vec((-20i64..20, -20i64..20, 1i64..6), 1..6)
        ) {
            let p = [2u64, 3, 7][pi];
            let mut poly = LaurentPolyQuad::zero(p);
            for (d, (a, b, den)) in coeffs.iter().enumerate() {
                let c = QuadExt::new(p, rat(*a, *den), rat(*b, *den));
                poly = poly.add(&LaurentPolyQuad::monomial(c.clone(), d as i64));
                if d > 0 {
                    poly = poly.add(&LaurentPolyQuad::monomial(c, -(d as i64)));
                }
            }
            let q = symmetric_to_y(&poly).unwrap();
            prop_assert_eq!(q.to_laurent(), poly);
        }
    }
}
