use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, int, parse_rational, rat_pow, Rational};
use crate::error::{usage, Result};

/// An element `rat + irr * sqrt(p)` of the real quadratic field Q(sqrt p).
///
/// Every value carries its prime; mixing primes is a usage error and the
/// operator impls panic on it. Use the `checked_*` methods where the primes
/// come from user input.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    p: u64,
    rat: Rational,
    irr: Rational,
}

impl QuadExt {
    pub fn new(p: u64, rat: Rational, irr: Rational) -> Self {
        QuadExt { p, rat, irr }
    }

    pub fn from_rational(p: u64, rat: Rational) -> Self {
        QuadExt { p, rat, irr: Rational::zero() }
    }

    pub fn from_int(p: u64, n: i64) -> Self {
        Self::from_rational(p, int(n))
    }

    pub fn zero(p: u64) -> Self {
        Self::from_int(p, 0)
    }

    pub fn one(p: u64) -> Self {
        Self::from_int(p, 1)
    }

    pub fn sqrt_p(p: u64) -> Self {
        QuadExt { p, rat: Rational::zero(), irr: Rational::one() }
    }

    /// `p^(e/2)` for any integer `e`.
    pub fn half_power(p: u64, e: i64) -> Self {
        let base = int(p as i64);
        let half = e.div_euclid(2);
        let scale = rat_pow(&base, half);
        if e.rem_euclid(2) == 0 {
            Self::from_rational(p, scale)
        } else {
            QuadExt { p, rat: Rational::zero(), irr: scale }
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn rat(&self) -> &Rational {
        &self.rat
    }

    pub fn irr(&self) -> &Rational {
        &self.irr
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.irr.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.rat.clone())
    }

    /// Field norm `rat^2 - p irr^2`.
    pub fn norm(&self) -> Rational {
        &self.rat * &self.rat - int(self.p as i64) * &self.irr * &self.irr
    }

    pub fn conjugate(&self) -> Self {
        QuadExt { p: self.p, rat: self.rat.clone(), irr: -self.irr.clone() }
    }

    fn same_prime(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(usage!("mixed primes in Q(sqrt p) arithmetic: {} vs {}", self.p, other.p));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        Ok(QuadExt { p: self.p, rat: &self.rat + &other.rat, irr: &self.irr + &other.irr })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        let p = int(self.p as i64);
        Ok(QuadExt {
            p: self.p,
            rat: &self.rat * &other.rat + p * &self.irr * &other.irr,
            irr: &self.rat * &other.irr + &self.irr * &other.rat,
        })
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(usage!("division by zero in Q(sqrt {})", self.p));
        }
        Ok(QuadExt { p: self.p, rat: &self.rat / &n, irr: -&self.irr / &n })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QuadExt { p: self.p, rat: &self.rat * c, irr: &self.irr * c }
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = QuadExt::one(self.p);
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    pub fn to_f64(&self) -> f64 {
        super::rational::to_f64(&self.rat) + super::rational::to_f64(&self.irr) * (self.p as f64).sqrt()
    }

    pub fn to_json(&self) -> QuadExtJson {
        QuadExtJson { rat: format_rational(&self.rat), irr: format_rational(&self.irr), p: self.p }
    }

    pub fn from_json(j: &QuadExtJson) -> Result<Self> {
        Ok(QuadExt { p: j.p, rat: parse_rational(&j.rat)?, irr: parse_rational(&j.irr)? })
    }
}

/// Wire form `{"rat":"a/b","irr":"c/d","p":p}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadExtJson {
    pub rat: String,
    pub irr: String,
    pub p: u64,
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.irr.is_zero() {
            write!(f, "{}", self.rat)
        } else if self.rat.is_zero() {
            write!(f, "{}*sqrt({})", self.irr, self.p)
        } else {
            let sign = if self.irr.is_negative() { "-" } else { "+" };
            write!(f, "{} {} {}*sqrt({})", self.rat, sign, self.irr.abs(), self.p)
        }
    }
}

impl<'a> Add<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn add(self, o: &QuadExt) -> QuadExt {
        self.checked_add(o).expect("prime mismatch")
    }
}

impl<'a> Sub<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn sub(self, o: &QuadExt) -> QuadExt {
        self.checked_add(&-o).expect("prime mismatch")
    }
}

impl<'a> Mul<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn mul(self, o: &QuadExt) -> QuadExt {
        self.checked_mul(o).expect("prime mismatch")
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { p: self.p, rat: -self.rat.clone(), irr: -self.irr.clone() }
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;
    use proptest::prelude::*;

    fn q(p: u64, a: i64, b: i64) -> QuadExt {
        QuadExt::new(p, int(a), int(b))
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(&q(2, 0, 1) * &q(2, 0, 1), q(2, 2, 0));
        let x = QuadExt::new(3, rat(5, 7), rat(-2, 3));
        assert_eq!(&q(3, 1, 0) * &x, x);
        assert_eq!(&q(5, 1, 1) * &q(5, 1, -1), q(5, -4, 0));
    }

    #[test]
    fn mixed_primes_are_rejected() {
        let err = q(2, 1, 1).checked_mul(&q(3, 1, 1)).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn half_powers() {
        assert_eq!(QuadExt::half_power(3, 2), q(3, 3, 0));
        assert_eq!(QuadExt::half_power(3, 1), q(3, 0, 1));
        assert_eq!(QuadExt::half_power(2, -1), QuadExt::new(2, int(0), rat(1, 2)));
        assert_eq!(QuadExt::half_power(2, -3), QuadExt::new(2, int(0), rat(1, 4)));
    }

    #[test]
    fn json_shape() {
        let x = QuadExt::new(5, rat(1, 2), rat(-3, 4));
        let s = serde_json::to_string(&x.to_json()).unwrap();
        assert_eq!(s, r#"{"rat":"1/2","irr":"-3/4","p":5}"#);
        let back: QuadExtJson = serde_json::from_str(&s).unwrap();
        assert_eq!(QuadExt::from_json(&back).unwrap(), x);
    }

    proptest! {
        #[test]
        fn nonzero_elements_are_invertible(
            pi in 0usize..4, a in -50i64..50, b in 1i64..20, c in -50i64..50, d in 1i64..20
        ) {
            let p = [2u64, 3, 5, 7][pi];
            let x = QuadExt::new(p, rat(a, b), rat(c, d));
            prop_assume!(!x.is_zero());
            let y = x.inv().unwrap();
            prop_assert_eq!(&x * &y, QuadExt::one(p));
        }
    }
}
