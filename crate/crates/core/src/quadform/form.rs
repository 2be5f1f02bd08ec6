//! Positive definite half-integral matrices and even lattices.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::disc::{disc_split, DiscriminantData};
use crate::error::{precondition, usage, Result};
use crate::exact::intmat::{self, IMat};
use crate::exact::rational::{rat, Rational};

/// A positive definite half-integral symmetric matrix `h`, stored as the even
/// integral matrix `2h`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfIntegralForm {
    s: IMat,
}

impl HalfIntegralForm {
    /// Builds `h` from the even matrix `2h`.
    pub fn from_even(s: IMat) -> Result<Self> {
        check_even_symmetric(&s)?;
        if !intmat::is_positive_definite(&s) {
            return Err(precondition!("matrix {} is not positive definite", encode(&s)));
        }
        Ok(HalfIntegralForm { s })
    }

    /// Parses the row-major encoding of `2h`, e.g. `"2,1;1,2"`.
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_even(decode(text)?)
    }

    pub fn size(&self) -> usize {
        self.s.len()
    }

    /// The even matrix `2h`.
    pub fn even(&self) -> &IMat {
        &self.s
    }

    pub fn entry(&self, i: usize, j: usize) -> Rational {
        rat(self.s[i][j] as i64, 2)
    }

    pub fn encoding(&self) -> String {
        encode(&self.s)
    }

    pub fn det_even(&self) -> i128 {
        intmat::det(&self.s)
    }

    /// `D_h = 4^[m/2] det h`, which is `det(2h)` for even `m` and `det(2h)/2` for odd `m`.
    pub fn disc(&self) -> u64 {
        let d = self.det_even();
        (if self.size() % 2 == 1 { d / 2 } else { d }) as u64
    }

    /// Splitting data of `D_h` relative to `n = m/2` (even `m` only).
    pub fn disc_data(&self) -> Result<DiscriminantData> {
        if self.size() % 2 == 1 {
            return Err(usage!("discriminant splitting needs an even size, got {}", self.size()));
        }
        disc_split(self.disc(), (self.size() / 2 % 2) as u8)
    }

    /// Content of `h`: the gcd of its diagonal entries and twice its off-diagonal entries
    /// (that is, of the entries of `2h` with the diagonal halved).
    pub fn content(&self) -> u64 {
        let mut g: i128 = 0;
        for i in 0..self.size() {
            for j in i..self.size() {
                let x = if i == j { self.s[i][i] / 2 } else { self.s[i][j] };
                g = num_integer::gcd(g, x);
            }
        }
        g as u64
    }

    pub fn lattice(&self) -> EvenLattice {
        EvenLattice { s: self.s.clone() }
    }

    /// `h[U] = U^t h U`.
    pub fn transform(&self, u: &IMat) -> Result<Self> {
        Self::from_even(intmat::congruence(&self.s, u))
    }
}

impl fmt::Display for HalfIntegralForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encoding())
    }
}

impl Serialize for HalfIntegralForm {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.encoding())
    }
}

impl<'de> Deserialize<'de> for HalfIntegralForm {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        HalfIntegralForm::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// A positive definite even integral symmetric matrix `S`, the Gram matrix of
/// `L = Z^r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EvenLattice {
    s: IMat,
}

impl EvenLattice {
    pub fn new(s: IMat) -> Result<Self> {
        check_even_symmetric(&s)?;
        if !intmat::is_positive_definite(&s) {
            return Err(precondition!("matrix {} is not positive definite", encode(&s)));
        }
        Ok(EvenLattice { s })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(decode(text)?)
    }

    pub fn gram(&self) -> &IMat {
        &self.s
    }

    pub fn rank(&self) -> usize {
        self.s.len()
    }

    pub fn det(&self) -> i128 {
        intmat::det(&self.s)
    }

    pub fn encoding(&self) -> String {
        encode(&self.s)
    }

    /// `S[x] = x^t S x`.
    pub fn norm(&self, x: &[i128]) -> i128 {
        intmat::quad_value(&self.s, x)
    }

    /// The half-integral matrix `S/2`.
    pub fn half(&self) -> HalfIntegralForm {
        HalfIntegralForm { s: self.s.clone() }
    }
}

impl fmt::Display for EvenLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encoding())
    }
}

fn check_even_symmetric(s: &IMat) -> Result<()> {
    let m = s.len();
    if m == 0 {
        return Err(usage!("empty matrix"));
    }
    for (i, row) in s.iter().enumerate() {
        if row.len() != m {
            return Err(usage!("matrix is not square"));
        }
        if row[i] % 2 != 0 {
            return Err(usage!("diagonal entry {} of the doubled matrix is odd", row[i]));
        }
        for j in 0..m {
            if s[j][i] != row[j] {
                return Err(usage!("matrix is not symmetric"));
            }
        }
    }
    Ok(())
}

pub fn encode(s: &IMat) -> String {
    s.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")).collect::<Vec<_>>().join(";")
}

pub fn decode(text: &str) -> Result<IMat> {
    text.trim()
        .split(';')
        .map(|row| row.split(',').map(|x| x.trim().parse::<i128>().map_err(|_| usage!("bad matrix entry {x:?} in {text:?}"))).collect())
        .collect()
}

/// The bordered matrix `[[B, x/2], [x^t/2, a]]` where `x = 2B alpha` is integral.
///
/// Returned as a half-integral form of size `size(B) + 1`; fails unless
/// `a > B[alpha]`.
pub fn border(b: &HalfIntegralForm, a: i128, x: &[i128]) -> Result<HalfIntegralForm> {
    let m = b.size();
    if x.len() != m {
        return Err(usage!("border vector has {} entries, expected {m}", x.len()));
    }
    let mut s = b.even().clone();
    for (row, xi) in s.iter_mut().zip(x) {
        row.push(*xi);
    }
    let mut last = x.to_vec();
    last.push(2 * a);
    s.push(last);
    if border_disc_scaled(b, a, x) <= 0 {
        return Err(precondition!("a = {a} is not larger than B[alpha] for x = {x:?}"));
    }
    Ok(HalfIntegralForm { s })
}

/// `det(2B) (2a - x^t (2B)^{-1} x)`, the determinant of the doubled border.
pub fn border_disc_scaled(b: &HalfIntegralForm, a: i128, x: &[i128]) -> i128 {
    let adj = intmat::adjugate(b.even());
    2 * a * b.det_even() - intmat::quad_value(&adj, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn discriminants() {
        assert_eq!(HalfIntegralForm::parse("2,1;1,2").unwrap().disc(), 3);
        assert_eq!(HalfIntegralForm::parse("10").unwrap().disc(), 5);
        assert_eq!(HalfIntegralForm::parse("2,0,0;0,2,0;0,0,2").unwrap().disc(), 4);
        assert!(HalfIntegralForm::parse("2,3;3,2").is_err());
        assert!(HalfIntegralForm::parse("1,0;0,2").is_err());
    }

    #[test]
    fn border_examples() {
        let b = HalfIntegralForm::parse("2").unwrap();
        let h = border(&b, 1, &[0]).unwrap();
        assert_eq!(h.encoding(), "2,0;0,2");
        assert_eq!(h.disc(), 4);
        let h = border(&b, 1, &[1]).unwrap();
        assert_eq!(h.encoding(), "2,1;1,2");
        assert_eq!(h.disc(), 3);
        assert_eq!(border(&b, 1, &[2]).unwrap_err().exit_code(), 3);
    }

    proptest! {
        #[test]
        fn border_determinant(a in 1i128..30, x in proptest::collection::vec(-6i128..7, 3), which in 0usize..3) {
            let b = ["2,1,1;1,2,1;1,1,2", "2,0,0;0,2,1;0,1,2", "2,1,0;1,4,1;0,1,6"][which];
            let b = HalfIntegralForm::parse(b).unwrap();
            let scaled = border_disc_scaled(&b, a, &x);
            prop_assume!(scaled > 0);
            let h = border(&b, a, &x).unwrap();
            prop_assert_eq!(h.det_even(), scaled);
        }
    }
}
